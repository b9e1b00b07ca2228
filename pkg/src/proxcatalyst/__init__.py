"""Proximal-point meta-acceleration for nonconvex composite finite sums."""

from .catalyst import (
    AutoAdaptError,
    CatalystAbort,
    CatalystConfig,
    CatalystResult,
    TraceRecord,
    alpha_next,
    auto_adapt,
    check_criteria,
    extrapolate,
    run_catalyst,
    update_anchor,
)
from .core import (
    BallIndicator,
    ColumnBallIndicator,
    CompositeObjective,
    Counters,
    ElasticNet,
    ProxSubproblem,
    evaluate,
    outer_stationarity,
    prox_gradient_step,
    stationarity_residual,
)
from .solvers import (
    GD,
    SAGA,
    SVRG,
    InnerRunResult,
    MethodConstants,
    SolverKind,
    budget_S,
    budget_T,
    method_constants,
    run_inner,
    solver_by_name,
    warm_start,
)

__all__ = [
    "AutoAdaptError", "BallIndicator", "CatalystAbort", "CatalystConfig",
    "CatalystResult", "ColumnBallIndicator", "CompositeObjective", "Counters",
    "ElasticNet", "GD", "InnerRunResult", "MethodConstants", "ProxSubproblem",
    "SAGA", "SVRG", "SolverKind", "TraceRecord", "alpha_next", "auto_adapt",
    "budget_S", "budget_T", "check_criteria", "evaluate", "extrapolate",
    "method_constants", "outer_stationarity", "prox_gradient_step",
    "run_catalyst", "run_inner", "solver_by_name", "stationarity_residual",
    "update_anchor", "warm_start",
]

__version__ = "0.1.0"
