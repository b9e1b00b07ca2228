"""Proximal-point meta-acceleration with automatic curvature adaptation.

Each outer iteration k runs two inexact proximal solves with the chosen
inner method M:

  1. a proximal step on f_kappa(.; x_{k-1}) whose weight kappa is doubled
     until the solution passes both acceptance checks (descent and
     relative stationarity), which is guaranteed once kappa exceeds the
     weak-convexity modulus;
  2. an accelerated step on f_{kappa_cvx}(.; y_k) centered at the
     extrapolated point y_k = alpha_k v_{k-1} + (1 - alpha_k) x_{k-1}.

The next iterate is whichever candidate has the smaller objective, so
the f-trace is non-increasing whenever the proximal step's descent
check holds.  The extrapolation weights follow alpha_1 = 1 and
(1 - alpha_{k+1}) / alpha_{k+1}^2 = 1 / alpha_k^2.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    CompositeObjective,
    Counters,
    ProxSubproblem,
    outer_stationarity,
    stationarity_residual,
)
from .solvers import SolverKind, run_inner, warm_start

# floating-point slack so exact arithmetic statements (descent at the
# center, zero residual at a stationary center) terminate cleanly
DESCENT_SLACK_REL = 1e-12
STATIONARITY_ATOL = 1e-12


class CatalystError(Exception):
    pass


class AutoAdaptError(CatalystError):
    """Raised when doubling kappa max_doublings times never yields a
    subproblem solution passing both acceptance checks."""

    def __init__(self, message, kappa, doublings):
        super().__init__(message)
        self.kappa = kappa
        self.doublings = doublings


class CatalystAbort(CatalystError):
    """Outer loop abort; carries the partial trace."""

    def __init__(self, message, point, trace):
        super().__init__(message)
        self.point = point
        self.trace = trace


def derive_seed(*parts) -> int:
    """Deterministic 64-bit child seed from integer parts.

    The part count is folded in first so (7,) and (7, 0) derive
    different seeds (SeedSequence pads its entropy pool with zeros).
    """
    ss = np.random.SeedSequence([len(parts)] + [int(p) for p in parts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# ---------------------------------------------------------------------------
# extrapolation arithmetic


def alpha_next(alpha: float) -> float:
    """Solve (1 - a') / a'^2 = 1 / alpha^2 for a' in (0, 1)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return 0.5 * alpha * (math.sqrt(alpha * alpha + 4.0) - alpha)


def extrapolate(alpha: float, v_prev, x_prev):
    """y_k = alpha_k v_{k-1} + (1 - alpha_k) x_{k-1}."""
    return alpha * v_prev + (1.0 - alpha) * x_prev


def update_anchor(alpha: float, x_prev, x_tilde):
    """v_k = x_{k-1} + (1/alpha_k)(x_tilde_k - x_{k-1})."""
    return x_prev + (x_tilde - x_prev) / alpha


# ---------------------------------------------------------------------------
# acceptance checks


@dataclass(frozen=True)
class CriteriaResult:
    descent_ok: bool
    stationarity_ok: bool
    point: np.ndarray        # post-prox point z+ at which both were tested
    residual: float          # witness norm at z+
    base_value: float        # f(z+)
    sub_value: float         # f_kappa(z+; y)
    dist_to_center: float    # ||z+ - y||

    @property
    def accepted(self) -> bool:
        return self.descent_ok and self.stationarity_ok


def check_criteria(sub: ProxSubproblem, z, tolerance_factor: float = 1.0,
                   counters: Counters | None = None,
                   center_value: float | None = None) -> CriteriaResult:
    """Evaluate both subproblem acceptance checks at the post-prox point.

    descent:       f_kappa(z+; y) <= f_kappa(y; y)
    stationarity:  ||xi|| < tolerance_factor * kappa * ||z+ - y||

    (tolerance_factor 1 for the proximal step, 1/(k+1) for the
    accelerated step).  Non-finite inputs fail both checks.  Passing
    ``center_value`` = f(y) avoids re-evaluating the center.
    """
    rep = stationarity_residual(sub, z, counters)
    zp = rep.point
    if not np.isfinite(zp).all() or not math.isfinite(rep.residual):
        bad = float("nan")
        return CriteriaResult(False, False, zp, bad, bad, bad, bad)
    if center_value is None:
        center_value = sub.center_value(counters)
    dist = float(np.linalg.norm(zp - sub.center))
    base = sub.objective.value(zp, counters)
    sub_value = base + 0.5 * sub.kappa * dist * dist
    if not (math.isfinite(sub_value) and math.isfinite(center_value)):
        return CriteriaResult(False, False, zp, rep.residual, base, sub_value, dist)
    descent_ok = sub_value <= center_value + DESCENT_SLACK_REL * (1.0 + abs(center_value))
    threshold = tolerance_factor * sub.kappa * dist
    stationarity_ok = rep.residual < threshold or rep.residual <= STATIONARITY_ATOL
    return CriteriaResult(descent_ok, stationarity_ok, zp, rep.residual,
                          base, sub_value, dist)


# ---------------------------------------------------------------------------
# adaptive proximal step


@dataclass
class AutoAdaptResult:
    point: np.ndarray
    kappa: float
    doublings: int
    criteria: CriteriaResult
    evals: Counters


def auto_adapt(obj: CompositeObjective, x, kappa0: float, iters: int,
               kind: SolverKind, seed: int = 0,
               counters: Counters | None = None,
               max_doublings: int = 60,
               center_value: float | None = None,
               z0_override: np.ndarray | None = None) -> AutoAdaptResult:
    """Proximal step with geometric curvature adaptation.

    Runs ``iters`` iterations of M on f_kappa(.; x) from a warm start,
    accepts if both checks pass at the post-prox point, and doubles
    kappa otherwise (a diverged inner run counts as a failed check).
    Raises AutoAdaptError after max_doublings doublings.
    """
    if kappa0 <= 0:
        raise ValueError("kappa0 must be positive")
    used = Counters()
    if center_value is None:
        center_value = obj.value(x, used)
    kappa = float(kappa0)
    for attempt in range(max_doublings + 1):
        sub = ProxSubproblem(obj, x, kappa)
        z0 = z0_override if z0_override is not None else warm_start(sub, used)
        res = run_inner(kind, sub, z0, iters,
                        seed=derive_seed(seed, attempt), counters=used)
        if not res.diverged:
            crit = check_criteria(sub, res.point, 1.0, used, center_value)
            if crit.accepted:
                if counters is not None:
                    counters.grad_evals += used.grad_evals
                    counters.func_evals += used.func_evals
                    counters.prox_calls += used.prox_calls
                return AutoAdaptResult(crit.point, kappa, attempt, crit, used)
        kappa *= 2.0
    if counters is not None:
        counters.grad_evals += used.grad_evals
        counters.func_evals += used.func_evals
        counters.prox_calls += used.prox_calls
    raise AutoAdaptError(
        "no acceptable proximal step after %d doublings (kappa reached %g)"
        % (max_doublings, kappa / 2.0), kappa / 2.0, max_doublings)


# ---------------------------------------------------------------------------
# outer loop


@dataclass(frozen=True)
class CatalystConfig:
    """Outer-loop parameters.

    ``prox_iters`` (T) and ``accel_iters`` (S) are the inner budgets;
    with ``use_logk_factor`` the accelerated budget grows as
    ceil(S log(k+1)).  ``inner_tolerance`` switches both inner solves to
    run in T-sized chunks until the subproblem witness norm drops below
    the tolerance (near-exact solves), instead of a fixed budget.
    ``epsilon`` stops the outer loop once the measured outer
    stationarity falls below it; 0 disables early stopping.
    """

    kappa0: float
    kappa_cvx: float
    prox_iters: int
    accel_iters: int
    use_logk_factor: bool = False
    epsilon: float = 0.0
    max_outer: int = 1000
    mode: str = "auto"  # "auto" or "basic"
    seed: int = 0
    inner_tolerance: float | None = None
    max_grad_evals: int | None = None
    lazy_prox: bool = False
    max_doublings: int = 60

    def __post_init__(self):
        if self.kappa0 <= 0 or self.kappa_cvx <= 0:
            raise ValueError("kappa weights must be positive")
        if self.prox_iters < 1 or self.accel_iters < 1:
            raise ValueError("inner budgets must be >= 1")
        if self.mode not in ("auto", "basic"):
            raise ValueError("mode must be 'auto' or 'basic'")
        if self.max_outer < 0:
            raise ValueError("max_outer must be nonnegative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    fval: float            # f(x_k) after the better-of-two pick
    stationarity: float    # outer surrogate measured at xbar_k
    step_norm: float       # ||xbar_k - x_{k-1}||
    kappa: float           # kappa_k accepted by the proximal step
    winner: str            # "prox" or "accel"
    grad_evals: int        # cumulative component-gradient count
    elapsed_s: float


@dataclass
class CatalystResult:
    point: np.ndarray
    trace: list
    counters: Counters
    stopped: str  # "epsilon" | "budget" | "max_outer"


# chunk cap for tolerance-mode inner solves
_TOL_MODE_MAX_ITERS = 1_000_000


def _solve_to_tolerance(sub, z0, chunk, tol, kind, seed, counters):
    """Run M in chunks until the subproblem witness norm <= tol."""
    z = z0
    total = 0
    attempt = 0
    while True:
        res = run_inner(kind, sub, z, chunk, seed=derive_seed(seed, attempt),
                        counters=counters)
        z = res.point
        total += res.iterations
        attempt += 1
        if res.diverged:
            raise CatalystError("inner solve diverged in tolerance mode")
        rep = stationarity_residual(sub, z, counters)
        if rep.residual <= tol:
            return rep.point
        if total >= _TOL_MODE_MAX_ITERS:
            raise CatalystError(
                "inner solve did not reach tolerance %g within %d iterations"
                % (tol, total))


def _basic_prox_step(obj, x, cfg, kind, seed, counters, center_value):
    """Fixed-kappa proximal step: run T iterations, verify the checks,
    and keep running in T-sized chunks (up to 10x T) on failure."""
    sub = ProxSubproblem(obj, x, cfg.kappa0)
    z = warm_start(sub, counters)
    if cfg.inner_tolerance is not None:
        zp = _solve_to_tolerance(sub, z, cfg.prox_iters, cfg.inner_tolerance,
                                 kind, seed, counters)
        crit = check_criteria(sub, zp, 1.0, counters, center_value)
        if crit.accepted:
            return crit
        raise CatalystError("near-exact proximal solve failed the acceptance checks")
    total = 0
    attempt = 0
    while total < 10 * cfg.prox_iters:
        res = run_inner(kind, sub, z, cfg.prox_iters,
                        seed=derive_seed(seed, attempt), counters=counters)
        z = res.point
        total += res.iterations
        attempt += 1
        if res.diverged:
            break
        crit = check_criteria(sub, z, 1.0, counters, center_value)
        if crit.accepted:
            return crit
    raise CatalystError(
        "fixed-kappa proximal step failed its checks within 10x the budget; "
        "use mode='auto' or increase kappa0")


def run_catalyst(obj: CompositeObjective, cfg: CatalystConfig, kind: SolverKind,
                 x0) -> CatalystResult:
    """Run the outer loop from x0.

    Returns the final iterate with one trace record per outer iteration;
    aborts (CatalystAbort, carrying the partial trace) if a proximal
    step cannot be accepted.  Trace telemetry - f(x_k) re-uses values
    the algorithm already computed, and the outer stationarity surrogate
    is measured outside the counted oracles - so ``grad_evals`` reflects
    optimization work only.
    """
    counters = Counters()
    x = np.array(x0, dtype=float)
    if x.shape != (obj.dim,):
        raise ValueError("x0 must have shape (%d,)" % obj.dim)
    v = x.copy()
    alpha = 1.0
    kappa_cur = cfg.kappa0
    f_x = obj.value(x, counters)
    if not math.isfinite(f_x):
        raise ValueError("f(x0) must be finite (is x0 feasible?)")
    trace: list = []
    stopped = "max_outer"
    prev_winner = ""
    prev_xtil = None
    t_start = time.perf_counter()

    for k in range(1, cfg.max_outer + 1):
        lazy0 = None
        if cfg.lazy_prox and prev_winner == "accel":
            lazy0 = prev_xtil
        # 1. proximal step at x_{k-1}
        try:
            if cfg.mode == "auto":
                ar = auto_adapt(obj, x, kappa_cur, cfg.prox_iters, kind,
                                seed=derive_seed(cfg.seed, k, 0),
                                counters=counters,
                                max_doublings=cfg.max_doublings,
                                center_value=f_x, z0_override=lazy0)
                if cfg.inner_tolerance is not None:
                    sub = ProxSubproblem(obj, x, ar.kappa)
                    zp = _solve_to_tolerance(sub, ar.point, cfg.prox_iters,
                                             cfg.inner_tolerance, kind,
                                             derive_seed(cfg.seed, k, 2),
                                             counters)
                    crit = check_criteria(sub, zp, 1.0, counters, f_x)
                    ar = AutoAdaptResult(crit.point, ar.kappa,
                                         ar.doublings, crit, ar.evals)
                kappa_cur = ar.kappa
                kappa_k = ar.kappa
                crit = ar.criteria
            else:
                crit = _basic_prox_step(obj, x, cfg, kind,
                                        derive_seed(cfg.seed, k, 0),
                                        counters, f_x)
                kappa_k = cfg.kappa0
        except CatalystError as exc:
            raise CatalystAbort(str(exc), x, trace) from exc
        xbar = crit.point
        f_xbar = crit.base_value
        step_norm = crit.dist_to_center

        # 2. extrapolate
        y = extrapolate(alpha, v, x)

        # 3. accelerated step at y_k (fixed kappa_cvx, never doubled)
        s_k = cfg.accel_iters
        if cfg.use_logk_factor:
            s_k = max(1, math.ceil(cfg.accel_iters * math.log(k + 1.0)))
        sub_cvx = ProxSubproblem(obj, y, cfg.kappa_cvx)
        z0 = warm_start(sub_cvx, counters)
        accel_seed = derive_seed(cfg.seed, k, 1)
        if cfg.inner_tolerance is not None:
            xtil = _solve_to_tolerance(sub_cvx, z0, s_k, cfg.inner_tolerance,
                                       kind, accel_seed, counters)
        else:
            res = run_inner(kind, sub_cvx, z0, s_k, seed=accel_seed,
                            counters=counters)
            xtil = res.point

        # 4. anchor and extrapolation weight for the next round
        v = update_anchor(alpha, x, xtil)
        alpha = alpha_next(alpha)

        # 5. better of the two candidates (ties go to the accelerated one)
        f_xtil = obj.value(xtil, counters)
        if math.isfinite(f_xtil) and f_xtil <= f_xbar:
            x, f_x, winner = xtil, f_xtil, "accel"
        else:
            x, f_x, winner = xbar, f_xbar, "prox"
        prev_winner, prev_xtil = winner, xtil

        # 6. telemetry (uncounted) and stopping tests
        surrogate = outer_stationarity(obj, xbar).residual
        trace.append(TraceRecord(k, f_x, surrogate, step_norm, kappa_k, winner,
                                 counters.grad_evals,
                                 time.perf_counter() - t_start))
        if surrogate < cfg.epsilon:
            stopped = "epsilon"
            break
        if cfg.max_grad_evals is not None and counters.grad_evals >= cfg.max_grad_evals:
            stopped = "budget"
            break

    return CatalystResult(x, trace, counters, stopped)
