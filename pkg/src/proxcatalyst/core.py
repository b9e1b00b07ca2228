"""Composite objectives, prox subproblems, and stationarity measures.

A composite objective is f(x) = f0(x) + psi(x) where f0 is a smooth
finite-sum average (1/n) * sum_i f_i and psi is a simple nonsmooth term
whose prox is cheap.  The proximal subproblem centered at y with weight
kappa is

    f_kappa(x; y) = f(x) + (kappa/2) * ||x - y||^2,

whose smooth part gains the quadratic's gradient and whose Lipschitz
constant is L + kappa.

Stationarity is measured through an explicit subgradient witness: one
prox-gradient step z -> z+ with stepsize eta = 1/(L + kappa) yields

    xi = (z - z+)/eta + grad_s(z+) - grad_s(z)  in  d f_kappa(z+; y),

so ||xi|| upper-bounds the subdifferential distance at z+ (and equals
the gradient norm when psi vanishes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass
class Counters:
    """Per-run oracle accounting.  One gradient evaluation means one
    component-gradient oracle call; full gradients cost n of them."""

    grad_evals: int = 0
    func_evals: int = 0
    prox_calls: int = 0


# ---------------------------------------------------------------------------
# regularizers


class ZeroRegularizer:
    """psi identically zero."""

    is_zero = True

    def value(self, x: np.ndarray) -> float:
        return 0.0

    def prox(self, v: np.ndarray, beta: float) -> np.ndarray:
        return v.copy()


class ElasticNet:
    """psi(x) = l1 * ||x||_1 + (l2/2) * ||x||^2."""

    is_zero = False

    def __init__(self, l1: float, l2: float = 0.0):
        if l1 < 0 or l2 < 0:
            raise ValueError("elastic net weights must be nonnegative")
        self.l1 = float(l1)
        self.l2 = float(l2)

    def value(self, x):
        return self.l1 * float(np.sum(np.abs(x))) + 0.5 * self.l2 * float(x @ x)

    def prox(self, v, beta):
        return kernels.enet_prox(v, beta * self.l1, beta * self.l2)


class BallIndicator:
    """Indicator of the l2 ball of the given radius; prox is projection."""

    is_zero = False
    # relative slack so points produced by our own projection stay feasible
    feas_tol = 1e-12

    def __init__(self, radius: float):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def value(self, x):
        nrm = float(np.linalg.norm(x))
        if nrm <= self.radius * (1.0 + self.feas_tol):
            return 0.0
        return math.inf

    def prox(self, v, beta):
        nrm = float(np.linalg.norm(v))
        if nrm <= self.radius:
            return v.copy()
        return v * (self.radius / nrm)


class ColumnBallIndicator:
    """Indicator of {D : every column of the rows-by-cols matrix D has
    l2 norm <= 1}, acting on the C-order flattening of D."""

    is_zero = False
    feas_tol = 1e-12

    def __init__(self, rows: int, cols: int):
        self.rows = int(rows)
        self.cols = int(cols)

    def value(self, x):
        mat = x.reshape(self.rows, self.cols)
        norms = np.linalg.norm(mat, axis=0)
        if np.all(norms <= 1.0 + self.feas_tol):
            return 0.0
        return math.inf

    def prox(self, v, beta):
        mat = v.reshape(self.rows, self.cols)
        norms = np.linalg.norm(mat, axis=0)
        scale = 1.0 / np.maximum(1.0, norms)
        return (mat * scale[np.newaxis, :]).ravel()


# ---------------------------------------------------------------------------
# smooth finite sums


class SmoothPart:
    """Smooth finite-sum average f0 = (1/n) sum_i f_i.

    Subclasses implement the per-component oracles; the batch oracles
    default to averaging loops and are usually overridden with
    vectorized versions.
    """

    dim: int
    n_components: int
    # set by smooth parts whose per-step loop has a fused compiled kernel
    kernel_tag: str | None = None

    def component_value(self, i: int, x: np.ndarray) -> float:
        raise NotImplementedError

    def component_gradient(self, i: int, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, x):
        total = 0.0
        for i in range(self.n_components):
            total += self.component_value(i, x)
        return total / self.n_components

    def gradient(self, x):
        g = np.zeros(self.dim)
        for i in range(self.n_components):
            g += self.component_gradient(i, x)
        return g / self.n_components


class CallableSmooth(SmoothPart):
    """Ad-hoc smooth part built from per-component callables.  Handy for
    small closed-form fixtures."""

    def __init__(self, dim, value_fns, grad_fns):
        if len(value_fns) != len(grad_fns) or not value_fns:
            raise ValueError("need matching non-empty oracle lists")
        self.dim = int(dim)
        self.n_components = len(value_fns)
        self._value_fns = list(value_fns)
        self._grad_fns = list(grad_fns)

    def component_value(self, i, x):
        return float(self._value_fns[i](x))

    def component_gradient(self, i, x):
        return np.asarray(self._grad_fns[i](x), dtype=float).reshape(self.dim)


# ---------------------------------------------------------------------------
# composite objective


class CompositeObjective:
    """f = f0 + psi with a Lipschitz estimate for grad f0 and, when
    known, the weak-convexity modulus rho (f + (rho/2)||.||^2 convex).

    Oracles are read-only; counters are explicit per-call arguments so
    one objective can serve concurrent runs.
    """

    def __init__(self, smooth: SmoothPart, psi=None, lipschitz: float = None,
                 weak_convexity: float | None = None):
        if lipschitz is None or not lipschitz > 0:
            raise ValueError("a positive Lipschitz estimate is required")
        self.smooth = smooth
        self.psi = psi if psi is not None else ZeroRegularizer()
        self.lipschitz = float(lipschitz)
        self.weak_convexity = None if weak_convexity is None else float(weak_convexity)

    @property
    def dim(self) -> int:
        return self.smooth.dim

    @property
    def n_components(self) -> int:
        return self.smooth.n_components

    @property
    def is_smooth(self) -> bool:
        return self.psi.is_zero

    def value(self, x, counters: Counters | None = None) -> float:
        if counters is not None:
            counters.func_evals += self.n_components
        return float(self.smooth.value(x)) + self.psi.value(x)

    def smooth_value(self, x, counters: Counters | None = None) -> float:
        if counters is not None:
            counters.func_evals += self.n_components
        return float(self.smooth.value(x))

    def psi_value(self, x) -> float:
        return self.psi.value(x)

    def smooth_gradient(self, x, counters: Counters | None = None) -> np.ndarray:
        if counters is not None:
            counters.grad_evals += self.n_components
        return self.smooth.gradient(x)

    def component_value(self, i, x, counters: Counters | None = None) -> float:
        if counters is not None:
            counters.func_evals += 1
        return float(self.smooth.component_value(i, x))

    def component_gradient(self, i, x, counters: Counters | None = None) -> np.ndarray:
        if counters is not None:
            counters.grad_evals += 1
        return self.smooth.component_gradient(i, x)

    def prox(self, v, beta, counters: Counters | None = None) -> np.ndarray:
        if counters is not None:
            counters.prox_calls += 1
        return self.psi.prox(v, beta)


def evaluate(obj: CompositeObjective, x, counters: Counters | None = None) -> float:
    """f0(x) + psi(x).  Non-finite values (e.g. +inf from an indicator at
    an infeasible point) are returned as is, never clamped."""
    return obj.value(x, counters)


# ---------------------------------------------------------------------------
# prox subproblem


class ProxSubproblem:
    """f_kappa(x; y) = f(x) + (kappa/2)||x - y||^2 over a base objective.

    With kappa = 0 (and no center) this degenerates to a solver-facing
    view of f itself, which is how the bench baselines and the outer
    stationarity measure run the same code paths.
    """

    def __init__(self, objective: CompositeObjective, center: np.ndarray | None = None,
                 kappa: float = 0.0):
        if kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if kappa > 0 and center is None:
            raise ValueError("a positive-weight subproblem needs a center")
        self.objective = objective
        self.center = None if center is None else np.asarray(center, dtype=float)
        self.kappa = float(kappa)

    @property
    def dim(self):
        return self.objective.dim

    @property
    def n_components(self):
        return self.objective.n_components

    @property
    def smooth_lipschitz(self) -> float:
        return self.objective.lipschitz + self.kappa

    @property
    def is_smooth(self):
        return self.objective.is_smooth

    def _quad(self, x) -> float:
        if self.kappa == 0.0:
            return 0.0
        d = x - self.center
        return 0.5 * self.kappa * float(d @ d)

    def value(self, x, counters: Counters | None = None) -> float:
        return self.objective.value(x, counters) + self._quad(x)

    def center_value(self, counters: Counters | None = None) -> float:
        """f_kappa(y; y) = f(y)."""
        return self.objective.value(self.center, counters)

    def smooth_gradient(self, x, counters: Counters | None = None) -> np.ndarray:
        g = self.objective.smooth_gradient(x, counters)
        if self.kappa != 0.0:
            g = g + self.kappa * (x - self.center)
        return g

    def component_smooth_gradient(self, i, x, counters: Counters | None = None) -> np.ndarray:
        g = self.objective.component_gradient(i, x, counters)
        if self.kappa != 0.0:
            g = g + self.kappa * (x - self.center)
        return g

    def prox(self, v, beta, counters: Counters | None = None) -> np.ndarray:
        return self.objective.prox(v, beta, counters)


# ---------------------------------------------------------------------------
# stationarity measures


def prox_gradient_step(target, eta: float, x, counters: Counters | None = None):
    """x -> prox_{eta psi}(x - eta * grad_s(x)) on a subproblem target.

    Costs one full smooth gradient plus one prox call.
    """
    if eta <= 0:
        raise ValueError("stepsize must be positive")
    g = target.smooth_gradient(x, counters)
    return target.prox(x - eta * g, eta, counters)


@dataclass(frozen=True)
class StationarityReport:
    point: np.ndarray      # the post-prox point z+
    residual: float        # ||xi|| with xi a member of d f(z+)
    step: float            # eta used for the prox-gradient step

    def __iter__(self):
        return iter((self.point, self.residual))


def stationarity_residual(target, z, counters: Counters | None = None) -> StationarityReport:
    """Witness-based stationarity measure at the post-prox point.

    Runs one prox-gradient step with eta = 1/(L + kappa) and returns
    z+ together with ||xi|| for the explicit subgradient

        xi = (z - z+)/eta + grad_s(z+) - grad_s(z),

    which lies in d f_kappa(z+; y) by the prox optimality condition.
    The norm upper-bounds the true subdifferential distance at z+ and
    coincides with it when psi is smooth there.
    """
    eta = 1.0 / target.smooth_lipschitz
    g = target.smooth_gradient(z, counters)
    zp = target.prox(z - eta * g, eta, counters)
    gp = target.smooth_gradient(zp, counters)
    xi = (z - zp) / eta + gp - g
    return StationarityReport(zp, float(np.linalg.norm(xi)), eta)


def outer_stationarity(obj: CompositeObjective, x, counters: Counters | None = None) -> StationarityReport:
    """Stationarity surrogate on the outer objective (eta = 1/L)."""
    return stationarity_residual(ProxSubproblem(obj), x, counters)
