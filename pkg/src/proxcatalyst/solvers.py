"""Inner solvers (GD, SVRG, SAGA) and their linear-rate constants.

Each solver minimizes a prox subproblem f_kappa(.; y) through the
uniform target interface from :mod:`.core`.  Fixed stepsizes: 1/(L+kappa)
for full gradient descent, 1/(2(L+kappa)) for the incremental methods.
One "iteration" of SVRG or SAGA is a single stochastic step; SVRG takes
a fresh full-gradient snapshot every epoch (n steps by default), so
running it for n iterations is one pass over the data.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (
    Counters,
    ElasticNet,
    ProxSubproblem,
    ZeroRegularizer,
    prox_gradient_step,
)


@dataclass(frozen=True)
class SolverKind:
    """Tag plus hyperparameters for an inner method."""

    name: str
    epoch_length: int | None = None  # SVRG only; None means n

    def __post_init__(self):
        if self.name not in ("gd", "svrg", "saga"):
            raise ValueError("unknown solver kind %r" % self.name)
        if self.epoch_length is not None:
            if self.name != "svrg":
                raise ValueError("epoch_length applies to svrg only")
            if self.epoch_length < 1:
                raise ValueError("epoch_length must be >= 1")


GD = SolverKind("gd")
SVRG = SolverKind("svrg")
SAGA = SolverKind("saga")

_BY_NAME = {"gd": GD, "svrg": SVRG, "saga": SAGA}


def solver_by_name(name: str) -> SolverKind:
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ValueError("unknown solver %r (expected gd, svrg, or saga)" % name)


def default_stepsize(kind: SolverKind, smooth_lipschitz: float) -> float:
    if kind.name == "gd":
        return 1.0 / smooth_lipschitz
    return 1.0 / (2.0 * smooth_lipschitz)


def sampling_indices(seed: int, n: int, count: int) -> np.ndarray:
    """Uniform-with-replacement component indices from a counter-based
    64-bit generator; the whole stream is reproducible from the seed."""
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.integers(0, n, size=count, dtype=np.int64)


def _fused_svrg_spec(target):
    """Kernel arguments when the target is a logistic prox subproblem the
    compiled epoch loop understands, else None.

    The fused path performs the identical arithmetic as the generic step
    body (same compiled component-gradient and prox kernels, same
    operation order), so engaging it changes wall time only.
    """
    if kernels.svrg_logit_epoch is None or not isinstance(target, ProxSubproblem):
        return None
    obj = target.objective
    if getattr(obj.smooth, "kernel_tag", None) != "logit":
        return None
    psi = obj.psi
    if isinstance(psi, ElasticNet):
        use_prox, l1, l2 = True, psi.l1, psi.l2
    elif isinstance(psi, ZeroRegularizer):
        use_prox, l1, l2 = False, 0.0, 0.0
    else:
        return None
    center = target.center if target.center is not None else np.zeros(obj.dim)
    return (obj.smooth.feats, obj.smooth.labels, float(target.kappa),
            np.ascontiguousarray(center, dtype=float), use_prox, l1, l2)


@dataclass
class InnerRunResult:
    point: np.ndarray
    iterations: int
    diverged: bool
    evals: Counters
    # (iteration, iterate copy, elapsed seconds) captured every
    # snapshot_every steps
    snapshots: list = field(default_factory=list)


def run_inner(kind: SolverKind, target, z0, iters: int, seed: int = 0,
              stepsize: float | None = None, counters: Counters | None = None,
              snapshot_every: int | None = None) -> InnerRunResult:
    """Run exactly ``iters`` iterations of the chosen method on a
    subproblem target, starting from z0.

    A non-finite iterate or snapshot gradient stops the run early with
    the diverged flag set.  Oracle costs are accumulated into the
    returned ``evals`` (and into ``counters`` when given): n component
    gradients per GD step, n per SVRG snapshot plus 2 per SVRG step,
    n for the SAGA table init plus 1 fresh gradient per SAGA step.
    """
    if iters < 0:
        raise ValueError("iters must be nonnegative")
    used = Counters()
    z = np.array(z0, dtype=float)
    snaps: list = []
    diverged = False
    done = 0
    eta = default_stepsize(kind, target.smooth_lipschitz) if stepsize is None else float(stepsize)
    if eta <= 0:
        raise ValueError("stepsize must be positive")

    t_start = time.perf_counter()

    def record():
        if snapshot_every and done % snapshot_every == 0:
            snaps.append((done, z.copy(), time.perf_counter() - t_start))

    if iters > 0:
        if kind.name == "gd":
            while done < iters:
                z = prox_gradient_step(target, eta, z, used)
                done += 1
                if not np.isfinite(z).all():
                    diverged = True
                    break
                record()
        elif kind.name == "svrg":
            n = target.n_components
            epoch = kind.epoch_length or n
            idx = sampling_indices(seed, n, iters)
            fused = _fused_svrg_spec(target)
            while done < iters and not diverged:
                anchor = z.copy()
                gbar = target.smooth_gradient(anchor, used)
                if not np.isfinite(gbar).all():
                    diverged = True
                    break
                if fused is not None:
                    feats, labels, kappa, center, use_prox, l1, l2 = fused
                    steps = min(epoch, iters - done)
                    cap = (steps // snapshot_every + 1) if snapshot_every else 1
                    snap_buf = np.empty((cap, z.shape[0]))
                    snap_steps = np.empty(cap, dtype=np.int64)
                    z, taken, finite, nsnap = kernels.svrg_logit_epoch(
                        feats, labels, z, anchor, gbar, eta, idx, done, steps,
                        kappa, center, use_prox, l1, l2,
                        snapshot_every or 0, snap_buf, snap_steps)
                    done += taken
                    # same oracle charges the interpreted steps would make
                    used.grad_evals += 2 * taken
                    used.prox_calls += taken
                    now = time.perf_counter() - t_start
                    for r in range(nsnap):
                        snaps.append((int(snap_steps[r]), snap_buf[r].copy(), now))
                    if not finite:
                        diverged = True
                    continue
                for _ in range(min(epoch, iters - done)):
                    i = int(idx[done])
                    gi = target.component_smooth_gradient(i, z, used)
                    ga = target.component_smooth_gradient(i, anchor, used)
                    z = target.prox(z - eta * (gi - ga + gbar), eta, used)
                    done += 1
                    if not np.isfinite(z).all():
                        diverged = True
                        break
                    record()
        else:  # saga
            n = target.n_components
            idx = sampling_indices(seed, n, iters)
            table = np.empty((n, target.dim))
            for i in range(n):
                table[i] = target.component_smooth_gradient(i, z, used)
            avg = table.mean(axis=0)
            while done < iters:
                i = int(idx[done])
                gi = target.component_smooth_gradient(i, z, used)
                z = target.prox(z - eta * (gi - table[i] + avg), eta, used)
                avg = avg + (gi - table[i]) / n
                table[i] = gi
                done += 1
                if not np.isfinite(z).all():
                    diverged = True
                    break
                record()

    if counters is not None:
        counters.grad_evals += used.grad_evals
        counters.func_evals += used.func_evals
        counters.prox_calls += used.prox_calls
    return InnerRunResult(z, done, diverged, used, snaps)


def warm_start(sub, counters: Counters | None = None) -> np.ndarray:
    """Starting point for a subproblem solve: the center itself when psi
    is absent, otherwise one prox-gradient step from the center with
    eta = 1/(L + kappa) so the start already lies in dom psi."""
    if sub.is_smooth:
        return sub.center.copy()
    eta = 1.0 / sub.smooth_lipschitz
    return prox_gradient_step(sub, eta, sub.center, counters)


# ---------------------------------------------------------------------------
# rate constants and budgets


@dataclass(frozen=True)
class MethodConstants:
    """Worst-case linear-rate constants of an inner method on smoothable
    subproblems, as tabulated for each solver:

    ==== ========== ============ ================== =========
    kind 1/tau_L    kappa_cvx    1/tau_{kappa_cvx}  A_{4L}
    ==== ========== ============ ================== =========
    gd   2          L            2                  8L
    svrg n+2        L/(n-1)      2n                 8L
    saga 4n         3L/(4n-3)    4n                 8Ln
    ==== ========== ============ ================== =========
    """

    kind_name: str
    lipschitz: float
    n_components: int
    inv_tau_l: float
    kappa_cvx: float
    inv_tau_kappa_cvx: float
    a_4l: float

    def tau_at(self, kappa: float) -> float:
        """Linear rate of the method on f_kappa for convex f; increasing
        in kappa."""
        lk = self.lipschitz + kappa
        if self.kind_name == "gd":
            return kappa / lk
        if self.kind_name == "svrg":
            return 1.0 / (self.n_components + lk / kappa)
        return min(1.0 / (4.0 * self.n_components), kappa / (3.0 * lk))

    def a_at(self, kappa: float) -> float:
        """A_kappa in the A_{4L} normalization; increasing in kappa."""
        return self.a_4l * (self.lipschitz + kappa) / (4.0 * self.lipschitz)


def method_constants(kind: SolverKind, lipschitz: float, n: int) -> MethodConstants:
    if lipschitz <= 0:
        raise ValueError("lipschitz must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    L = float(lipschitz)
    name = kind.name
    if name == "svrg" and n == 1:
        # a single component degenerates SVRG to full-gradient descent
        name = "gd"
    if name == "gd":
        return MethodConstants("gd", L, n, 2.0, L, 2.0, 8.0 * L)
    if name == "svrg":
        return MethodConstants("svrg", L, n, float(n + 2), L / (n - 1.0),
                               2.0 * n, 8.0 * L)
    return MethodConstants("saga", L, n, 4.0 * n, 3.0 * L / (4.0 * n - 3.0),
                           4.0 * n, 8.0 * L * n)


def budget_T(kind: SolverKind, lipschitz: float, n: int) -> int:
    """Smallest iteration count T with T >= (1/tau_L) log(40 A_{4L} / L);
    sized so one T-budget run at kappa > rho + L passes both acceptance
    checks of the adaptive proximal step."""
    c = method_constants(kind, lipschitz, n)
    t = c.inv_tau_l * math.log(40.0 * c.a_4l / c.lipschitz)
    return max(1, math.ceil(t))


def budget_S(kind: SolverKind, lipschitz: float, n: int) -> int:
    """k-independent part of the accelerated-step budget: smallest S with
    S >= (1/tau_kcvx) log(8 A_{4L} (kappa_cvx + L) / kappa_cvx^2); the
    (k+1)^2 factor inside the log is covered at runtime by the log(k+1)
    schedule."""
    c = method_constants(kind, lipschitz, n)
    arg = 8.0 * c.a_4l * (c.kappa_cvx + c.lipschitz) / (c.kappa_cvx ** 2)
    s = c.inv_tau_kappa_cvx * math.log(arg)
    return max(1, math.ceil(s))
