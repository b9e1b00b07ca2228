"""Experiment runner: builds problems from configs, runs wrapped or
unwrapped methods under a gradient-evaluation budget, and writes traces.

Trace CSV schema (one row per outer iteration, or per data pass for
unwrapped baselines, plus an initial-point row):

    iter,grad_evals,fval,stationarity,kappa,winner,elapsed_s

grad_evals counts component-gradient oracle calls made by the
optimization itself; the per-row telemetry (fval and the outer
stationarity surrogate) is measured outside the counters so wrapped and
unwrapped methods are charged on the same scale.  Identical configs and
seeds reproduce every column except elapsed_s byte for byte.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..catalyst import CatalystAbort, CatalystConfig, run_catalyst
from ..core import Counters, ProxSubproblem, outer_stationarity
from ..data import generate_patches, parse_libsvm
from ..problems.dictionary import dictionary_objective
from ..problems.logistic import logistic_objective, synthetic_logistic
from ..problems.quadratic import spectrum_quadratic
from ..problems.twolayer import twolayer_objective
from ..solvers import run_inner, solver_by_name
from .config import ConfigError, ExperimentConfig, load_config

CSV_HEADER = "iter,grad_evals,fval,stationarity,kappa,winner,elapsed_s"


class BenchAbort(RuntimeError):
    """Runtime abort; the partial rows are preserved for flushing."""

    def __init__(self, message, rows):
        super().__init__(message)
        self.rows = rows


@dataclass(frozen=True)
class Row:
    iter: int
    grad_evals: int
    fval: float
    stationarity: float
    kappa: float
    winner: str  # "prox" | "accel" | "na"
    elapsed_s: float


@dataclass
class RunOutcome:
    rows: list
    abort: str | None = None


# ---------------------------------------------------------------------------
# problem construction


def build_problem(cfg: ExperimentConfig):
    """Returns (objective, x0) for the configured problem."""
    kind = cfg.problem
    seed = cfg.seed
    if kind == "quadratic":
        p = cfg.p or 20
        rho = 1.0 if cfg.rho is None else cfg.rho
        lip = 2.0 if cfg.lipschitz is None else cfg.lipschitz
        n = cfg.n or 10
        obj = spectrum_quadratic(p, lip, rho, seed, n_components=n,
                                 ball_radius=cfg.ball)
        rng = np.random.Generator(np.random.Philox([seed, 1]))
        x0 = rng.standard_normal(p)
        if cfg.ball is not None:
            nrm = float(np.linalg.norm(x0))
            if nrm > cfg.ball:
                x0 *= 0.9 * cfg.ball / nrm
        return obj, x0
    if kind == "logistic":
        if cfg.data is not None:
            with open(cfg.data, "r", encoding="utf-8") as fh:
                ds = parse_libsvm(fh.read())
            obj = logistic_objective(ds.to_dense(), ds.labels, l1=cfg.l1, l2=cfg.l2)
        else:
            n = cfg.n or 1000
            p = cfg.p or 50
            cond = cfg.cond or 100.0
            obj = synthetic_logistic(n, p, cond, seed, l1=cfg.l1)
        return obj, np.zeros(obj.dim)
    if kind == "dictionary":
        m = cfg.patch_m
        n = cfg.n or 500
        lam = cfg.l1 if cfg.l1 > 0 else 0.25
        mu = cfg.l2 if cfg.l2 > 0 else 1e-5
        patches = generate_patches(m, n, seed)
        obj, x0 = dictionary_objective(patches, cfg.atoms, mu, lam, seed=seed)
        return obj, x0
    # twolayer
    if cfg.data is not None:
        with open(cfg.data, "r", encoding="utf-8") as fh:
            ds = parse_libsvm(fh.read())
        feats, labels = ds.to_dense(), ds.labels
    else:
        n = cfg.n or 200
        p = cfg.p or 10
        rng = np.random.Generator(np.random.Philox(seed))
        labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        centers = rng.standard_normal(p) / np.sqrt(p)
        feats = rng.standard_normal((n, p)) + 1.5 * labels[:, np.newaxis] * centers
    obj, x0 = twolayer_objective(feats, labels, cfg.hidden, seed=seed,
                                 lipschitz=cfg.lipschitz)
    return obj, x0


# ---------------------------------------------------------------------------
# runs


def _initial_row(obj, x0, kappa) -> Row:
    fval = obj.value(x0)
    stat = outer_stationarity(obj, x0).residual
    return Row(0, 0, fval, stat, kappa, "na", 0.0)


def _pass_accounting(kind_name: str, n: int):
    """(steps per pass, gradient evals per pass, upfront evals)."""
    if kind_name == "gd":
        return 1, n, 0
    if kind_name == "svrg":
        return n, 3 * n, 0
    return n, n, n  # saga: table init upfront, then 1 per step


def _run_baseline(obj, x0, cfg: ExperimentConfig) -> RunOutcome:
    kind = solver_by_name(cfg.method)
    n = obj.n_components
    L = obj.lipschitz
    if cfg.wrapper == "none-convex":
        eta = 1.0 / (2.0 * L)
    else:
        eta = 1.0 / (L * n ** (2.0 / 3.0))
    steps, per_pass, upfront = _pass_accounting(kind.name, n)
    passes = max(0, (cfg.budget - upfront) // per_pass)
    rows = [_initial_row(obj, x0, 0.0)]
    if passes == 0:
        return RunOutcome(rows)
    target = ProxSubproblem(obj)
    counters = Counters()
    res = run_inner(kind, target, x0, passes * steps, seed=cfg.seed,
                    stepsize=eta, counters=counters, snapshot_every=steps)
    for done, z, dt in res.snapshots:
        k = done // steps
        evals = upfront + k * per_pass
        stat = outer_stationarity(obj, z).residual
        rows.append(Row(k, evals, obj.value(z), stat, 0.0, "na", dt))
        if cfg.epsilon > 0 and stat < cfg.epsilon:
            break
    if res.diverged:
        raise BenchAbort("baseline diverged (non-finite iterate)", rows)
    return RunOutcome(rows)


def _run_catalyst(obj, x0, cfg: ExperimentConfig) -> RunOutcome:
    kind = solver_by_name(cfg.method)
    n = obj.n_components
    L = obj.lipschitz
    default_kappa = 2.0 * L / n
    ccfg = CatalystConfig(
        kappa0=cfg.kappa0 if cfg.kappa0 is not None else default_kappa,
        kappa_cvx=cfg.kappa_cvx if cfg.kappa_cvx is not None else default_kappa,
        prox_iters=cfg.t_budget if cfg.t_budget is not None else n,
        accel_iters=cfg.s_budget if cfg.s_budget is not None else n,
        use_logk_factor=cfg.logk,
        epsilon=cfg.epsilon,
        max_outer=0 if cfg.budget == 0 else 1_000_000,
        mode="auto" if cfg.wrapper == "catalyst-auto" else "basic",
        seed=cfg.seed,
        max_grad_evals=cfg.budget,
        lazy_prox=cfg.lazy_prox,
        max_doublings=cfg.max_doublings,
    )
    rows = [_initial_row(obj, x0, ccfg.kappa0)]
    try:
        result = run_catalyst(obj, ccfg, kind, x0)
        trace = result.trace
    except CatalystAbort as exc:
        rows.extend(Row(t.k, t.grad_evals, t.fval, t.stationarity, t.kappa,
                        t.winner, t.elapsed_s) for t in exc.trace)
        raise BenchAbort(str(exc), rows) from exc
    rows.extend(Row(t.k, t.grad_evals, t.fval, t.stationarity, t.kappa,
                    t.winner, t.elapsed_s) for t in trace)
    return RunOutcome(rows)


def run_experiment(cfg: ExperimentConfig) -> RunOutcome:
    obj, x0 = build_problem(cfg)
    if cfg.wrapper.startswith("none-"):
        return _run_baseline(obj, x0, cfg)
    return _run_catalyst(obj, x0, cfg)


# ---------------------------------------------------------------------------
# csv


def _fmt(v: float) -> str:
    return repr(float(v))


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append("%d,%d,%s,%s,%s,%s,%s" % (
            r.iter, r.grad_evals, _fmt(r.fval), _fmt(r.stationarity),
            _fmt(r.kappa), r.winner, _fmt(r.elapsed_s)))
    return "\n".join(lines) + "\n"


def write_csv(path: str, rows, abort: str | None = None):
    text = rows_to_csv(rows)
    if abort is not None:
        text += "# abort: %s\n" % abort.replace("\n", " ")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# compare


def _step_interp(rows, grid):
    """Step interpolation of (fval, stationarity) onto the grad_evals
    grid: the last row at or before each grid point."""
    xs = [r.grad_evals for r in rows]
    fv, st = [], []
    j = 0
    for g in grid:
        while j + 1 < len(xs) and xs[j + 1] <= g:
            j += 1
        fv.append(rows[j].fval)
        st.append(rows[j].stationarity)
    return fv, st


def compare_to_csv(paths: list[str], out: str):
    """Run every config (they must share a problem) and merge the traces
    on the grad_evals axis into one wide CSV."""
    if len(paths) < 2:
        raise ConfigError("compare needs at least two configs")
    cfgs = [load_config(p) for p in paths]
    fp = cfgs[0].problem_fingerprint()
    for p, c in zip(paths[1:], cfgs[1:]):
        if c.problem_fingerprint() != fp:
            raise ConfigError(
                "%s configures a different problem than %s" % (p, paths[0]))
    labels = []
    for p in paths:
        base = os.path.splitext(os.path.basename(p))[0]
        label = base
        k = 2
        while label in labels:
            label = "%s_%d" % (base, k)
            k += 1
        labels.append(label)
    def run_one(pair):
        label, cfg = pair
        try:
            return run_experiment(cfg)
        except BenchAbort as exc:
            raise BenchAbort("%s: %s" % (label, exc), []) from exc

    threads = max(1, int(os.environ.get("BENCH_THREADS", "1")))
    jobs = list(zip(labels, cfgs))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_one, jobs))
    else:
        outcomes = [run_one(j) for j in jobs]
    grid = sorted({r.grad_evals for oc in outcomes for r in oc.rows})
    header = ["grad_evals"]
    for lab in labels:
        header.append("fval_%s" % lab)
        header.append("stationarity_%s" % lab)
    columns = []
    for oc in outcomes:
        fv, st = _step_interp(oc.rows, grid)
        columns.append((fv, st))
    lines = [",".join(header)]
    for i, g in enumerate(grid):
        cells = [str(g)]
        for fv, st in columns:
            cells.append(_fmt(fv[i]))
            cells.append(_fmt(st[i]))
        lines.append(",".join(cells))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
