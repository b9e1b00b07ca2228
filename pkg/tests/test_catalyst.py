import math

import numpy as np
import pytest

from proxcatalyst.catalyst import (
    AutoAdaptError,
    CatalystAbort,
    CatalystConfig,
    CatalystResult,
    alpha_next,
    auto_adapt,
    check_criteria,
    derive_seed,
    extrapolate,
    run_catalyst,
    update_anchor,
)
from proxcatalyst.core import (
    BallIndicator,
    CallableSmooth,
    CompositeObjective,
    Counters,
    ProxSubproblem,
)
from proxcatalyst.problems.quadratic import ball_quadratic_min, spectrum_quadratic
from proxcatalyst.solvers import GD, SVRG


def scalar_objective(curvature=1.0, lipschitz=None, radius=None):
    """f(x) = curvature * x^2 / 2 in one dimension."""
    smooth = CallableSmooth(
        1,
        [lambda x: 0.5 * curvature * float(x[0] * x[0])],
        [lambda x: curvature * x],
    )
    psi = BallIndicator(radius) if radius is not None else None
    return CompositeObjective(
        smooth, psi,
        lipschitz=abs(curvature) if lipschitz is None else lipschitz,
        weak_convexity=max(0.0, -curvature))


def test_derive_seed_is_deterministic_and_sensitive():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 2, 4)
    assert derive_seed(7) != derive_seed(7, 0)
    assert 0 <= derive_seed(999) < 2 ** 64


def test_alpha_next_golden_ratio_step():
    a2 = alpha_next(1.0)
    assert a2 == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0, rel=1e-14)


def test_alpha_sequence_identity_and_bounds():
    alpha = 1.0
    for k in range(1, 101):
        assert math.sqrt(2.0) / (k + 2) <= alpha <= 2.0 / (k + 1)
        nxt = alpha_next(alpha)
        lhs = (1.0 - nxt) / (nxt * nxt)
        rhs = 1.0 / (alpha * alpha)
        assert abs(lhs - rhs) <= 1e-10 * rhs
        assert 0.0 < nxt < alpha
        alpha = nxt


def test_alpha_next_rejects_out_of_range():
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            alpha_next(bad)


def test_extrapolate_and_anchor_arithmetic():
    v = np.array([2.0, 0.0])
    x = np.array([0.0, 2.0])
    y = extrapolate(0.25, v, x)
    assert np.allclose(y, [0.5, 1.5])
    anchor = update_anchor(0.5, x, np.array([1.0, 1.0]))
    assert np.allclose(anchor, [2.0, 0.0])


def test_check_criteria_accepts_exact_minimizer():
    obj = scalar_objective()
    sub = ProxSubproblem(obj, np.array([1.0]), 1.0)
    crit = check_criteria(sub, np.array([0.5]))
    assert crit.accepted
    assert crit.residual <= 1e-12  # absolute stationarity escape
    assert crit.point[0] == pytest.approx(0.5)
    assert crit.sub_value == pytest.approx(0.25)
    assert crit.base_value == pytest.approx(0.125)


def test_check_criteria_flags_unconverged_point():
    # declared smoothness 3 makes the internal step shorter than the
    # exact solve, so a point at the center keeps a visible residual
    obj = scalar_objective(lipschitz=3.0)
    sub = ProxSubproblem(obj, np.array([1.0]), 1.0)
    crit = check_criteria(sub, np.array([1.5]))
    assert crit.descent_ok
    assert not crit.stationarity_ok
    assert crit.residual == pytest.approx(1.0)
    assert crit.dist_to_center == pytest.approx(0.0)


def test_check_criteria_tolerance_factor_tightens_the_test():
    obj = scalar_objective(lipschitz=3.0)
    sub = ProxSubproblem(obj, np.array([1.0]), 1.0)
    z = np.array([0.1])
    loose = check_criteria(sub, z, tolerance_factor=50.0)
    tight = check_criteria(sub, z, tolerance_factor=1e-6)
    assert loose.stationarity_ok
    assert not tight.stationarity_ok


def test_check_criteria_counts_center_value_once_when_provided():
    obj = scalar_objective()
    sub = ProxSubproblem(obj, np.array([1.0]), 1.0)
    c = Counters()
    check_criteria(sub, np.array([0.7]), counters=c, center_value=0.5)
    # two gradients for the witness, one value at the candidate
    assert c.grad_evals == 2
    assert c.func_evals == 1


def test_auto_adapt_accepts_stationary_center_without_doubling():
    obj = scalar_objective()
    res = auto_adapt(obj, np.array([0.0]), 0.25, 5, GD)
    assert res.doublings == 0
    assert res.kappa == pytest.approx(0.25)
    assert abs(res.point[0]) < 1e-12


def test_auto_adapt_doubles_until_checks_pass():
    # overstating the smoothness slows the inner method down, so a
    # single inner iteration at a tiny weight must fail the checks
    obj = scalar_objective(lipschitz=50.0, radius=3.0)
    res = auto_adapt(obj, np.array([2.0]), 1e-4, 1, GD, seed=5)
    assert res.doublings >= 1
    assert res.kappa == pytest.approx(1e-4 * 2.0 ** res.doublings)
    assert res.criteria.accepted


def test_auto_adapt_raises_at_the_doubling_cap():
    obj = scalar_objective(lipschitz=50.0, radius=3.0)
    with pytest.raises(AutoAdaptError) as info:
        auto_adapt(obj, np.array([2.0]), 1e-12, 1, GD, max_doublings=0)
    assert info.value.doublings == 0
    assert info.value.kappa == pytest.approx(1e-12)


def test_auto_adapt_merges_counters():
    obj = scalar_objective()
    c = Counters()
    res = auto_adapt(obj, np.array([1.0]), 0.5, 3, GD, counters=c)
    assert c.grad_evals == res.evals.grad_evals
    assert c.grad_evals > 0


def base_config(**kw):
    defaults = dict(kappa0=1.0, kappa_cvx=1.0, prox_iters=5, accel_iters=5,
                    max_outer=8, seed=0)
    defaults.update(kw)
    return CatalystConfig(**defaults)


def test_config_validation():
    with pytest.raises(ValueError):
        base_config(kappa0=0.0)
    with pytest.raises(ValueError):
        base_config(prox_iters=0)
    with pytest.raises(ValueError):
        base_config(mode="fast")
    with pytest.raises(ValueError):
        base_config(epsilon=-1.0)


def test_scalar_quadratic_first_iterations_by_hand():
    obj = scalar_objective()
    res = run_catalyst(obj, base_config(max_outer=2), GD, np.array([1.0]))
    # eta = 1/(L+kappa) = 1/2 solves each subproblem in one step:
    # xbar_1 = xtil_1 = 1/2, then 1/4 at the second iteration
    assert res.trace[0].fval == pytest.approx(0.125, abs=1e-15)
    assert res.trace[0].winner == "accel"  # tie goes to the accelerated point
    assert res.trace[0].step_norm == pytest.approx(0.5)
    assert res.trace[0].kappa == pytest.approx(1.0)
    assert res.trace[1].fval == pytest.approx(0.03125, abs=1e-15)
    assert res.point[0] == pytest.approx(0.25)
    assert res.stopped == "max_outer"


def test_infeasible_start_is_rejected():
    obj = scalar_objective(radius=1.0)
    with pytest.raises(ValueError):
        run_catalyst(obj, base_config(), GD, np.array([5.0]))
    with pytest.raises(ValueError):
        run_catalyst(obj, base_config(), GD, np.array([1.0, 2.0]))


def ball_fixture(seed=0):
    return spectrum_quadratic(8, 2.0, 1.0, seed, n_components=4, ball_radius=3.0)


def test_trace_fvals_are_monotone_and_reach_the_known_minimum():
    obj = ball_fixture()
    cfg = base_config(kappa0=0.25, kappa_cvx=1.0, prox_iters=12, accel_iters=12,
                      max_outer=120)
    x0 = np.full(8, 0.5)
    res = run_catalyst(obj, cfg, GD, x0)
    fvals = [t.fval for t in res.trace]
    for prev, cur in zip(fvals, fvals[1:]):
        assert cur <= prev + 1e-11 * (1.0 + abs(prev))
    assert fvals[-1] == pytest.approx(ball_quadratic_min(1.0, 3.0), abs=1e-5)


def test_kappa_never_decreases_along_the_trace():
    obj = ball_fixture()
    cfg = base_config(kappa0=1e-3, kappa_cvx=0.5, prox_iters=6, accel_iters=6,
                      max_outer=40)
    res = run_catalyst(obj, cfg, GD, np.full(8, 0.5))
    kappas = [t.kappa for t in res.trace]
    assert all(b >= a for a, b in zip(kappas, kappas[1:]))
    assert kappas == sorted(kappas)


def test_stochastic_runs_are_seed_reproducible():
    obj = ball_fixture()
    cfg = base_config(prox_iters=16, accel_iters=16, max_outer=10, seed=3)
    a = run_catalyst(obj, cfg, SVRG, np.full(8, 0.5))
    b = run_catalyst(obj, cfg, SVRG, np.full(8, 0.5))
    assert [t.fval for t in a.trace] == [t.fval for t in b.trace]
    assert np.array_equal(a.point, b.point)
    c = run_catalyst(obj, base_config(prox_iters=16, accel_iters=16,
                                      max_outer=10, seed=4),
                     SVRG, np.full(8, 0.5))
    assert [t.fval for t in c.trace] != [t.fval for t in a.trace]


def test_epsilon_stops_the_outer_loop():
    obj = scalar_objective()
    cfg = base_config(epsilon=1e-4, max_outer=500)
    res = run_catalyst(obj, cfg, GD, np.array([1.0]))
    assert res.stopped == "epsilon"
    assert res.trace[-1].stationarity < 1e-4
    assert len(res.trace) < 500


def test_gradient_budget_stops_the_outer_loop():
    obj = ball_fixture()
    cfg = base_config(prox_iters=6, accel_iters=6, max_outer=10_000,
                      max_grad_evals=300)
    res = run_catalyst(obj, cfg, GD, np.full(8, 0.5))
    assert res.stopped == "budget"
    assert res.trace[-1].grad_evals >= 300
    # the overshoot is at most one outer iteration
    assert res.trace[-2].grad_evals < 300


def test_trace_grad_evals_match_the_counters():
    obj = ball_fixture()
    cfg = base_config(prox_iters=6, accel_iters=6, max_outer=5)
    res = run_catalyst(obj, cfg, GD, np.full(8, 0.5))
    assert res.trace[-1].grad_evals == res.counters.grad_evals
    evals = [t.grad_evals for t in res.trace]
    assert evals == sorted(evals)


def test_basic_mode_aborts_when_kappa0_is_hopeless():
    obj = ball_fixture()
    cfg = base_config(kappa0=1e-10, kappa_cvx=1.0, prox_iters=1, accel_iters=1,
                      max_outer=4, mode="basic")
    with pytest.raises(CatalystAbort) as info:
        run_catalyst(obj, cfg, GD, np.full(8, 0.5))
    assert info.value.trace == []
    assert "kappa" in str(info.value)


def test_auto_mode_survives_the_same_kappa0():
    obj = ball_fixture()
    cfg = base_config(kappa0=1e-10, kappa_cvx=1.0, prox_iters=12, accel_iters=12,
                      max_outer=25)
    res = run_catalyst(obj, cfg, GD, np.full(8, 0.5))
    assert isinstance(res, CatalystResult)
    assert res.trace[-1].kappa > 1e-10  # adaptation kicked in
    fvals = [t.fval for t in res.trace]
    assert fvals[-1] <= fvals[0]


def test_lazy_prox_matches_plain_run_at_convergence():
    obj = ball_fixture()
    kw = dict(kappa0=0.5, kappa_cvx=1.0, prox_iters=12, accel_iters=12,
              max_outer=80)
    plain = run_catalyst(obj, base_config(**kw), GD, np.full(8, 0.5))
    lazy = run_catalyst(obj, base_config(lazy_prox=True, **kw), GD,
                        np.full(8, 0.5))
    target = ball_quadratic_min(1.0, 3.0)
    assert plain.trace[-1].fval == pytest.approx(target, abs=1e-4)
    assert lazy.trace[-1].fval == pytest.approx(target, abs=1e-4)


def test_logk_factor_grows_the_accelerated_budget():
    obj = ball_fixture()
    kw = dict(kappa0=0.5, kappa_cvx=1.0, prox_iters=4, accel_iters=4,
              max_outer=12)
    plain = run_catalyst(obj, base_config(**kw), GD, np.full(8, 0.5))
    logk = run_catalyst(obj, base_config(use_logk_factor=True, **kw), GD,
                        np.full(8, 0.5))
    # same outer count, strictly more inner work once ceil(S log(k+1)) > S
    assert len(plain.trace) == len(logk.trace)
    assert logk.counters.grad_evals > plain.counters.grad_evals


def test_inner_tolerance_mode_reaches_tight_subproblem_accuracy():
    obj = scalar_objective()
    cfg = base_config(inner_tolerance=1e-12, max_outer=10)
    res = run_catalyst(obj, cfg, GD, np.array([1.0]))
    assert res.trace[-1].fval < 1e-6
    for prev, cur in zip(res.trace, res.trace[1:]):
        assert cur.fval <= prev.fval + 1e-12
