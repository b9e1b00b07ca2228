import math

import numpy as np
import pytest
from conftest import fd_gradient

from proxcatalyst.core import BallIndicator, ColumnBallIndicator, ElasticNet
from proxcatalyst.problems._stable import stable_sigmoid, stable_softplus
from proxcatalyst.problems.dictionary import (
    DictionarySmooth,
    InnerSolveError,
    dictionary_objective,
    estimate_dictionary_lipschitz,
    initial_dictionary,
    project_dictionary,
    solve_code,
)
from proxcatalyst.problems.logistic import (
    LogisticSmooth,
    component_lipschitz,
    logistic_objective,
    synthetic_logistic,
)
from proxcatalyst.problems.quadratic import (
    QuadraticSmooth,
    ball_quadratic_min,
    haar_orthogonal,
    quadratic_objective,
    spectrum_quadratic,
)
from proxcatalyst.problems.twolayer import (
    TwoLayerSmooth,
    init_weights,
    twolayer_objective,
)
from proxcatalyst.data import generate_patches


# ---------------------------------------------------------------------------
# quadratic


def test_quadratic_components_must_average_to_the_total():
    Q = np.eye(2)
    b = np.zeros(2)
    comps_Q = np.stack([2.0 * np.eye(2), np.zeros((2, 2))])
    comps_b = np.zeros((2, 2))
    QuadraticSmooth(Q, b, comps_Q, comps_b)  # consistent split is fine
    with pytest.raises(ValueError):
        QuadraticSmooth(Q, b, np.stack([np.eye(2), np.zeros((2, 2))]), comps_b)


def test_quadratic_value_and_gradient():
    rng = np.random.Generator(np.random.Philox(41))
    B = rng.standard_normal((6, 4))
    Q = B.T @ B / 6
    b = rng.standard_normal(4)
    smooth = QuadraticSmooth(Q, b)
    x = rng.standard_normal(4)
    assert smooth.value(x) == pytest.approx(0.5 * x @ Q @ x + b @ x)
    assert np.allclose(smooth.gradient(x), Q @ x + b)
    fd = fd_gradient(smooth.value, x)
    assert np.allclose(smooth.gradient(x), fd, rtol=1e-6, atol=1e-8)


def test_haar_orthogonal_is_orthogonal():
    rng = np.random.Generator(np.random.Philox(42))
    U = haar_orthogonal(5, rng)
    assert np.allclose(U @ U.T, np.eye(5), atol=1e-12)


def test_spectrum_quadratic_attains_both_spectral_endpoints():
    obj = spectrum_quadratic(12, 2.0, 1.0, seed=7, n_components=5)
    eigs = np.linalg.eigvalsh(obj.smooth.Q)
    assert eigs.max() == pytest.approx(2.0, abs=1e-9)
    assert eigs.min() == pytest.approx(-1.0, abs=1e-9)
    assert obj.lipschitz == 2.0
    assert obj.weak_convexity == 1.0
    avg = obj.smooth.comps_Q.mean(axis=0)
    assert np.allclose(avg, obj.smooth.Q, atol=1e-12)


def test_spectrum_quadratic_is_seed_deterministic():
    a = spectrum_quadratic(6, 1.0, 0.5, seed=3, n_components=2)
    b = spectrum_quadratic(6, 1.0, 0.5, seed=3, n_components=2)
    c = spectrum_quadratic(6, 1.0, 0.5, seed=4, n_components=2)
    assert np.array_equal(a.smooth.Q, b.smooth.Q)
    assert not np.array_equal(a.smooth.Q, c.smooth.Q)


def test_spectrum_quadratic_validates_inputs():
    with pytest.raises(ValueError):
        spectrum_quadratic(1, 1.0, 0.5, seed=0)
    with pytest.raises(ValueError):
        spectrum_quadratic(4, 1.0, 2.0, seed=0)  # rho may not exceed L


def secant_gap(Q, x, y, lam, c):
    """Convexity-defect of f(z) = z'Qz/2 at the lam-blend, modulus c."""

    def f(z):
        return 0.5 * z @ Q @ z

    mid = lam * x + (1 - lam) * y
    blend = lam * f(x) + (1 - lam) * f(y)
    gap = 0.5 * c * lam * (1 - lam) * float((x - y) @ (x - y))
    return f(mid) - (blend + gap)


def test_weak_convexity_secant_inequality_holds_at_rho():
    obj = spectrum_quadratic(10, 2.0, 1.0, seed=11, n_components=3)
    Q = obj.smooth.Q
    rng = np.random.Generator(np.random.Philox(43))
    for _ in range(100):
        x = rng.standard_normal(10) * 2
        y = rng.standard_normal(10) * 2
        lam = float(rng.uniform(0.05, 0.95))
        assert secant_gap(Q, x, y, lam, obj.weak_convexity) <= 1e-10


def test_weak_convexity_secant_inequality_fails_below_rho():
    obj = spectrum_quadratic(10, 2.0, 1.0, seed=11, n_components=3)
    Q = obj.smooth.Q
    eigs, vecs = np.linalg.eigh(Q)
    u = vecs[:, 0]  # eigenvector of the most negative eigenvalue
    gap = secant_gap(Q, 2.0 * u, -2.0 * u, 0.5, 0.9 * obj.weak_convexity)
    assert gap > 1e-3


def test_ball_quadratic_min_matches_projected_gradient_oracle():
    obj = spectrum_quadratic(8, 2.0, 1.0, seed=13, n_components=4,
                             ball_radius=2.5)
    rng = np.random.Generator(np.random.Philox(44))
    x = rng.standard_normal(8)
    x *= 2.5 / np.linalg.norm(x)
    eta = 1.0 / (2.0 * obj.lipschitz)
    proj = BallIndicator(2.5)
    for _ in range(4000):
        x = proj.prox(x - eta * obj.smooth.gradient(x), eta)
    oracle = obj.value(x)
    assert ball_quadratic_min(1.0, 2.5) == pytest.approx(-0.5 * 1.0 * 2.5 ** 2)
    assert oracle == pytest.approx(ball_quadratic_min(1.0, 2.5), abs=1e-6)


def test_quadratic_objective_direct_constants():
    Q = np.diag([0.5, 3.0])
    b = np.array([1.0, -1.0])
    obj = quadratic_objective(Q, b)
    assert obj.lipschitz == pytest.approx(3.0)
    assert obj.weak_convexity == pytest.approx(0.0)
    obj2 = quadratic_objective(np.diag([-0.5, 3.0]), b)
    assert obj2.weak_convexity == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# logistic


def small_logistic(seed=51, n=12, p=5):
    rng = np.random.Generator(np.random.Philox(seed))
    feats = rng.standard_normal((n, p))
    labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return LogisticSmooth(feats, labels)


def test_logistic_value_matches_reference_formula():
    smooth = small_logistic()
    rng = np.random.Generator(np.random.Philox(52))
    x = rng.standard_normal(5)
    margins = smooth.labels * (smooth.feats @ x)
    want = float(np.mean(np.log1p(np.exp(-margins))))
    assert smooth.value(x) == pytest.approx(want, rel=1e-12)


def test_logistic_gradient_matches_finite_differences():
    smooth = small_logistic()
    rng = np.random.Generator(np.random.Philox(53))
    for _ in range(10):
        x = rng.standard_normal(5)
        fd = fd_gradient(smooth.value, x)
        assert np.allclose(smooth.gradient(x), fd, rtol=1e-4, atol=1e-8)


def test_logistic_gradient_is_average_of_components():
    smooth = small_logistic()
    x = np.linspace(-1, 1, 5)
    comps = np.mean([smooth.component_gradient(i, x)
                     for i in range(smooth.n_components)], axis=0)
    assert np.allclose(smooth.gradient(x), comps, atol=1e-12)


def test_logistic_labels_must_be_signs():
    feats = np.ones((2, 2))
    with pytest.raises(ValueError):
        LogisticSmooth(feats, np.array([1.0, 0.5]))


def test_component_lipschitz_is_the_max_row_norm_bound():
    smooth = small_logistic()
    want = max(float(a @ a) / 4.0 for a in smooth.feats)
    assert component_lipschitz(smooth.feats) == pytest.approx(want)


def test_logistic_objective_regularizer_wiring():
    smooth = small_logistic()
    plain = logistic_objective(smooth.feats, smooth.labels)
    assert plain.is_smooth
    assert plain.lipschitz == pytest.approx(component_lipschitz(smooth.feats))
    reg = logistic_objective(smooth.feats, smooth.labels, l1=0.1, l2=0.2)
    assert isinstance(reg.psi, ElasticNet)
    assert reg.psi.l1 == 0.1 and reg.psi.l2 == 0.2


def test_synthetic_logistic_fixture_properties():
    obj = synthetic_logistic(200, 10, cond=1e3, seed=9)
    feats = obj.smooth.feats
    assert feats.shape == (200, 10)
    assert set(np.unique(obj.smooth.labels)) <= {-1.0, 1.0}
    batch_L = float(np.linalg.eigvalsh(feats.T @ feats).max()) / (4 * 200)
    assert obj.psi.l2 == pytest.approx(batch_L / 1e3, rel=1e-9)
    again = synthetic_logistic(200, 10, cond=1e3, seed=9)
    assert np.array_equal(feats, again.smooth.feats)


def test_stable_softplus_and_sigmoid_extremes():
    assert stable_softplus(np.array([800.0]))[0] == pytest.approx(800.0)
    assert stable_softplus(np.array([-800.0]))[0] == pytest.approx(0.0, abs=1e-300)
    assert stable_softplus(np.array([0.0]))[0] == pytest.approx(math.log(2.0))
    s = stable_sigmoid(np.array([-800.0, 0.0, 800.0]))
    assert s[0] == pytest.approx(0.0, abs=1e-300)
    assert s[1] == pytest.approx(0.5)
    assert s[2] == pytest.approx(1.0)
    mid = stable_sigmoid(np.array([1.3]))[0]
    assert mid == pytest.approx(1.0 / (1.0 + math.exp(-1.3)), rel=1e-12)


# ---------------------------------------------------------------------------
# dictionary learning


def test_project_dictionary_clips_long_columns_only():
    D = np.array([[3.0, 0.2], [4.0, 0.1]])
    out = project_dictionary(D)
    assert np.allclose(out[:, 0], [0.6, 0.8])
    assert np.allclose(out[:, 1], D[:, 1])


def test_solve_code_satisfies_elastic_net_optimality():
    rng = np.random.Generator(np.random.Philox(61))
    D = project_dictionary(rng.standard_normal((10, 4)))
    x = rng.standard_normal(10)
    mu, lam = 1e-3, 0.3
    a = solve_code(D, x, mu, lam)
    g = D.T @ (D @ a - x) + mu * a
    for j in range(4):
        if a[j] != 0.0:
            assert abs(g[j] + lam * math.copysign(1.0, a[j])) < 1e-7
        else:
            assert abs(g[j]) <= lam + 1e-7


def test_solve_code_reports_nonconvergence():
    rng = np.random.Generator(np.random.Philox(62))
    D = project_dictionary(rng.standard_normal((10, 4)))
    with pytest.raises(InnerSolveError):
        solve_code(D, rng.standard_normal(10), 1e-3, 0.3, tol=0.0, max_sweeps=1)


def test_dictionary_gradient_matches_finite_differences():
    # Danskin: the gradient treats the per-patch code as fixed at the
    # inner minimizer, which finite differences of the full component
    # value (inner solve included) must confirm
    rng = np.random.Generator(np.random.Philox(63))
    patches = generate_patches(6, 8, seed=64)
    smooth = DictionarySmooth(patches, 3, mu=1e-3, lam=0.2)
    D = initial_dictionary(6, 3, seed=65).ravel()
    for i in (0, 3, 7):
        got = smooth.component_gradient(i, D)
        fd = fd_gradient(lambda d: smooth.component_value(i, d), D, h=1e-6)
        assert np.allclose(got, fd, rtol=1e-4, atol=1e-6), i


def test_dictionary_batch_gradient_averages_components():
    patches = generate_patches(6, 10, seed=66)
    smooth = DictionarySmooth(patches, 3, mu=1e-3, lam=0.2)
    D = initial_dictionary(6, 3, seed=67).ravel()
    comps = np.mean([smooth.component_gradient(i, D) for i in range(10)], axis=0)
    assert np.allclose(smooth.gradient(D), comps, atol=1e-10)


def test_dictionary_codes_do_not_depend_on_the_start_point():
    rng = np.random.Generator(np.random.Philox(68))
    patches = generate_patches(6, 5, seed=69)
    D = project_dictionary(rng.standard_normal((6, 3)))
    for i in range(5):
        cold = solve_code(D, patches[:, i], 1e-3, 0.2)
        warm = solve_code(D, patches[:, i], 1e-3, 0.2,
                          alpha0=rng.standard_normal(3))
        assert np.allclose(cold, warm, atol=1e-7)


def test_dictionary_objective_assembly():
    patches = generate_patches(8, 20, seed=70)
    obj, x0 = dictionary_objective(patches, 4, mu=1e-3, lam=0.2, seed=71)
    assert isinstance(obj.psi, ColumnBallIndicator)
    assert obj.dim == 32 and x0.shape == (32,)
    D0 = x0.reshape(8, 4)
    assert np.all(np.linalg.norm(D0, axis=0) <= 1.0 + 1e-12)
    assert obj.psi.value(x0) == 0.0
    assert obj.lipschitz > 0.0
    assert obj.lipschitz == pytest.approx(
        estimate_dictionary_lipschitz(D0, patches, 1e-3, 0.2))


# ---------------------------------------------------------------------------
# two-layer network


def small_network(seed=81, n=10, p=4, hidden=3):
    rng = np.random.Generator(np.random.Philox(seed))
    feats = rng.standard_normal((n, p))
    labels = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return TwoLayerSmooth(feats, labels, hidden)


def test_twolayer_component_gradient_matches_finite_differences():
    smooth = small_network()
    rng = np.random.Generator(np.random.Philox(82))
    x = rng.standard_normal(smooth.dim) * 0.5
    for i in (0, 4, 9):
        got = smooth.component_gradient(i, x)
        fd = fd_gradient(lambda w: smooth.component_value(i, w), x, h=1e-6)
        assert np.allclose(got, fd, rtol=1e-4, atol=1e-7), i


def test_twolayer_batch_matches_component_average():
    smooth = small_network()
    rng = np.random.Generator(np.random.Philox(83))
    x = rng.standard_normal(smooth.dim) * 0.5
    vals = [smooth.component_value(i, x) for i in range(smooth.n_components)]
    assert smooth.value(x) == pytest.approx(float(np.mean(vals)), rel=1e-12)
    grads = np.mean([smooth.component_gradient(i, x)
                     for i in range(smooth.n_components)], axis=0)
    assert np.allclose(smooth.gradient(x), grads, atol=1e-12)


def test_init_weights_is_deterministic_and_fan_in_scaled():
    W1, W2 = init_weights(6, 4, seed=84)
    assert W1.shape == (6, 4) and W2.shape == (4,)
    assert np.abs(W1).max() <= 1.0 / math.sqrt(6) + 1e-12
    assert np.abs(W2).max() <= 1.0 / math.sqrt(4) + 1e-12
    V1, V2 = init_weights(6, 4, seed=84)
    assert np.array_equal(W1, V1) and np.array_equal(W2, V2)


def test_twolayer_objective_assembly():
    rng = np.random.Generator(np.random.Philox(85))
    feats = rng.standard_normal((20, 5))
    labels = np.where(rng.random(20) < 0.5, -1.0, 1.0)
    obj, x0 = twolayer_objective(feats, labels, hidden=3, seed=86)
    assert obj.dim == 5 * 3 + 3
    assert x0.shape == (obj.dim,)
    assert obj.is_smooth
    assert math.isfinite(obj.lipschitz) and obj.lipschitz > 0
    assert math.isfinite(obj.value(x0))
