"""Finite-sum quadratics with a controlled spectrum.

f0(x) = (1/2) x'Qx + b'x split into n component quadratics whose mean
recovers (Q, b) exactly, so full-gradient methods see the unperturbed
problem while incremental methods get genuine component variance.
The reported constants come from the spectrum of Q: L = max |eig| and
rho = max(0, -min eig), the weak-convexity modulus.
"""

from __future__ import annotations

import numpy as np

from ..core import BallIndicator, CompositeObjective, SmoothPart


class QuadraticSmooth(SmoothPart):
    def __init__(self, Q, b, comps_Q=None, comps_b=None):
        Q = np.asarray(Q, dtype=float)
        b = np.asarray(b, dtype=float)
        p = Q.shape[0]
        if Q.shape != (p, p) or b.shape != (p,):
            raise ValueError("Q must be (p, p) and b (p,)")
        if comps_Q is None:
            comps_Q = Q[np.newaxis]
            comps_b = b[np.newaxis]
        comps_Q = np.asarray(comps_Q, dtype=float)
        comps_b = np.asarray(comps_b, dtype=float)
        if not np.allclose(comps_Q.mean(axis=0), Q, atol=1e-10):
            raise ValueError("component matrices must average to Q")
        if not np.allclose(comps_b.mean(axis=0), b, atol=1e-10):
            raise ValueError("component linear terms must average to b")
        self.Q = Q
        self.b = b
        self.comps_Q = comps_Q
        self.comps_b = comps_b
        self.dim = p
        self.n_components = comps_Q.shape[0]

    def component_value(self, i, x):
        return 0.5 * float(x @ (self.comps_Q[i] @ x)) + float(self.comps_b[i] @ x)

    def component_gradient(self, i, x):
        return self.comps_Q[i] @ x + self.comps_b[i]

    def value(self, x):
        return 0.5 * float(x @ (self.Q @ x)) + float(self.b @ x)

    def gradient(self, x):
        return self.Q @ x + self.b


def quadratic_objective(Q, b, psi=None, comps_Q=None, comps_b=None,
                        lipschitz=None, weak_convexity=None) -> CompositeObjective:
    """Composite objective over a quadratic smooth part.  Constants not
    supplied are measured from the spectrum of the symmetrized Q."""
    smooth = QuadraticSmooth(Q, b, comps_Q, comps_b)
    if lipschitz is None or weak_convexity is None:
        w = np.linalg.eigvalsh(0.5 * (smooth.Q + smooth.Q.T))
        if lipschitz is None:
            lipschitz = float(np.max(np.abs(w)))
        if weak_convexity is None:
            weak_convexity = float(max(0.0, -w.min()))
    return CompositeObjective(smooth, psi, lipschitz=lipschitz,
                              weak_convexity=weak_convexity)


def haar_orthogonal(p: int, rng) -> np.ndarray:
    """Haar-distributed orthogonal matrix via sign-corrected QR."""
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return q * np.sign(np.diag(r))[np.newaxis, :]


def spectrum_quadratic(p, lipschitz, rho, seed, n_components=1,
                       component_scale=0.25, b_scale=0.0,
                       ball_radius=None) -> CompositeObjective:
    """Quadratic with eigenvalues spanning [-rho, L], both endpoints
    attained, via orthogonal conjugation of an evenly spaced diagonal.

    With n_components > 1 the smooth part is split as Q_i = Q + dQ_i
    where the symmetric perturbations dQ_i average to zero exactly
    (scale component_scale * L), and likewise for the linear terms.
    ball_radius, when given, adds the l2-ball indicator so weakly
    convex instances are bounded below with minimum known from the
    spectrum (-rho * radius^2 / 2 when b = 0).
    """
    if p < 2:
        raise ValueError("need p >= 2 to attain both spectrum endpoints")
    if rho < 0 or lipschitz <= 0 or rho > lipschitz:
        raise ValueError("need 0 <= rho <= L with L > 0")
    rng = np.random.Generator(np.random.Philox(seed))
    eigs = np.linspace(-rho, lipschitz, p)
    u = haar_orthogonal(p, rng)
    Q = (u * eigs[np.newaxis, :]) @ u.T
    Q = 0.5 * (Q + Q.T)
    b = b_scale * rng.standard_normal(p) if b_scale else np.zeros(p)
    comps_Q = comps_b = None
    if n_components > 1:
        raw = rng.standard_normal((n_components, p, p))
        raw = 0.5 * (raw + np.transpose(raw, (0, 2, 1)))
        raw -= raw.mean(axis=0)
        comps_Q = Q[np.newaxis] + component_scale * lipschitz * raw / np.sqrt(p)
        rawb = rng.standard_normal((n_components, p))
        rawb -= rawb.mean(axis=0)
        comps_b = b[np.newaxis] + component_scale * lipschitz * rawb
    psi = BallIndicator(ball_radius) if ball_radius is not None else None
    return quadratic_objective(Q, b, psi, comps_Q, comps_b,
                               lipschitz=float(lipschitz), weak_convexity=float(rho))


def ball_quadratic_min(rho: float, radius: float) -> float:
    """min of (1/2) x'Qx over the radius ball when min eig(Q) = -rho < 0:
    all mass on the most negative eigendirection, at the boundary."""
    if rho <= 0:
        return 0.0
    return -0.5 * rho * radius * radius
