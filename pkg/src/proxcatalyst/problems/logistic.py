"""Binary logistic regression with optional elastic-net regularization."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..core import CompositeObjective, ElasticNet, SmoothPart
from ._stable import stable_sigmoid, stable_softplus


class LogisticSmooth(SmoothPart):
    """f_i(x) = log(1 + exp(-labels[i] * <feats[i], x>))."""

    kernel_tag = "logit"

    def __init__(self, feats, labels):
        feats = np.ascontiguousarray(feats, dtype=float)
        labels = np.ascontiguousarray(labels, dtype=float)
        if feats.ndim != 2 or labels.shape != (feats.shape[0],):
            raise ValueError("feats must be (n, p) with matching labels")
        if not np.all(np.abs(labels) == 1.0):
            raise ValueError("labels must be -1/+1")
        self.feats = feats
        self.labels = labels
        self.n_components, self.dim = feats.shape

    def component_value(self, i, x):
        return kernels.logit_sample_value(self.feats, self.labels, i, x)

    def component_gradient(self, i, x):
        return kernels.logit_sample_grad(self.feats, self.labels, i, x)

    def value(self, x):
        u = -self.labels * (self.feats @ x)
        return float(np.mean(stable_softplus(u)))

    def gradient(self, x):
        u = -self.labels * (self.feats @ x)
        coef = -self.labels * stable_sigmoid(u)
        return (coef @ self.feats) / self.n_components


def component_lipschitz(feats) -> float:
    """max_i ||a_i||^2 / 4, the sharp smoothness bound of a single
    logistic component; incremental stepsizes need the max, not the
    batch constant."""
    return float(np.max(np.einsum("ij,ij->i", feats, feats))) / 4.0


def logistic_objective(feats, labels, l1: float = 0.0, l2: float = 0.0,
                       lipschitz: float | None = None) -> CompositeObjective:
    smooth = LogisticSmooth(feats, labels)
    psi = ElasticNet(l1, l2) if (l1 > 0 or l2 > 0) else None
    if lipschitz is None:
        lipschitz = max(component_lipschitz(smooth.feats), 1e-12)
    return CompositeObjective(smooth, psi, lipschitz=lipschitz, weak_convexity=0.0)


def synthetic_logistic(n: int, p: int, cond: float, seed: int,
                       l1: float = 0.0) -> CompositeObjective:
    """Seeded classification fixture whose l2 weight is set from the
    batch smoothness constant so that L_batch / l2 equals ``cond``.

    Features have geometrically decaying column scales (anisotropy);
    labels are the clean signs of a planted separator.  Clean labels
    matter: noisy ones leave residual curvature at the optimum that puts
    a floor under the effective strong convexity, and the cond dial
    would stop dialing right where ill-conditioned runs get interesting.
    """
    if cond < 1:
        raise ValueError("cond must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    scales = np.geomspace(1.0, 0.05, p)
    feats = rng.standard_normal((n, p)) * scales[np.newaxis, :]
    w = rng.standard_normal(p) / np.sqrt(p)
    labels = np.sign(feats @ w + 1e-12)
    batch_l = float(np.linalg.eigvalsh(feats.T @ feats / (4.0 * n)).max())
    l2 = batch_l / cond
    return logistic_objective(feats, labels, l1=l1, l2=l2)
