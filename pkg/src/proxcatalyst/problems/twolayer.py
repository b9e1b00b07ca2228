"""Two-layer network with softplus activations and logistic loss.

The variable packs both layers, x = (vec(W1), W2) with W1 of shape
(p, d) and W2 of length d; a sample (a_i, b_i) contributes

    f_i(x) = log(1 + exp(-b_i * s_i)),   s_i = W2' softplus(W1' a_i).

Smoothness constants are unknown in closed form and estimated by
random difference quotients, one per layer.
"""

from __future__ import annotations

import numpy as np

from ..core import CompositeObjective, SmoothPart
from ._stable import stable_sigmoid, stable_softplus


class TwoLayerSmooth(SmoothPart):
    def __init__(self, feats, labels, hidden: int):
        feats = np.ascontiguousarray(feats, dtype=float)
        labels = np.ascontiguousarray(labels, dtype=float)
        if feats.ndim != 2 or labels.shape != (feats.shape[0],):
            raise ValueError("feats must be (n, p) with matching labels")
        if not np.all(np.abs(labels) == 1.0):
            raise ValueError("labels must be -1/+1")
        self.feats = feats
        self.labels = labels
        self.n_components, self.p = feats.shape
        self.hidden = int(hidden)
        self.dim = self.p * self.hidden + self.hidden

    def unpack(self, x):
        w1 = x[: self.p * self.hidden].reshape(self.p, self.hidden)
        w2 = x[self.p * self.hidden:]
        return w1, w2

    def pack(self, w1, w2):
        return np.concatenate([np.asarray(w1, dtype=float).ravel(),
                               np.asarray(w2, dtype=float)])

    def component_value(self, i, x):
        w1, w2 = self.unpack(x)
        h = stable_softplus(self.feats[i] @ w1)
        s = float(w2 @ h)
        return float(stable_softplus(-self.labels[i] * s))

    def component_gradient(self, i, x):
        w1, w2 = self.unpack(x)
        a = self.feats[i]
        u = a @ w1
        h = stable_softplus(u)
        s = float(w2 @ h)
        # dl/ds for l(b, s) = log(1 + exp(-b s))
        coef = -self.labels[i] * float(stable_sigmoid(-self.labels[i] * s))
        g2 = coef * h
        g1 = coef * np.outer(a, w2 * stable_sigmoid(u))
        return self.pack(g1, g2)

    def value(self, x):
        w1, w2 = self.unpack(x)
        scores = stable_softplus(self.feats @ w1) @ w2
        return float(np.mean(stable_softplus(-self.labels * scores)))

    def gradient(self, x):
        w1, w2 = self.unpack(x)
        u = self.feats @ w1                      # (n, d)
        h = stable_softplus(u)
        scores = h @ w2
        coef = -self.labels * stable_sigmoid(-self.labels * scores)
        g2 = (h.T @ coef) / self.n_components
        inner = (coef[:, np.newaxis] * stable_sigmoid(u)) * w2[np.newaxis, :]
        g1 = (self.feats.T @ inner) / self.n_components
        return self.pack(g1, g2)


def init_weights(p: int, hidden: int, seed: int):
    """Uniform init scaled by 1/sqrt(fan-in) for each layer."""
    rng = np.random.Generator(np.random.Philox(seed))
    w1 = rng.uniform(-1.0, 1.0, size=(p, hidden)) / np.sqrt(p)
    w2 = rng.uniform(-1.0, 1.0, size=hidden) / np.sqrt(hidden)
    return w1, w2


def estimate_layer_lipschitz(smooth: TwoLayerSmooth, seed: int,
                             max_redraws: int = 16, rng=None):
    """Per-layer smoothness estimates by difference quotients.

    Draws two weight pairs and takes max_i of the full-gradient quotient
    with only one layer varied; a zero denominator triggers a redraw.
    """
    if rng is None:
        rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(max_redraws):
        w1a, w2a = init_weights(smooth.p, smooth.hidden, int(rng.integers(2 ** 62)))
        w1b, w2b = init_weights(smooth.p, smooth.hidden, int(rng.integers(2 ** 62)))
        d1 = float(np.linalg.norm(w1a - w1b))
        d2 = float(np.linalg.norm(w2a - w2b))
        if d1 <= 1e-12 or d2 <= 1e-12:
            continue
        xa = smooth.pack(w1a, w2a)
        xb1 = smooth.pack(w1b, w2a)
        xb2 = smooth.pack(w1a, w2b)
        l1 = l2 = 0.0
        for i in range(smooth.n_components):
            ga = smooth.component_gradient(i, xa)
            l1 = max(l1, float(np.linalg.norm(ga - smooth.component_gradient(i, xb1))) / d1)
            l2 = max(l2, float(np.linalg.norm(ga - smooth.component_gradient(i, xb2))) / d2)
        return max(l1, 1e-8), max(l2, 1e-8)
    raise RuntimeError("could not draw distinct weight pairs")


def twolayer_objective(feats, labels, hidden: int, seed: int = 0,
                       lipschitz: float | None = None) -> tuple[CompositeObjective, np.ndarray]:
    """Objective plus a packed initial point; the Lipschitz estimate is
    the larger of the two per-layer difference quotients."""
    smooth = TwoLayerSmooth(feats, labels, hidden)
    if lipschitz is None:
        l1, l2 = estimate_layer_lipschitz(smooth, derive(seed))
        lipschitz = max(l1, l2)
    w1, w2 = init_weights(smooth.p, hidden, seed)
    obj = CompositeObjective(smooth, None, lipschitz=lipschitz)
    return obj, smooth.pack(w1, w2)


def derive(seed: int) -> int:
    return int(np.random.SeedSequence([int(seed), 77]).generate_state(1, dtype=np.uint64)[0])
