"""Plain-Python kernel bodies shared by both backends.

The numba backend compiles these exact functions with ``@njit`` (no
fastmath, so both paths perform the same IEEE operations in the same
order wherever the numpy path is elementwise-equivalent).
"""

import math

import numpy as np


def soft_threshold(v, t):
    """Elementwise soft threshold: sign(v) * max(|v| - t, 0)."""
    out = np.empty_like(v)
    for j in range(v.shape[0]):
        a = abs(v[j]) - t
        if a < 0.0:
            a = 0.0
        out[j] = math.copysign(a, v[j])
    return out


def enet_prox(v, l1, l2):
    """Prox of l1*||.||_1 + (l2/2)*||.||^2: shrink then scale by 1/(1+l2)."""
    out = np.empty_like(v)
    inv = 1.0 / (1.0 + l2)
    for j in range(v.shape[0]):
        a = abs(v[j]) - l1
        if a < 0.0:
            a = 0.0
        out[j] = math.copysign(a, v[j]) * inv
    return out


def enet_cd(gram, corr, l1, l2, alpha0, tol, max_sweeps):
    """Cyclic coordinate descent for the elastic-net problem

        min_a  0.5 a'Ga - c'a + (l2/2)||a||^2 + l1*||a||_1

    with G = gram (PSD), c = corr.  Returns (alpha, sweeps, last_delta)
    where last_delta is the largest coordinate update of the final sweep.
    Stops once last_delta < tol; the caller is responsible for treating
    last_delta >= tol after max_sweeps as non-convergence.
    """
    p = corr.shape[0]
    alpha = alpha0.copy()
    # running gradient of the quadratic part, G @ alpha
    galpha = np.zeros(p)
    for j in range(p):
        aj = alpha[j]
        if aj != 0.0:
            for k in range(p):
                galpha[k] += gram[k, j] * aj
    last_delta = math.inf
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        last_delta = 0.0
        for j in range(p):
            denom = gram[j, j] + l2
            if denom <= 0.0:
                continue
            old = alpha[j]
            u = corr[j] - galpha[j] + gram[j, j] * old
            a = abs(u) - l1
            if a < 0.0:
                a = 0.0
            new = math.copysign(a, u) / denom
            diff = new - old
            if diff != 0.0:
                alpha[j] = new
                for k in range(p):
                    galpha[k] += gram[k, j] * diff
            ad = abs(diff)
            if ad > last_delta:
                last_delta = ad
        if last_delta < tol:
            break
    return alpha, sweeps, last_delta


def logit_sample_value(feats, labels, i, x):
    """Logistic loss of sample i: log(1 + exp(-labels[i] * <feats[i], x>))."""
    z = 0.0
    for j in range(x.shape[0]):
        z += feats[i, j] * x[j]
    u = -labels[i] * z
    # stable softplus
    if u > 0.0:
        return u + math.log1p(math.exp(-u))
    return math.log1p(math.exp(u))


def logit_sample_grad(feats, labels, i, x):
    """Gradient of the sample-i logistic loss with respect to x."""
    z = 0.0
    for j in range(x.shape[0]):
        z += feats[i, j] * x[j]
    t = -labels[i] * z
    # stable sigmoid(t)
    if t >= 0.0:
        s = 1.0 / (1.0 + math.exp(-t))
    else:
        e = math.exp(t)
        s = e / (1.0 + e)
    coef = -labels[i] * s
    out = np.empty(x.shape[0])
    for j in range(x.shape[0]):
        out[j] = coef * feats[i, j]
    return out
