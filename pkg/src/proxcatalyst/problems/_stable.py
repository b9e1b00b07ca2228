"""Overflow-safe elementwise sigmoid and softplus."""

import numpy as np


def stable_softplus(u):
    """log(1 + exp(u)) computed as max(u, 0) + log1p(exp(-|u|))."""
    u = np.asarray(u, dtype=float)
    return np.maximum(u, 0.0) + np.log1p(np.exp(-np.abs(u)))


def stable_sigmoid(u):
    """1 / (1 + exp(-u)) without overflow on either tail."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    pos = u >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-u[pos]))
    eu = np.exp(u[~pos])
    out[~pos] = eu / (1.0 + eu)
    return out
