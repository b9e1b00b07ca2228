"""Pure-numpy kernel backend.

Vectorized where the result is elementwise-identical to the loop bodies
in ``_impl``; the sequential coordinate-descent loop is reused as is.
"""

import numpy as np

from ._impl import enet_cd, logit_sample_grad, logit_sample_value  # noqa: F401


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def enet_prox(v, l1, l2):
    # multiply by the reciprocal, matching the _impl loop exactly
    return soft_threshold(v, l1) * (1.0 / (1.0 + l2))
