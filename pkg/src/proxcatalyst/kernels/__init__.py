"""Numeric kernels with two interchangeable backends.

The default backend compiles the hot loops (elastic-net coordinate
descent, shrinkage operators, per-sample logistic oracles) with numba.
Set ``PROXCATALYST_KERNELS=numpy`` before import to force the pure-numpy
fallback; ``PROXCATALYST_KERNELS=numba`` demands the compiled path and
raises if numba is unavailable.  ``BACKEND`` records which one is live.
"""

import os

_requested = os.environ.get("PROXCATALYST_KERNELS", "").strip().lower()
if _requested not in ("", "numpy", "numba"):
    raise RuntimeError(
        "PROXCATALYST_KERNELS must be 'numpy' or 'numba', got %r" % _requested
    )

if _requested == "numpy":
    BACKEND = "numpy"
else:
    try:
        from . import _numba  # noqa: F401

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"

if BACKEND == "numba":
    from ._numba import (
        enet_cd,
        enet_prox,
        logit_sample_grad,
        logit_sample_value,
        soft_threshold,
        svrg_logit_epoch,
    )
else:
    from ._numpy import (
        enet_cd,
        enet_prox,
        logit_sample_grad,
        logit_sample_value,
        soft_threshold,
    )

    # compiled-only fusion of the SVRG step loop; the interpreted loop in
    # solvers.run_inner is the fallback, so no numpy twin exists
    svrg_logit_epoch = None

__all__ = [
    "BACKEND",
    "enet_cd",
    "enet_prox",
    "logit_sample_grad",
    "logit_sample_value",
    "soft_threshold",
    "svrg_logit_epoch",
]
