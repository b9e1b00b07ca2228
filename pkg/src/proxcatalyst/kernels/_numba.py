"""Numba kernel backend: the ``_impl`` bodies compiled with @njit.

No fastmath, so the compiled code performs the same IEEE arithmetic as
the interpreted fallback.
"""

import math

import numpy as np
from numba import njit

from . import _impl

_opts = dict(cache=True, fastmath=False)

soft_threshold = njit(**_opts)(_impl.soft_threshold)
enet_prox = njit(**_opts)(_impl.enet_prox)
enet_cd = njit(**_opts)(_impl.enet_cd)
logit_sample_value = njit(**_opts)(_impl.logit_sample_value)
logit_sample_grad = njit(**_opts)(_impl.logit_sample_grad)


@njit(**_opts)
def svrg_logit_epoch(feats, labels, z, anchor, gbar, eta, idx, start, steps,
                     kappa, center, use_prox, l1, l2, snap_every, snap_buf,
                     snap_steps):
    """One variance-reduced epoch on a logistic prox subproblem.

    This backend-specific fusion of the per-step loop exists because the
    interpreted step body dominates wall time on large sample counts.
    Every floating-point operation matches the generic loop: component
    gradients come from the same compiled ``logit_sample_grad``, the
    kappa shift is applied as g + kappa*(x - center), the update is
    z - eta*((gi - ga) + gbar), and the prox is the same ``enet_prox``
    with weights eta*l1, eta*l2 (skipped when use_prox is false).

    Fills ``snap_buf``/``snap_steps`` with iterate copies at global step
    counts divisible by snap_every (0 disables).  Returns
    (z, steps_taken, finite, n_snaps); a non-finite iterate stops the
    epoch with finite=False after counting the offending step.
    """
    p = z.shape[0]
    taken = 0
    nsnap = 0
    for s in range(steps):
        i = idx[start + s]
        gi = logit_sample_grad(feats, labels, i, z)
        ga = logit_sample_grad(feats, labels, i, anchor)
        v = np.empty(p)
        if kappa != 0.0:
            for j in range(p):
                gij = gi[j] + kappa * (z[j] - center[j])
                gaj = ga[j] + kappa * (anchor[j] - center[j])
                v[j] = z[j] - eta * ((gij - gaj) + gbar[j])
        else:
            for j in range(p):
                v[j] = z[j] - eta * ((gi[j] - ga[j]) + gbar[j])
        if use_prox:
            z = enet_prox(v, eta * l1, eta * l2)
        else:
            z = v
        taken += 1
        finite = True
        for j in range(p):
            if not math.isfinite(z[j]):
                finite = False
                break
        if not finite:
            return z, taken, False, nsnap
        if snap_every > 0 and (start + taken) % snap_every == 0:
            for j in range(p):
                snap_buf[nsnap, j] = z[j]
            snap_steps[nsnap] = start + taken
            nsnap += 1
    return z, taken, True, nsnap
