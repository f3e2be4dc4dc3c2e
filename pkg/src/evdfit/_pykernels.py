"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``."""

import numpy as np


def weighted_lse_mean(v, w, t):
    """Return ``(log sum w*exp(t*v), sum w*v*exp(t*v) / sum w*exp(t*v))``.

    Entries with ``w == 0`` are skipped.  Exponents are shifted by their
    maximum so every weight lies in (0, w].
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise ValueError("v and w differ in length")
    keep = w > 0
    if not keep.any():
        raise ValueError("no positive weight")
    if not keep.all():
        v, w = v[keep], w[keep]
    a = t * v
    m = a.max()
    e = w * np.exp(a - m)
    s = e.sum()
    return float(m + np.log(s)), float(np.dot(e, v) / s)
