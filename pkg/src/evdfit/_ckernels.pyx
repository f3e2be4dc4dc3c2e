# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the exponentially weighted sums."""

from libc.math cimport exp, log, INFINITY


def weighted_lse_mean(const double[::1] v, const double[::1] w, double t):
    """Return ``(log sum w*exp(t*v), sum w*v*exp(t*v) / sum w*exp(t*v))``.

    Entries with ``w == 0`` are skipped.  Exponents are shifted by their
    maximum so every weight lies in (0, w].
    """
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double m = -INFINITY, a, e, s = 0.0, sv = 0.0
    if w.shape[0] != n:
        raise ValueError("v and w differ in length")
    for i in range(n):
        if w[i] > 0.0:
            a = t * v[i]
            if a > m:
                m = a
    if m == -INFINITY:
        raise ValueError("no positive weight")
    for i in range(n):
        if w[i] > 0.0:
            e = w[i] * exp(t * v[i] - m)
            s += e
            sv += e * v[i]
    return m + log(s), sv / s
