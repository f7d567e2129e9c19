# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: per-column reductions and batched logistic fits.

Mirrors ``refden._kernels_py``; ``refden.backend`` selects whichever imports.
"""

import numpy as np

from libc.math cimport exp, fabs, log, log1p, sqrt

NORM_FLOOR = 1e-300

STATUS_OK = 0
STATUS_SEPARATION = 1
STATUS_NO_CONVERGENCE = 2
STATUS_SINGULAR = 3

cdef double _NORM_FLOOR = 1e-300
cdef signed char _OK = 0
cdef signed char _SEPARATION = 1
cdef signed char _NO_CONVERGENCE = 2
cdef signed char _SINGULAR = 3


cdef inline double _expit(double e) noexcept nogil:
    cdef double z
    if e >= 0.0:
        return 1.0 / (1.0 + exp(-e))
    z = exp(e)
    return z / (1.0 + z)


cdef inline double _softplus(double e) noexcept nogil:
    # log(1 + exp(e)) without overflow
    if e > 30.0:
        return e + log1p(exp(-e))
    return log1p(exp(e))


def column_dots(double[:, ::1] a, double[:, ::1] b):
    """Per-column inner products <a_j, b_j>."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    if b.shape[0] != m or b.shape[1] != n:
        raise ValueError("shape mismatch")
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(m):
            for j in range(n):
                out[j] += a[i, j] * b[i, j]
    return out_arr


def column_sqnorms(double[:, ::1] a):
    """Per-column squared Euclidean norms."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(m):
            for j in range(n):
                out[j] += a[i, j] * a[i, j]
    return out_arr


def column_correlations(double[:, ::1] a, double[:, ::1] b):
    """Per-column cosine similarities, zero when either norm underflows."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    if b.shape[0] != m or b.shape[1] != n:
        raise ValueError("shape mismatch")
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    na_arr = np.zeros(n)
    nb_arr = np.zeros(n)
    cdef double[::1] na = na_arr
    cdef double[::1] nb = nb_arr
    cdef double pa, pb
    with nogil:
        for i in range(m):
            for j in range(n):
                out[j] += a[i, j] * b[i, j]
                na[j] += a[i, j] * a[i, j]
                nb[j] += b[i, j] * b[i, j]
        for j in range(n):
            pa = sqrt(na[j])
            pb = sqrt(nb[j])
            if pa >= _NORM_FLOOR and pb >= _NORM_FLOOR:
                out[j] = out[j] / (pa * pb)
            else:
                out[j] = 0.0
    return out_arr


def sq_frobenius(double[:, ::1] a):
    """Sum of squared entries."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    cdef double acc = 0.0
    with nogil:
        for i in range(m):
            for j in range(n):
                acc += a[i, j] * a[i, j]
    return acc


def sq_frobenius_diff(double[:, ::1] a, double[:, ::1] b):
    """Sum of squared entrywise differences."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], i, j
    cdef double acc = 0.0, d
    if b.shape[0] != m or b.shape[1] != n:
        raise ValueError("shape mismatch")
    with nogil:
        for i in range(m):
            for j in range(n):
                d = a[i, j] - b[i, j]
                acc += d * d
    return acc


def fit_logistic_columns(cols, labels, int max_iter=50, double tol=1e-10,
                         double sep_threshold=20.0):
    """Fit intercept + slope logistic models to every column independently.

    Same contract as the numpy twin: returns (slope, slope_stderr, status).
    """
    # transpose once so each column is a contiguous row
    vt_arr = np.ascontiguousarray(np.asarray(cols, dtype=np.float64).T)
    y_arr = np.ascontiguousarray(np.asarray(labels, dtype=np.float64))
    cdef double[:, ::1] vt = vt_arr
    cdef double[::1] y = y_arr
    cdef Py_ssize_t p = vt.shape[0], m = vt.shape[1], j, i, it

    slope_arr = np.zeros(p)
    stderr_arr = np.full(p, np.nan)
    status_arr = np.full(p, STATUS_NO_CONVERGENCE, dtype=np.int8)
    cdef double[::1] slope = slope_arr
    cdef double[::1] stderr = stderr_arr
    cdef signed char[::1] status = status_arr

    cdef double b0, b1, ll_prev, ll, vmin, vmax
    cdef double s00, s01, s11, g0, g1, det, v, eta, mu, w, d

    with nogil:
        for j in range(p):
            vmin = vt[j, 0]
            vmax = vt[j, 0]
            for i in range(1, m):
                if vt[j, i] < vmin:
                    vmin = vt[j, i]
                if vt[j, i] > vmax:
                    vmax = vt[j, i]
            if vmax == vmin:
                status[j] = _SINGULAR
                continue

            b0 = 0.0
            b1 = 0.0
            ll_prev = -m * log(2.0)
            for it in range(max_iter):
                s00 = 0.0
                s01 = 0.0
                s11 = 0.0
                g0 = 0.0
                g1 = 0.0
                for i in range(m):
                    v = vt[j, i]
                    eta = b0 + b1 * v
                    mu = _expit(eta)
                    w = mu * (1.0 - mu)
                    s00 += w
                    s01 += w * v
                    s11 += w * v * v
                    d = y[i] - mu
                    g0 += d
                    g1 += d * v
                det = s00 * s11 - s01 * s01
                if not (det > 0.0):
                    status[j] = _SINGULAR
                    break
                b0 += (s11 * g0 - s01 * g1) / det
                b1 += (s00 * g1 - s01 * g0) / det
                if fabs(b1) > sep_threshold:
                    status[j] = _SEPARATION
                    break
                ll = 0.0
                for i in range(m):
                    eta = b0 + b1 * vt[j, i]
                    ll += y[i] * eta - _softplus(eta)
                if fabs(ll - ll_prev) < tol * (fabs(ll_prev) + 1e-12):
                    status[j] = _OK
                    break
                ll_prev = ll

            slope[j] = b1
            if status[j] == _OK:
                s00 = 0.0
                s01 = 0.0
                s11 = 0.0
                for i in range(m):
                    v = vt[j, i]
                    mu = _expit(b0 + b1 * v)
                    w = mu * (1.0 - mu)
                    s00 += w
                    s01 += w * v
                    s11 += w * v * v
                det = s00 * s11 - s01 * s01
                stderr[j] = sqrt(s00 / det)

    return slope_arr, stderr_arr, status_arr
