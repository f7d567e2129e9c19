"""Reference numpy implementations of the hot kernels.

The compiled extension ``refden._kernels`` mirrors every signature in this
module; ``refden.backend`` picks whichever is importable.  Keep the two in
lockstep: same arguments, same status codes, same guard constants.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

NORM_FLOOR = 1e-300

STATUS_OK = 0
STATUS_SEPARATION = 1
STATUS_NO_CONVERGENCE = 2
STATUS_SINGULAR = 3


def column_dots(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-column inner products <a_j, b_j>."""
    return np.einsum("ij,ij->j", a, b)


def column_sqnorms(a: np.ndarray) -> np.ndarray:
    """Per-column squared Euclidean norms."""
    return np.einsum("ij,ij->j", a, a)


def column_correlations(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-column cosine similarities, zero when either norm underflows."""
    dots = np.einsum("ij,ij->j", a, b)
    na = np.sqrt(np.einsum("ij,ij->j", a, a))
    nb = np.sqrt(np.einsum("ij,ij->j", b, b))
    out = np.zeros(a.shape[1])
    ok = (na >= NORM_FLOOR) & (nb >= NORM_FLOOR)
    out[ok] = dots[ok] / (na[ok] * nb[ok])
    return out


def sq_frobenius(a: np.ndarray) -> float:
    """Sum of squared entries."""
    return float(np.einsum("ij,ij->", a, a))


def sq_frobenius_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of squared entrywise differences, without materialising a - b twice."""
    d = a - b
    return float(np.einsum("ij,ij->", d, d))


def _loglik(eta: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (y * eta).sum(axis=0) - np.logaddexp(0.0, eta).sum(axis=0)


def fit_logistic_columns(
    cols: np.ndarray,
    labels: np.ndarray,
    max_iter: int = 50,
    tol: float = 1e-10,
    sep_threshold: float = 20.0,
):
    """Fit intercept + slope logistic models to every column independently.

    Newton/IRLS on the 2-parameter model logit P(y=1) = b0 + b1 * col.
    Convergence is a relative log-likelihood change below ``tol``; a slope
    exceeding ``sep_threshold`` in magnitude is flagged as separation.

    Returns (slope, slope_stderr, status) arrays of length n_columns, with
    status drawn from the STATUS_* constants.  Standard errors are NaN for
    columns that did not converge.
    """
    v = np.ascontiguousarray(cols, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    m, p = v.shape

    b0 = np.zeros(p)
    b1 = np.zeros(p)
    status = np.full(p, STATUS_NO_CONVERGENCE, dtype=np.int8)
    stderr = np.full(p, np.nan)

    degenerate = v.max(axis=0) == v.min(axis=0)
    status[degenerate] = STATUS_SINGULAR

    open_cols = np.flatnonzero(~degenerate)
    # log-likelihood at beta = 0
    ll_prev = np.full(p, -m * np.log(2.0))

    yc = y[:, None]
    for _ in range(max_iter):
        if open_cols.size == 0:
            break
        va = v[:, open_cols]
        eta = b0[open_cols] + va * b1[open_cols]
        mu = expit(eta)
        w = mu * (1.0 - mu)
        resid = yc - mu

        s00 = w.sum(axis=0)
        s01 = (w * va).sum(axis=0)
        s11 = (w * va * va).sum(axis=0)
        g0 = resid.sum(axis=0)
        g1 = (resid * va).sum(axis=0)
        det = s00 * s11 - s01 * s01

        bad = ~np.isfinite(det) | (det <= 0.0)
        if bad.any():
            status[open_cols[bad]] = STATUS_SINGULAR
            good = ~bad
            open_cols = open_cols[good]
            if open_cols.size == 0:
                break
            va, eta, s00, s01, s11, g0, g1, det = (
                arr[..., good] for arr in (va, eta, s00, s01, s11, g0, g1, det)
            )

        b0[open_cols] += (s11 * g0 - s01 * g1) / det
        b1[open_cols] += (s00 * g1 - s01 * g0) / det

        separated = np.abs(b1[open_cols]) > sep_threshold
        if separated.any():
            status[open_cols[separated]] = STATUS_SEPARATION
            open_cols = open_cols[~separated]
            if open_cols.size == 0:
                break
            va = v[:, open_cols]

        ll = _loglik(b0[open_cols] + va * b1[open_cols], yc)
        prev = ll_prev[open_cols]
        converged = np.abs(ll - prev) < tol * (np.abs(prev) + 1e-12)
        status[open_cols[converged]] = STATUS_OK
        ll_prev[open_cols] = ll
        open_cols = open_cols[~converged]

    done = status == STATUS_OK
    if done.any():
        vd = v[:, done]
        eta = b0[done] + vd * b1[done]
        mu = expit(eta)
        w = mu * (1.0 - mu)
        s00 = w.sum(axis=0)
        s01 = (w * vd).sum(axis=0)
        s11 = (w * vd * vd).sum(axis=0)
        det = s00 * s11 - s01 * s01
        stderr[done] = np.sqrt(s00 / det)

    return b1, stderr, status
