"""The six denoising estimators and the column-detection statistics they sort.

Four of the variants share one structure: compute a truncated SVD of the
data, score every column with a detection statistic, keep the t best-scoring
columns and zero the rest.  They differ only in the statistic (inner product,
correlation, or raw column norm) and in whether the mask is applied to the
truncated reconstruction or to the data itself before a second SVD.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import InvalidArgumentError
from .linalg import SVDFactors, as_matrix, svd, truncate

VARIANTS = ("tsvd", "refactor", "refactor_plus", "refactor_star", "jl", "jl_star")

#: variants whose result is a column mask applied to the truncated SVD
MASKING_VARIANTS = ("refactor", "refactor_plus", "jl")
#: variants that re-decompose the masked data matrix
STAR_VARIANTS = ("refactor_star", "jl_star")


@dataclass
class EstimatorConfig:
    """Which estimator to run and with what oracle parameters.

    ``t`` is ignored for the plain truncated SVD.  ``star_selection`` picks
    the first-pass statistic for ``refactor_star`` ("product" or
    "correlation").
    """

    variant: str
    r: int
    t: int | None = None
    star_selection: str = "product"


@dataclass
class SelectionResult:
    """Per-column statistics with the induced ordering and retained set.

    ``order`` sorts columns by descending absolute statistic, ties broken by
    ascending column index; ``retained`` holds the first t of them, sorted
    ascending.
    """

    statistic: np.ndarray
    order: np.ndarray
    retained: np.ndarray

    @property
    def n(self) -> int:
        return int(self.statistic.size)

    @property
    def t(self) -> int:
        return int(self.retained.size)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.retained] = True
        return out


@dataclass
class DenoiseResult:
    estimate: np.ndarray
    selection: SelectionResult | None
    factors_used: SVDFactors


def _check_pair(y: np.ndarray, xhat: np.ndarray) -> None:
    if y.shape != xhat.shape:
        raise InvalidArgumentError(f"shape mismatch: {xhat.shape} vs {y.shape}")


def refactor_statistics(y, xhat) -> np.ndarray:
    """Per-column inner products between a rank-r reconstruction and the data."""
    y = as_matrix(y, "data")
    xhat = as_matrix(xhat, "reconstruction")
    _check_pair(y, xhat)
    return kernels.column_dots(xhat, y)


def refactor_plus_statistics(y, xhat) -> np.ndarray:
    """Per-column correlations; invariant to positive rescaling of a column."""
    y = as_matrix(y, "data")
    xhat = as_matrix(xhat, "reconstruction")
    _check_pair(y, xhat)
    return kernels.column_correlations(xhat, y)


def jl_statistics(y) -> np.ndarray:
    """Per-column squared norms of the data (column screening baseline)."""
    return kernels.column_sqnorms(as_matrix(y, "data"))


def select_columns(statistics, t: int) -> SelectionResult:
    """Keep the t columns with largest absolute statistic.

    Deterministic: ties in |statistic| are broken by ascending column index.
    """
    stats = np.asarray(statistics, dtype=np.float64).ravel()
    n = stats.size
    if not 0 <= t <= n:
        raise InvalidArgumentError(f"t={t} not in [0, {n}]")
    # lexsort's last key is primary: descending |statistic|, then index
    order = np.lexsort((np.arange(n), -np.abs(stats)))
    retained = np.sort(order[:t])
    return SelectionResult(statistic=stats, order=order, retained=retained)


def _mask_columns(a: np.ndarray, retained: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[:, retained] = a[:, retained]
    return out


def _statistic_for(variant: str, y: np.ndarray, xhat: np.ndarray | None) -> np.ndarray:
    if variant in ("refactor", "product"):
        return refactor_statistics(y, xhat)
    if variant in ("refactor_plus", "correlation"):
        return refactor_plus_statistics(y, xhat)
    if variant == "jl":
        return jl_statistics(y)
    raise InvalidArgumentError(f"unknown statistic variant {variant!r}")


def _validated(y, r: int, t: int | None = None) -> np.ndarray:
    arr = as_matrix(y, "data")
    k = min(arr.shape)
    if not 1 <= r <= k:
        raise InvalidArgumentError(f"rank r={r} not in [1, {k}]")
    if t is not None and not 0 <= t <= arr.shape[1]:
        raise InvalidArgumentError(f"t={t} not in [0, {arr.shape[1]}]")
    return arr


def estimate_tsvd(y, r: int, factors: SVDFactors | None = None) -> DenoiseResult:
    """Plain truncated-SVD estimate of rank r."""
    arr = _validated(y, r)
    if factors is None:
        factors = svd(arr)
    return DenoiseResult(estimate=truncate(factors, r), selection=None,
                         factors_used=factors)


def estimate_refactor(y, r: int, t: int, variant: str = "refactor",
                      factors: SVDFactors | None = None) -> DenoiseResult:
    """Mask the truncated SVD to the t best columns by the chosen statistic.

    ``variant`` is "refactor" (inner products) or "refactor_plus"
    (correlations).
    """
    if variant not in ("refactor", "refactor_plus"):
        raise InvalidArgumentError(f"variant must be refactor or refactor_plus, got {variant!r}")
    arr = _validated(y, r, t)
    if factors is None:
        factors = svd(arr)
    xhat = truncate(factors, r)
    selection = select_columns(_statistic_for(variant, arr, xhat), t)
    return DenoiseResult(estimate=_mask_columns(xhat, selection.retained),
                         selection=selection, factors_used=factors)


def estimate_jl(y, r: int, t: int, factors: SVDFactors | None = None) -> DenoiseResult:
    """Mask the truncated SVD to the t columns of largest data norm."""
    arr = _validated(y, r, t)
    if factors is None:
        factors = svd(arr)
    xhat = truncate(factors, r)
    selection = select_columns(jl_statistics(arr), t)
    return DenoiseResult(estimate=_mask_columns(xhat, selection.retained),
                         selection=selection, factors_used=factors)


def estimate_star(y, r: int, t: int, variant: str = "refactor_star",
                  factors: SVDFactors | None = None,
                  star_selection: str = "product") -> DenoiseResult:
    """Zero the non-selected columns of the data itself, then re-truncate.

    ``refactor_star`` selects by the first-pass truncated-SVD statistic
    (inner products by default, correlations with ``star_selection=
    "correlation"``); ``jl_star`` selects by column norms.  Requires t >= 1:
    a second decomposition of an all-zero matrix is ill-posed.

    ``factors_used`` in the result are those of the masked matrix, i.e. the
    factors the returned estimate is truncated from.
    """
    if variant not in STAR_VARIANTS:
        raise InvalidArgumentError(f"variant must be one of {STAR_VARIANTS}, got {variant!r}")
    arr = _validated(y, r, t)
    if t < 1:
        raise InvalidArgumentError("star variants require t >= 1")
    if variant == "refactor_star":
        if factors is None:
            factors = svd(arr)
        xhat = truncate(factors, r)
        stats = _statistic_for(star_selection, arr, xhat)
    else:
        stats = jl_statistics(arr)
    selection = select_columns(stats, t)
    masked = _mask_columns(arr, selection.retained)
    second = svd(masked)
    return DenoiseResult(estimate=truncate(second, r), selection=selection,
                         factors_used=second)


def denoise(y, config: EstimatorConfig) -> DenoiseResult:
    """Dispatch on the configured variant."""
    if config.variant not in VARIANTS:
        raise InvalidArgumentError(f"unknown variant {config.variant!r}")
    if config.variant == "tsvd":
        return estimate_tsvd(y, config.r)
    if config.t is None:
        raise InvalidArgumentError(f"variant {config.variant} requires t")
    if config.variant in ("refactor", "refactor_plus"):
        return estimate_refactor(y, config.r, config.t, config.variant)
    if config.variant == "jl":
        return estimate_jl(y, config.r, config.t)
    return estimate_star(y, config.r, config.t, config.variant,
                         star_selection=config.star_selection)
