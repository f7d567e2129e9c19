"""Dense-matrix primitives: SVD with a fixed sign convention, truncation, norms.

All functions are pure and operate on float64 C-contiguous arrays; inputs are
validated for finiteness once on entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import InvalidArgumentError, InvalidInputError, NumericalError


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array, raising on anything else."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidArgumentError(
            f"{name} must be 2-D with positive dimensions, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(arr)


@dataclass
class SVDFactors:
    """Singular triplets of a matrix, strongest first.

    ``left_vectors`` is m-by-k, ``right_vectors`` n-by-k, with k = min(m, n)
    columns holding unit vectors.  Signs follow the convention that the
    largest-magnitude entry of each left vector is non-negative (ties broken
    by lowest row index), which makes the decomposition deterministic.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def k(self) -> int:
        return int(self.singular_values.size)

    def reconstruct(self, r: int | None = None) -> np.ndarray:
        """Sum of the first r (default: all) rank-one triplets."""
        if r is None:
            r = self.k
        u = self.left_vectors[:, :r]
        v = self.right_vectors[:, :r]
        return np.ascontiguousarray((u * self.singular_values[:r]) @ v.T)


def svd(y) -> SVDFactors:
    """Full (thin) singular value decomposition with deterministic signs."""
    arr = as_matrix(y, "input")
    try:
        u, s, vt = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge: {exc}") from exc
    v = vt.T
    # sign convention: largest-|entry| of each left vector made non-negative
    lead = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[lead, np.arange(u.shape[1])])
    signs[signs == 0.0] = 1.0
    u = np.ascontiguousarray(u * signs)
    v = np.ascontiguousarray(v * signs)
    return SVDFactors(s, u, v)


def truncate(factors: SVDFactors, r: int) -> np.ndarray:
    """Best rank-r approximation assembled from the leading r triplets."""
    if not 1 <= r <= factors.k:
        raise InvalidArgumentError(f"rank r={r} not in [1, {factors.k}]")
    return factors.reconstruct(r)


def frobenius_sq(a) -> float:
    """Squared Frobenius norm (sum of squared entries)."""
    return kernels.sq_frobenius(as_matrix(a))


def _check_col(a: np.ndarray, j: int) -> None:
    if not 0 <= j < a.shape[1]:
        raise InvalidArgumentError(f"column index {j} out of range [0, {a.shape[1]})")


def column(a, j: int) -> np.ndarray:
    """Copy of column j."""
    arr = as_matrix(a)
    _check_col(arr, j)
    return arr[:, j].copy()


def column_inner(a, b, j: int) -> float:
    """Inner product of the j-th columns of two same-shape matrices."""
    arr_a = as_matrix(a, "first matrix")
    arr_b = as_matrix(b, "second matrix")
    if arr_a.shape != arr_b.shape:
        raise InvalidArgumentError(
            f"shape mismatch: {arr_a.shape} vs {arr_b.shape}"
        )
    _check_col(arr_a, j)
    return float(arr_a[:, j] @ arr_b[:, j])


def column_norm(a, j: int) -> float:
    """Euclidean norm of column j."""
    arr = as_matrix(a)
    _check_col(arr, j)
    return float(np.linalg.norm(arr[:, j]))
