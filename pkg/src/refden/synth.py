"""Synthetic column-sparse low-rank signals and noisy observations.

All randomness flows through numpy's PCG64 generator seeded from either an
integer or a ``SeedSequence``, so every artifact is a pure function of
(parameters, seed).  Replicate streams elsewhere in the package are derived
with ``SeedSequence(master, spawn_key=...)``, which is stable across
platforms and process/thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linalg import as_matrix

SUPPORT_STYLES = ("gaussian_orthonormalized", "flat")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        raise InvalidArgumentError("pass an int or SeedSequence, not a Generator")
    return np.random.default_rng(seed)


def _orthonormal(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """QR-orthonormalized Gaussian block with a deterministic sign fix."""
    q, rmat = np.linalg.qr(rng.standard_normal((rows, cols)))
    signs = np.sign(np.diag(rmat))
    signs[signs == 0.0] = 1.0
    return q * signs


@dataclass
class SignalModel:
    """Ground-truth generative parameters of a column-sparse low-rank matrix."""

    m: int
    n: int
    r: int
    t: int
    singular_values: np.ndarray
    left_vectors: np.ndarray   # m-by-r, orthonormal columns
    right_vectors: np.ndarray  # n-by-r, orthonormal columns, zero off active_set
    active_set: np.ndarray     # sorted column indices, length t
    support_style: str

    def signal_matrix(self) -> np.ndarray:
        return np.ascontiguousarray(
            (self.left_vectors * self.singular_values) @ self.right_vectors.T
        )


@dataclass
class NoiseSpec:
    """IID noise description; matrices are scaled by sigma / sqrt(n_columns).

    ``student_t`` draws are multiplied by sqrt((df - 2) / df) when
    ``standardize`` is set (the default), so each entry has unit variance and
    sigma keeps its meaning across distributions.
    """

    distribution: str = "gaussian"
    sigma: float = 1.0
    df: float = 6.0
    standardize: bool = True


def _check_noise(spec: NoiseSpec) -> None:
    if spec.distribution not in ("gaussian", "student_t"):
        raise InvalidArgumentError(f"unknown noise distribution {spec.distribution!r}")
    if spec.sigma < 0:
        raise InvalidArgumentError(f"sigma must be non-negative, got {spec.sigma}")
    if spec.distribution == "student_t":
        if spec.standardize and spec.df <= 2:
            raise InvalidArgumentError("standardized student_t requires df > 2")
        if spec.df <= 0:
            raise InvalidArgumentError(f"df must be positive, got {spec.df}")


def make_signal(m: int, n: int, r: int, t: int, singular_values,
                support_style: str = "gaussian_orthonormalized",
                seed=0, random_support: bool = False) -> SignalModel:
    """Draw a rank-r signal supported on t of n columns.

    The active set is the first t columns unless ``random_support`` asks for
    a uniformly random t-subset.  ``gaussian_orthonormalized`` right vectors
    are standard normal on the support, then orthonormalized; ``flat``
    (rank 1 only) puts 1/sqrt(t) in every active column.
    """
    x = np.atleast_1d(np.asarray(singular_values, dtype=np.float64))
    if x.size == 1 and r > 1:
        x = np.repeat(x, r)
    if m < 1 or n < 1:
        raise InvalidArgumentError("dimensions must be positive")
    if not 0 <= t <= n:
        raise InvalidArgumentError(f"t={t} not in [0, {n}]")
    if not 1 <= r <= min(m, t):
        raise InvalidArgumentError(f"r={r} not in [1, min(m, t)={min(m, t)}]")
    if x.size != r:
        raise InvalidArgumentError(f"need {r} singular values, got {x.size}")
    if np.any(x <= 0) or np.any(np.diff(x) > 0):
        raise InvalidArgumentError("singular values must be positive and non-increasing")
    if support_style not in SUPPORT_STYLES:
        raise InvalidArgumentError(f"unknown support style {support_style!r}")
    if support_style == "flat" and r != 1:
        raise InvalidArgumentError("flat support is defined for r=1 only")

    rng = _rng(seed)
    if random_support:
        active = np.sort(rng.choice(n, size=t, replace=False))
    else:
        active = np.arange(t)

    left = _orthonormal(rng, m, r)
    right = np.zeros((n, r))
    if support_style == "flat":
        right[active, 0] = 1.0 / np.sqrt(t)
    else:
        right[active, :] = _orthonormal(rng, t, r)

    return SignalModel(m=m, n=n, r=r, t=t, singular_values=x,
                       left_vectors=left, right_vectors=right,
                       active_set=active, support_style=support_style)


def make_noise(m: int, n: int, spec: NoiseSpec, seed) -> np.ndarray:
    """IID noise matrix scaled by sigma / sqrt(n)."""
    _check_noise(spec)
    rng = _rng(seed)
    if spec.distribution == "gaussian":
        z = rng.standard_normal((m, n))
    else:
        z = rng.standard_t(spec.df, size=(m, n))
        if spec.standardize:
            z *= np.sqrt((spec.df - 2.0) / spec.df)
    return np.ascontiguousarray(z * (spec.sigma / np.sqrt(n)))


def observe(model: SignalModel, spec: NoiseSpec, seed):
    """Noisy observation of a signal model: returns (Y, X)."""
    x = model.signal_matrix()
    y = x + make_noise(model.m, model.n, spec, seed)
    return as_matrix(y, "observation"), x
