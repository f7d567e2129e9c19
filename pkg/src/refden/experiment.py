"""Monte Carlo experiment grids: scan one parameter, average MSE over replicates.

Every grid cell (scan value x replicate) derives its own seed as
``SeedSequence(master_seed, spawn_key=(scan_index, replicate_index))``, so
cells are independently reproducible and the output is byte-identical for any
worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._util import ordered_map
from .backend import kernels
from .errors import InvalidArgumentError
from .estimators import VARIANTS, estimate_jl, estimate_refactor, estimate_star
from .linalg import svd, truncate
from .synth import NoiseSpec, make_noise, make_signal

SCAN_VARIABLES = ("t", "x", "n")

#: output-table column stem per estimator variant
COLUMN_NAMES = {
    "tsvd": "tsvd_mse",
    "refactor": "refactor_mse",
    "refactor_plus": "refactor_mse_corr",
    "refactor_star": "refactor_mse_full",
    "jl": "JL_mse",
    "jl_star": "JL_mse_full",
}


@dataclass
class ExperimentSpec:
    """One parameter scan: which variable moves, and everything held fixed."""

    scan: str
    values: tuple
    m: int = 200
    n: int = 200
    r: int = 5
    t: int = 100
    x: float = 4.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    support_style: str = "gaussian_orthonormalized"
    replicates: int = 50
    estimators: tuple = ("refactor", "tsvd", "jl")
    master_seed: int = 0

    def __post_init__(self):
        if self.scan not in SCAN_VARIABLES:
            raise InvalidArgumentError(f"scan must be one of {SCAN_VARIABLES}")
        vals = tuple(self.values)
        if not vals:
            raise InvalidArgumentError("scan values must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InvalidArgumentError("scan values must be strictly increasing")
        if self.scan in ("t", "n"):
            vals = tuple(int(v) for v in vals)
        else:
            vals = tuple(float(v) for v in vals)
        self.values = vals
        if self.replicates < 1:
            raise InvalidArgumentError("replicates must be >= 1")
        ests = tuple(self.estimators)
        if not ests or any(e not in VARIANTS for e in ests):
            raise InvalidArgumentError(f"estimators must be a non-empty subset of {VARIANTS}")
        self.estimators = ests

    def cell_params(self, value):
        """(m, n, r, t, x) with the scanned variable substituted."""
        m, n, r, t, x = self.m, self.n, self.r, self.t, self.x
        if self.scan == "t":
            t = int(value)
        elif self.scan == "x":
            x = float(value)
        else:
            n = int(value)
        return m, n, r, t, x


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    mean: dict[str, np.ndarray]
    stderr: dict[str, np.ndarray]

    def to_table(self) -> str:
        header = [self.spec.scan]
        for est in self.spec.estimators:
            stem = COLUMN_NAMES[est]
            header += [stem, stem + "_std"]
        lines = [" ".join(header)]
        for i, value in enumerate(self.spec.values):
            row = [f"{value:.17g}" if self.spec.scan == "x" else str(value)]
            for est in self.spec.estimators:
                row.append(f"{self.mean[est][i]:.17g}")
                row.append(f"{self.stderr[est][i]:.17g}")
            lines.append(" ".join(row))
        return "\n".join(lines) + "\n"


def _cell_mses(spec: ExperimentSpec, scan_index: int, replicate: int) -> dict[str, float]:
    """All requested estimators' MSE on one synthetic instance.

    The first-pass SVD is shared across estimators; star variants run their
    second decomposition on top of it.
    """
    m, n, r, t, x = spec.cell_params(spec.values[scan_index])
    ss = np.random.SeedSequence(entropy=spec.master_seed,
                                spawn_key=(scan_index, replicate))
    model_seed, noise_seed = ss.spawn(2)
    model = make_signal(m, n, r, t, x, spec.support_style, seed=model_seed)
    x_mat = model.signal_matrix()
    y = x_mat + make_noise(m, n, spec.noise, noise_seed)

    factors = svd(y)
    out = {}
    for est in spec.estimators:
        if est == "tsvd":
            estimate = truncate(factors, r)
        elif est in ("refactor", "refactor_plus"):
            estimate = estimate_refactor(y, r, t, est, factors=factors).estimate
        elif est == "jl":
            estimate = estimate_jl(y, r, t, factors=factors).estimate
        else:
            estimate = estimate_star(y, r, t, est, factors=factors).estimate
        out[est] = kernels.sq_frobenius_diff(estimate, x_mat)
    return out


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Run the full grid and aggregate mean MSE and its standard error."""
    for value in spec.values:
        m, n, r, t, x = spec.cell_params(value)
        if t > n:
            raise InvalidArgumentError(f"t={t} exceeds n={n} at scan value {value}")
        if not 1 <= r <= min(m, t):
            raise InvalidArgumentError(f"r={r} infeasible at scan value {value}")
        if spec.scan == "x" and x <= 0:
            raise InvalidArgumentError("scanned x values must be positive")

    cells = [(si, ri) for si in range(len(spec.values))
             for ri in range(spec.replicates)]
    results = ordered_map(lambda cell: _cell_mses(spec, *cell), cells, threads)

    n_vals = len(spec.values)
    reps = spec.replicates
    mean: dict[str, np.ndarray] = {}
    stderr: dict[str, np.ndarray] = {}
    for est in spec.estimators:
        grid = np.array([r[est] for r in results]).reshape(n_vals, reps)
        mean[est] = grid.mean(axis=1)
        if reps > 1:
            stderr[est] = grid.std(axis=1, ddof=1) / np.sqrt(reps)
        else:
            stderr[est] = np.zeros(n_vals)
    return ExperimentResult(spec=spec, mean=mean, stderr=stderr)


def write_table(result: ExperimentResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(result.to_table())
