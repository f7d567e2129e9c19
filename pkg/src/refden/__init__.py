"""Column-sparse low-rank matrix denoising.

Estimators that mask or re-decompose a truncated SVD using per-column
detection statistics, the synthetic-data generators and Monte Carlo
verifiers used to benchmark them, and a confounder-correction association
pipeline built on top.
"""

from .assoc import (
    AssociationResult,
    Phenotype,
    ScenarioSpec,
    deflate,
    expected_quantiles,
    fit_columns,
    inflation_factor,
    logistic_wald,
    make_scenario,
    run_pipeline,
)
from .backend import BACKEND
from .errors import (
    InvalidArgumentError,
    InvalidInputError,
    NumericalError,
    PreconditionError,
    RefdenError,
    SeparationError,
)
from .estimators import (
    VARIANTS,
    DenoiseResult,
    EstimatorConfig,
    SelectionResult,
    denoise,
    estimate_jl,
    estimate_refactor,
    estimate_star,
    estimate_tsvd,
    jl_statistics,
    refactor_plus_statistics,
    refactor_statistics,
    select_columns,
)
from .experiment import (
    COLUMN_NAMES,
    ExperimentResult,
    ExperimentSpec,
    run_experiment,
    write_table,
)
from .linalg import (
    SVDFactors,
    column,
    column_inner,
    column_norm,
    frobenius_sq,
    svd,
    truncate,
)
from .matio import read_matrix, write_matrix
from .synth import NoiseSpec, SignalModel, make_noise, make_signal, observe
from .theory import (
    THEOREM_IDS,
    AlignmentStats,
    SupportConfusion,
    ThresholdReport,
    VerificationReport,
    VerifyParams,
    alignment,
    confusion,
    mse,
    relative_improvement,
    thresholds,
    verify_theorem,
)

__version__ = "0.1.0"
