"""Bivariate causal direction detection with residual independence tests."""

from .core import (
    Direction,
    PairedSample,
    RegressionFit,
    StandardizedSeries,
    as_series,
    fit,
    standardize,
)
from .datagen import GenSpec, NoiseKind, generate, sample_noise
from .detector import (
    Algorithm,
    DirectionReport,
    Verdict,
    compare_algorithms,
    decide,
    gauss_detect,
    pairwise_baseline,
)
from .errors import (
    DegenerateSeries,
    GaussDetectError,
    InsufficientSample,
    InvalidInput,
    LengthMismatch,
    NotStandardized,
)
from .experiments import ExperimentConfig, run_consistency, run_tpd
from .stattests import GaussianityTest, HsicMethod, IndependenceTestConfig, TestDecision

__version__ = "0.1.0"
