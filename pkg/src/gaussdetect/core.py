"""Observation containers, standardization and the two slope-only fits.

Series are plain one-dimensional float64 numpy arrays. They are copied and
marked read-only on entry so that containers built from them stay immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateSeries,
    InsufficientSample,
    InvalidInput,
    LengthMismatch,
    NotStandardized,
)

MIN_LENGTH = 3
STANDARDIZED_TOL = 1e-8


def as_series(values, name: str = "series") -> np.ndarray:
    """Validate ``values`` and return them as a read-only float64 vector."""
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: not numeric ({exc})") from None
    if arr.ndim != 1:
        raise InvalidInput(f"{name}: expected a 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or infinite values")
    arr.setflags(write=False)
    return arr


def sample_std(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1))


@dataclass(frozen=True)
class PairedSample:
    """Positionally paired observations of two variables."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = as_series(self.x, "x")
        y = as_series(self.y, "y")
        if x.shape != y.shape:
            raise LengthMismatch(f"x has {x.size} values but y has {y.size}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)

    def swapped(self) -> PairedSample:
        return PairedSample(self.y, self.x)


@dataclass(frozen=True)
class StandardizedSeries:
    values: np.ndarray
    original_mean: float
    original_std: float

    def inverse(self) -> np.ndarray:
        """Map the standardized values back to the original scale."""
        return self.values * self.original_std + self.original_mean


def standardize(s) -> StandardizedSeries:
    """Center ``s`` and scale it to unit sample standard deviation.

    The (n - 1) denominator is used for the standard deviation.

    Raises
    ------
    InsufficientSample
        Fewer than three observations.
    DegenerateSeries
        The series is constant.
    """
    s = as_series(s)
    if s.size < MIN_LENGTH:
        raise InsufficientSample(f"need at least {MIN_LENGTH} values, got {s.size}")
    mean = float(np.mean(s))
    centered = s - mean
    std = sample_std(centered)
    if std == 0.0 or np.ptp(s) == 0.0:
        raise DegenerateSeries("series is constant (zero standard deviation)")
    values = centered / std
    # one correction pass absorbs the rounding left by the first
    values = values - values.mean()
    values = values / sample_std(values)
    values.setflags(write=False)
    return StandardizedSeries(values, mean, std)


def is_standardized(values: np.ndarray, tol: float = STANDARDIZED_TOL) -> bool:
    return abs(float(np.mean(values))) <= tol and abs(sample_std(values) - 1.0) <= tol


def standardize_pair(sample: PairedSample) -> PairedSample:
    return PairedSample(standardize(sample.x).values, standardize(sample.y).values)


class Direction(str, Enum):
    FORWARD = "forward"  # Y = a X + eps_Y
    REVERSE = "reverse"  # X = b Y + eps_X


@dataclass(frozen=True)
class RegressionFit:
    direction: Direction
    slope: float
    residuals: np.ndarray

    @property
    def n(self) -> int:
        return int(self.residuals.size)


def fit(sample: PairedSample, direction: Direction) -> RegressionFit:
    """Fit the intercept-free regression of one standardized variable on the other.

    ``Direction.FORWARD`` regresses y on x and returns the slope ``a`` with
    residuals ``eps_Y = y - a x``; ``Direction.REVERSE`` swaps the roles.
    Both series must already be standardized; with standardized inputs both
    slopes equal the sample correlation.
    """
    direction = Direction(direction)
    if sample.n < MIN_LENGTH:
        raise InsufficientSample(f"need at least {MIN_LENGTH} observations, got {sample.n}")
    for name, values in (("x", sample.x), ("y", sample.y)):
        if not is_standardized(values):
            raise NotStandardized(f"{name} is not standardized (mean 0, sample std 1)")
    if direction is Direction.FORWARD:
        regressor, response = sample.x, sample.y
    else:
        regressor, response = sample.y, sample.x
    slope = float(np.dot(regressor, response) / np.dot(regressor, regressor))
    residuals = response - slope * regressor
    residuals.setflags(write=False)
    return RegressionFit(direction, slope, residuals)


def fit_both(sample: PairedSample) -> tuple[RegressionFit, RegressionFit]:
    return fit(sample, Direction.FORWARD), fit(sample, Direction.REVERSE)
