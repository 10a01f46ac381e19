"""Composite-normality tests: Jarque-Bera and Anderson-Darling."""

from __future__ import annotations

from enum import Enum

import numpy as np
from scipy import stats

from ..core import as_series
from ..errors import DegenerateSeries, InsufficientSample
from .decision import TestDecision, TestKind

JB_MIN_N = 20
AD_MIN_N = 8


class GaussianityTest(str, Enum):
    JB = "jb"
    AD = "ad"


def _central_moments(s: np.ndarray):
    d = s - s.mean()
    m2 = float(np.mean(d**2))
    if m2 == 0.0 or np.ptp(s) == 0.0:
        raise DegenerateSeries("series has zero variance")
    return m2, float(np.mean(d**3)), float(np.mean(d**4))


def jarque_bera_statistic(s) -> float:
    """``(n/6) * (S**2 + (K - 3)**2 / 4)`` from n-denominator central moments."""
    s = as_series(s)
    if s.size < 3:
        raise InsufficientSample(f"need at least 3 values, got {s.size}")
    m2, m3, m4 = _central_moments(s)
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    return s.size / 6.0 * (skew**2 + (kurt - 3.0) ** 2 / 4.0)


def jarque_bera_test(s, alpha: float = 0.05) -> TestDecision:
    """Jarque-Bera test with the asymptotic chi-square(2) null.

    Requires ``n >= 20``; below that the chi-square reference is unreliable.
    """
    s = as_series(s)
    if s.size < JB_MIN_N:
        raise InsufficientSample(f"Jarque-Bera needs n >= {JB_MIN_N}, got {s.size}")
    statistic = jarque_bera_statistic(s)
    p_value = float(stats.chi2.sf(statistic, df=2))
    return TestDecision(TestKind.GAUSSIANITY, statistic, p_value, alpha)


def anderson_darling_statistic(s) -> float:
    """Unadjusted A^2 against the normal with estimated mean and sample std."""
    s = as_series(s)
    n = s.size
    if n < 3:
        raise InsufficientSample(f"need at least 3 values, got {n}")
    if np.ptp(s) == 0.0:
        raise DegenerateSeries("series has zero variance")
    z = np.sort((s - s.mean()) / np.std(s, ddof=1))
    i = np.arange(1, n + 1)
    # log survival of the reversed order statistics keeps the upper tail accurate
    terms = (2 * i - 1) * (stats.norm.logcdf(z) + stats.norm.logsf(z[::-1]))
    return float(-n - terms.sum() / n)


def stephens_normal_pvalue(a2_adjusted: float) -> float:
    """Stephens' piecewise p-value for the adjusted A*^2 (mean and variance unknown)."""
    a = a2_adjusted
    if a >= 0.6:
        p = np.exp(1.2937 - 5.709 * a + 0.0186 * a**2)
    elif a >= 0.34:
        p = np.exp(0.9177 - 4.279 * a - 1.38 * a**2)
    elif a >= 0.2:
        p = 1.0 - np.exp(-8.318 + 42.796 * a - 59.938 * a**2)
    else:
        p = 1.0 - np.exp(-13.436 + 101.14 * a - 223.73 * a**2)
    return float(min(max(p, 0.0), 1.0))


def anderson_darling_test(s, alpha: float = 0.05) -> TestDecision:
    """Anderson-Darling normality test, small-sample adjusted.

    The reported statistic is ``A*^2 = A^2 (1 + 0.75/n + 2.25/n^2)``.
    """
    s = as_series(s)
    n = s.size
    if n < AD_MIN_N:
        raise InsufficientSample(f"Anderson-Darling needs n >= {AD_MIN_N}, got {n}")
    adjusted = anderson_darling_statistic(s) * (1.0 + 0.75 / n + 2.25 / n**2)
    return TestDecision(TestKind.GAUSSIANITY, adjusted, stephens_normal_pvalue(adjusted), alpha)


def gaussianity_test(s, kind: GaussianityTest = GaussianityTest.JB, alpha: float = 0.05) -> TestDecision:
    kind = GaussianityTest(kind)
    if kind is GaussianityTest.JB:
        return jarque_bera_test(s, alpha)
    return anderson_darling_test(s, alpha)
