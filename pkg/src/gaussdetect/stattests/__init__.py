"""Kernel independence tests and Gaussianity tests."""

from .decision import TestDecision, TestKind
from .hsic import (
    BandwidthRule,
    HsicMethod,
    IndependenceTestConfig,
    gaussian_gram,
    hsic_statistic,
    independence_test,
    median_heuristic_bandwidth,
)
from .normality import (
    GaussianityTest,
    anderson_darling_statistic,
    anderson_darling_test,
    gaussianity_test,
    jarque_bera_statistic,
    jarque_bera_test,
    stephens_normal_pvalue,
)

__all__ = [
    "BandwidthRule",
    "GaussianityTest",
    "HsicMethod",
    "IndependenceTestConfig",
    "TestDecision",
    "TestKind",
    "anderson_darling_statistic",
    "anderson_darling_test",
    "gaussian_gram",
    "gaussianity_test",
    "hsic_statistic",
    "independence_test",
    "jarque_bera_statistic",
    "jarque_bera_test",
    "median_heuristic_bandwidth",
    "stephens_normal_pvalue",
]
