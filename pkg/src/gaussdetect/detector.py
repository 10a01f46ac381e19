"""Direction detection: the independence-only detector and the pairwise baseline.

Hypothesis labels follow the detector's step list: ``h10`` tests
``X independent of eps_Y`` (forward residual) and ``h20`` tests
``Y independent of eps_X`` (reverse residual).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .core import PairedSample, RegressionFit, fit_both, standardize_pair
from .errors import DegenerateSeries, InsufficientSample
from .stattests import (
    GaussianityTest,
    IndependenceTestConfig,
    TestDecision,
    gaussianity_test,
    independence_test,
)

MIN_N = 20
# residual spread on the standardized scale below which the fit is exact
COLLINEAR_TOL = 1e-10


class Verdict(str, Enum):
    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"
    GAUSSIAN_NOISE = "GaussianNoise"
    INCONCLUSIVE = "Inconclusive"


class Algorithm(str, Enum):
    GAUSS_DETECT = "GaussDetect"
    PAIRWISE_BASELINE = "PairwiseBaseline"


@dataclass(frozen=True)
class DirectionReport:
    verdict: Verdict
    h10: TestDecision | None
    h20: TestDecision | None
    tests_performed: int
    algorithm: Algorithm
    gaussianity: TestDecision | None = None

    def to_dict(self) -> dict:
        def brief(d):
            if d is None:
                return None
            return {"statistic": float(d.statistic), "p_value": float(d.p_value), "reject": d.reject}

        return {
            "verdict": self.verdict.value,
            "algorithm": self.algorithm.value,
            "h10": brief(self.h10),
            "h20": brief(self.h20),
            "gaussianity": brief(self.gaussianity),
            "tests_performed": self.tests_performed,
        }


def decide(h10_accept: bool, h20_accept: bool) -> Verdict:
    if h10_accept and not h20_accept:
        return Verdict.X_TO_Y
    if h20_accept and not h10_accept:
        return Verdict.Y_TO_X
    if h10_accept and h20_accept:
        return Verdict.GAUSSIAN_NOISE
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class _Prepared:
    sample: PairedSample  # standardized
    forward: RegressionFit
    reverse: RegressionFit


def _prepare(sample: PairedSample) -> _Prepared:
    if sample.n < MIN_N:
        raise InsufficientSample(f"direction detection needs n >= {MIN_N}, got {sample.n}")
    std = standardize_pair(sample)
    forward, reverse = fit_both(std)
    if np.ptp(forward.residuals) <= COLLINEAR_TOL:
        raise DegenerateSeries("residuals vanish: the two variables are exactly collinear")
    return _Prepared(std, forward, reverse)


def _substream_configs(cfg: IndependenceTestConfig):
    seq = np.random.SeedSequence(cfg.rng_seed)
    seeds = [int(s.generate_state(1, np.uint64)[0] >> np.uint64(1)) for s in seq.spawn(2)]
    return replace(cfg, rng_seed=seeds[0]), replace(cfg, rng_seed=seeds[1])


def _independence_pair(prep: _Prepared, cfg: IndependenceTestConfig):
    cfg10, cfg20 = _substream_configs(cfg)
    h10 = independence_test(prep.sample.x, prep.forward.residuals, cfg10)
    h20 = independence_test(prep.sample.y, prep.reverse.residuals, cfg20)
    return h10, h20


def _gauss_report(h10, h20) -> DirectionReport:
    return DirectionReport(
        verdict=decide(h10.accept, h20.accept),
        h10=h10,
        h20=h20,
        tests_performed=2,
        algorithm=Algorithm.GAUSS_DETECT,
    )


def _baseline_report(gt: TestDecision, pair) -> DirectionReport:
    if gt.accept:
        return DirectionReport(
            verdict=Verdict.GAUSSIAN_NOISE,
            h10=None,
            h20=None,
            tests_performed=1,
            algorithm=Algorithm.PAIRWISE_BASELINE,
            gaussianity=gt,
        )
    h10, h20 = pair()
    return DirectionReport(
        verdict=decide(h10.accept, h20.accept),
        h10=h10,
        h20=h20,
        tests_performed=3,
        algorithm=Algorithm.PAIRWISE_BASELINE,
        gaussianity=gt,
    )


def gauss_detect(sample: PairedSample, cfg: IndependenceTestConfig | None = None) -> DirectionReport:
    """Infer the causal direction using only the two residual independence tests.

    Both variables are standardized, the forward and reverse slope-only
    regressions are fitted, and HSIC tests ``X _|_ eps_Y`` and ``Y _|_ eps_X``
    on independent substreams of ``cfg.rng_seed``. Degenerate or too-short
    input raises instead of returning a verdict.
    """
    cfg = cfg or IndependenceTestConfig()
    prep = _prepare(sample)
    return _gauss_report(*_independence_pair(prep, cfg))


def pairwise_baseline(
    sample: PairedSample,
    it_cfg: IndependenceTestConfig | None = None,
    gt: GaussianityTest = GaussianityTest.JB,
    alpha: float = 0.05,
) -> DirectionReport:
    """Gaussianity-test-first baseline.

    The forward residual is tested for normality. If normality is not
    rejected the baseline stops with ``GaussianNoise`` after one test;
    otherwise both independence tests run (three tests in total).
    """
    it_cfg = it_cfg or IndependenceTestConfig()
    prep = _prepare(sample)
    decision = gaussianity_test(prep.forward.residuals, gt, alpha)
    return _baseline_report(decision, lambda: _independence_pair(prep, it_cfg))


def compare_algorithms(
    sample: PairedSample,
    it_cfg: IndependenceTestConfig | None = None,
    gt: GaussianityTest = GaussianityTest.JB,
    alpha: float = 0.05,
) -> tuple[DirectionReport, DirectionReport]:
    """Run both detectors on one sample, sharing the independence tests.

    Equivalent to calling :func:`gauss_detect` and :func:`pairwise_baseline`
    separately with the same configuration, at roughly half the cost.
    """
    it_cfg = it_cfg or IndependenceTestConfig()
    prep = _prepare(sample)
    pair = _independence_pair(prep, it_cfg)
    decision = gaussianity_test(prep.forward.residuals, gt, alpha)
    return _gauss_report(*pair), _baseline_report(decision, lambda: pair)
