"""Batch harness for the consistency-rate and tests-per-decision experiments.

Every batch is a freshly generated sample whose seeds derive from
``(master_seed, noise code, n, batch index)``, so a cell's numbers do not
depend on which other cells run or in what order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace

from .core import fit_both, standardize_pair
from .datagen import NOISE_CODES, GenSpec, NoiseKind, derive_seed, generate
from .detector import Algorithm, Verdict, compare_algorithms
from .errors import GaussDetectError
from .stattests import GaussianityTest, IndependenceTestConfig, gaussianity_test, independence_test

INVALID_EXCLUDED_FRACTION = 0.10
_DATA_STREAM = 0
_TEST_STREAM = 1


@dataclass(frozen=True)
class ExperimentConfig:
    sample_sizes: tuple[int, ...] = (400, 800, 1600)
    noise_kinds: tuple[NoiseKind, ...] = tuple(NoiseKind)
    batches: int = 100
    alpha: float = 0.05
    it_cfg: IndependenceTestConfig = field(default_factory=IndependenceTestConfig)
    gt: GaussianityTest = GaussianityTest.JB
    slope: float = 2.0
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "noise_kinds", tuple(NoiseKind(k) for k in self.noise_kinds))
        object.__setattr__(self, "gt", GaussianityTest(self.gt))
        if self.batches < 1:
            raise ValueError("batches must be positive")
        if not self.sample_sizes or min(self.sample_sizes) < 20:
            raise ValueError("sample sizes must be at least 20")
        if not self.noise_kinds:
            raise ValueError("at least one noise kind is required")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    def to_dict(self) -> dict:
        return {
            "sample_sizes": list(self.sample_sizes),
            "noise_kinds": [k.value for k in self.noise_kinds],
            "batches": self.batches,
            "alpha": self.alpha,
            "it_cfg": self.it_cfg.to_dict(),
            "gt": self.gt.value,
            "slope": self.slope,
            "master_seed": self.master_seed,
        }


def _batch_inputs(cfg: ExperimentConfig, noise: NoiseKind, n: int, batch: int):
    key = (NOISE_CODES[noise], n, batch)
    spec = GenSpec(n=n, noise=noise, seed=derive_seed(cfg.master_seed, *key, _DATA_STREAM), slope=cfg.slope)
    it_cfg = replace(cfg.it_cfg, alpha=cfg.alpha, rng_seed=derive_seed(cfg.master_seed, *key, _TEST_STREAM))
    return generate(spec), it_cfg


@dataclass(frozen=True)
class BatchConsistency:
    batch: int
    gt_phi: int
    it_phi: int

    @property
    def consistent(self) -> bool:
        return self.gt_phi == self.it_phi


@dataclass(frozen=True)
class ConsistencyCell:
    noise: NoiseKind
    n: int
    batches: int
    rows: tuple[BatchConsistency, ...]
    excluded: tuple[int, ...] = ()

    @property
    def consistency_rate(self) -> float:
        if not self.rows:
            return float("nan")
        return sum(r.consistent for r in self.rows) / len(self.rows)

    @property
    def invalid(self) -> bool:
        return len(self.excluded) > INVALID_EXCLUDED_FRACTION * self.batches


@dataclass(frozen=True)
class ConsistencyReport:
    config: ExperimentConfig
    cells: tuple[ConsistencyCell, ...]

    def cell(self, noise, n) -> ConsistencyCell:
        noise = NoiseKind(noise)
        return next(c for c in self.cells if c.noise is noise and c.n == n)

    @property
    def invalid_cells(self) -> list[ConsistencyCell]:
        return [c for c in self.cells if c.invalid]

    def rows(self) -> list[dict]:
        out = []
        for c in self.cells:
            out.append({"noise": c.noise.value, "n": c.n, "metric": "consistency_rate", "value": c.consistency_rate})
            out.append({"noise": c.noise.value, "n": c.n, "metric": "excluded_batches", "value": len(c.excluded)})
        return out

    def summary(self) -> dict:
        return {
            "experiment": "consistency",
            "config": self.config.to_dict(),
            "cells": [
                {
                    "noise": c.noise.value,
                    "n": c.n,
                    "consistency_rate": c.consistency_rate,
                    "evaluated_batches": len(c.rows),
                    "excluded_batches": list(c.excluded),
                    "invalid": c.invalid,
                }
                for c in self.cells
            ],
        }


def consistency_batch(cfg: ExperimentConfig, noise: NoiseKind, n: int, batch: int) -> BatchConsistency:
    """Gaussianity decision on the forward residual vs independence of Y and the reverse residual."""
    sample, it_cfg = _batch_inputs(cfg, noise, n, batch)
    std = standardize_pair(sample)
    forward, reverse = fit_both(std)
    gt = gaussianity_test(forward.residuals, cfg.gt, cfg.alpha)
    it = independence_test(std.y, reverse.residuals, it_cfg)
    return BatchConsistency(batch, gt.phi, it.phi)


def run_consistency(cfg: ExperimentConfig) -> ConsistencyReport:
    cells = []
    for noise in cfg.noise_kinds:
        for n in cfg.sample_sizes:
            rows, excluded = [], []
            for b in range(cfg.batches):
                try:
                    rows.append(consistency_batch(cfg, noise, n, b))
                except GaussDetectError:
                    excluded.append(b)
            cells.append(ConsistencyCell(noise, n, cfg.batches, tuple(rows), tuple(excluded)))
    return ConsistencyReport(cfg, tuple(cells))


@dataclass(frozen=True)
class TpdCell:
    noise: NoiseKind
    n: int
    algorithm: Algorithm
    batches: int
    tests: tuple[int, ...]
    verdicts: dict
    excluded: tuple[int, ...] = ()

    @property
    def mean_tpd(self) -> float:
        if not self.tests:
            return float("nan")
        return sum(self.tests) / len(self.tests)

    @property
    def invalid(self) -> bool:
        return len(self.excluded) > INVALID_EXCLUDED_FRACTION * self.batches

    def verdict_rate(self, verdict: Verdict) -> float:
        evaluated = len(self.tests)
        return self.verdicts[Verdict(verdict)] / evaluated if evaluated else float("nan")


@dataclass(frozen=True)
class TpdReport:
    config: ExperimentConfig
    cells: tuple[TpdCell, ...]

    def cell(self, noise, n, algorithm) -> TpdCell:
        noise, algorithm = NoiseKind(noise), Algorithm(algorithm)
        return next(c for c in self.cells if c.noise is noise and c.n == n and c.algorithm is algorithm)

    @property
    def invalid_cells(self) -> list[TpdCell]:
        return [c for c in self.cells if c.invalid]

    def rows(self) -> list[dict]:
        out = []
        for c in self.cells:
            base = {"noise": c.noise.value, "n": c.n, "algorithm": c.algorithm.value}
            out.append({**base, "metric": "mean_tpd", "value": c.mean_tpd})
            for v in Verdict:
                out.append({**base, "metric": f"verdict_{v.value}", "value": c.verdicts[v]})
            out.append({**base, "metric": "excluded_batches", "value": len(c.excluded)})
        return out

    def summary(self) -> dict:
        return {
            "experiment": "tpd",
            "config": self.config.to_dict(),
            "cells": [
                {
                    "noise": c.noise.value,
                    "n": c.n,
                    "algorithm": c.algorithm.value,
                    "mean_tpd": c.mean_tpd,
                    "verdicts": {v.value: c.verdicts[v] for v in Verdict},
                    "evaluated_batches": len(c.tests),
                    "excluded_batches": list(c.excluded),
                    "invalid": c.invalid,
                }
                for c in self.cells
            ],
        }


def run_tpd(cfg: ExperimentConfig) -> TpdReport:
    """Both algorithms on the same per-batch samples; average tests per decision."""
    cells = []
    for noise in cfg.noise_kinds:
        for n in cfg.sample_sizes:
            tests = {a: [] for a in Algorithm}
            verdicts = {a: Counter({v: 0 for v in Verdict}) for a in Algorithm}
            excluded = []
            for b in range(cfg.batches):
                sample, it_cfg = _batch_inputs(cfg, noise, n, b)
                try:
                    reports = compare_algorithms(sample, it_cfg, cfg.gt, cfg.alpha)
                except GaussDetectError:
                    excluded.append(b)
                    continue
                for report in reports:
                    tests[report.algorithm].append(report.tests_performed)
                    verdicts[report.algorithm][report.verdict] += 1
            for a in Algorithm:
                cells.append(
                    TpdCell(noise, n, a, cfg.batches, tuple(tests[a]), dict(verdicts[a]), tuple(excluded))
                )
    return TpdReport(cfg, tuple(cells))


__all__ = [
    "BatchConsistency",
    "ConsistencyCell",
    "ConsistencyReport",
    "ExperimentConfig",
    "TpdCell",
    "TpdReport",
    "consistency_batch",
    "run_consistency",
    "run_tpd",
]
