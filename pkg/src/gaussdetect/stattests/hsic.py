"""HSIC independence testing with Gaussian kernels.

The statistic is the biased estimator ``trace(K H L H) / n**2`` where ``K`` and
``L`` are Gaussian Gram matrices and ``H`` is the centering matrix. Two nulls
are available: a permutation null (exhaustive when ``n!`` does not exceed the
permutation budget) and the moment-matched gamma approximation of Gretton et
al. (2008).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np
from scipy import stats
from scipy.spatial.distance import pdist

from ..core import as_series
from ..errors import DegenerateSeries, InsufficientSample, LengthMismatch
from .decision import TestDecision, TestKind

PERMUTATION_MIN_N = 8
GAMMA_MIN_N = 20
MIN_PERMUTATIONS = 100
# relative slack when comparing permuted statistics to the observed one
TIE_RTOL = 1e-12


class HsicMethod(str, Enum):
    PERMUTATION = "perm"
    GAMMA = "gamma"


class BandwidthRule(str, Enum):
    MEDIAN = "median"


@dataclass(frozen=True)
class IndependenceTestConfig:
    method: HsicMethod = HsicMethod.PERMUTATION
    permutations: int = 500
    bandwidth_rule: BandwidthRule = BandwidthRule.MEDIAN
    alpha: float = 0.05
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", HsicMethod(self.method))
        object.__setattr__(self, "bandwidth_rule", BandwidthRule(self.bandwidth_rule))
        if self.permutations < 1:
            raise ValueError("permutations must be positive")
        if self.method is HsicMethod.PERMUTATION and self.permutations < MIN_PERMUTATIONS:
            raise ValueError(f"permutation HSIC needs at least {MIN_PERMUTATIONS} permutations")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "permutations": self.permutations,
            "bandwidth_rule": self.bandwidth_rule.value,
            "alpha": self.alpha,
            "rng_seed": self.rng_seed,
        }


def median_heuristic_bandwidth(s) -> float:
    """Median of the nonzero pairwise absolute differences of ``s``."""
    s = as_series(s)
    if s.size < 3:
        raise InsufficientSample(f"need at least 3 values, got {s.size}")
    diffs = pdist(s[:, None], "cityblock")
    diffs = diffs[diffs > 0]
    if diffs.size == 0:
        raise DegenerateSeries("all pairwise differences are zero")
    return float(np.median(diffs))


def gaussian_gram(s: np.ndarray, sigma: float) -> np.ndarray:
    d = s[:, None] - s[None, :]
    return np.exp(-(d * d) / (2.0 * sigma * sigma))


def _center(k: np.ndarray) -> np.ndarray:
    return k - k.mean(axis=0)[None, :] - k.mean(axis=1)[:, None] + k.mean()


def _centered_grams(x, y, sigma_x, sigma_y):
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.size != y.size:
        raise LengthMismatch(f"x has {x.size} values but y has {y.size}")
    if x.size < 3:
        raise InsufficientSample(f"need at least 3 observations, got {x.size}")
    if sigma_x <= 0 or sigma_y <= 0:
        raise ValueError("kernel bandwidths must be positive")
    k = gaussian_gram(x, sigma_x)
    l = gaussian_gram(y, sigma_y)
    return k, l, _center(k), _center(l)


def hsic_statistic(x, y, sigma_x: float, sigma_y: float) -> float:
    """Biased HSIC estimate with Gaussian kernels of the given length scales."""
    _, _, kc, lc = _centered_grams(x, y, sigma_x, sigma_y)
    n = kc.shape[0]
    return max(float(np.sum(kc * lc)) / (n * n), 0.0)


@numba.njit(cache=True, fastmath=True)
def _permuted_cross_sums(kc, lc, perms):
    # sum_ij kc[i, j] * lc[p[i], p[j]] for each row p of perms, using symmetry
    b, n = perms.shape
    out = np.empty(b)
    for k in range(b):
        p = perms[k]
        total = 0.0
        for i in range(n):
            ki = kc[i]
            li = lc[p[i]]
            acc = 0.0
            for j in range(i + 1, n):
                acc += ki[j] * li[p[j]]
            total += 2.0 * acc + ki[i] * li[p[i]]
        out[k] = total
    return out


def _permutation_pvalue(kc, lc, permutations, seed):
    n = kc.shape[0]
    observed = _permuted_cross_sums(kc, lc, np.arange(n)[None, :])[0]
    threshold = observed - TIE_RTOL * abs(observed)
    if math.factorial(n) <= permutations:
        # exact: enumerate every permutation, identity included
        count = 0
        total = 0
        for chunk in _batched(itertools.permutations(range(n)), 4096):
            sums = _permuted_cross_sums(kc, lc, np.array(chunk, dtype=np.int64))
            count += int(np.count_nonzero(sums >= threshold))
            total += len(chunk)
        return count / total
    rng = np.random.default_rng(seed)
    count = 0
    remaining = permutations
    while remaining:
        size = min(remaining, 256)
        perms = np.array([rng.permutation(n) for _ in range(size)], dtype=np.int64)
        sums = _permuted_cross_sums(kc, lc, perms)
        count += int(np.count_nonzero(sums >= threshold))
        remaining -= size
    return (1 + count) / (1 + permutations)


def _batched(iterable, size):
    it = iter(iterable)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def _gamma_pvalue(k, l, kc, lc):
    """Upper tail of the moment-matched gamma null for ``n * HSIC``."""
    n = kc.shape[0]
    test_stat = float(np.sum(kc * lc)) / n
    var = (kc * lc / 6.0) ** 2
    var = (var.sum() - np.trace(var)) / n / (n - 1)
    var = var * 72.0 * (n - 4) * (n - 5) / n / (n - 1) / (n - 2) / (n - 3)
    mu_x = (k.sum() - np.trace(k)) / n / (n - 1)
    mu_y = (l.sum() - np.trace(l)) / n / (n - 1)
    mean = (1.0 + mu_x * mu_y - mu_x - mu_y) / n
    if not (var > 0 and mean > 0):
        raise DegenerateSeries("gamma approximation undefined: null moments are not positive")
    shape = mean * mean / var
    scale = var * n / mean
    return float(stats.gamma.sf(test_stat, shape, scale=scale))


def independence_test(x, y, cfg: IndependenceTestConfig | None = None) -> TestDecision:
    """Test ``H0: x independent of y`` with HSIC.

    Bandwidths come from the median heuristic on the original series and stay
    fixed across permutations; the permutation null shuffles ``y``.

    Parameters
    ----------
    x, y : array_like
        Paired observations of equal length.
    cfg : IndependenceTestConfig, optional
        Null approximation, permutation budget, level and seed.

    Returns
    -------
    TestDecision
        ``statistic`` is the biased HSIC estimate (divided by ``n**2``).
    """
    cfg = cfg or IndependenceTestConfig()
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.size != y.size:
        raise LengthMismatch(f"x has {x.size} values but y has {y.size}")
    n = x.size
    if cfg.method is HsicMethod.GAMMA:
        if n < GAMMA_MIN_N:
            raise InsufficientSample(f"gamma HSIC needs n >= {GAMMA_MIN_N}, got {n}")
    elif n < PERMUTATION_MIN_N and math.factorial(max(n, 0)) > cfg.permutations:
        raise InsufficientSample(f"permutation HSIC needs n >= {PERMUTATION_MIN_N}, got {n}")
    elif n < 3:
        raise InsufficientSample(f"need at least 3 observations, got {n}")

    sigma_x = median_heuristic_bandwidth(x)
    sigma_y = median_heuristic_bandwidth(y)
    k, l, kc, lc = _centered_grams(x, y, sigma_x, sigma_y)
    statistic = max(float(np.sum(kc * lc)) / (n * n), 0.0)
    if cfg.method is HsicMethod.GAMMA:
        p_value = _gamma_pvalue(k, l, kc, lc)
    else:
        p_value = _permutation_pvalue(kc, lc, cfg.permutations, cfg.rng_seed)
    p_value = min(max(p_value, 0.0), 1.0)
    return TestDecision(TestKind.INDEPENDENCE, statistic, p_value, cfg.alpha)
