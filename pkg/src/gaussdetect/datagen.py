"""Seeded synthetic pairs ``Y = slope * X + eps`` with ``X`` standard normal."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import PairedSample

MIN_N = 20


class NoiseKind(str, Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    LAPLACE = "laplace"
    POISSON = "poisson"


# stable integer codes for seed derivation; never reorder
NOISE_CODES = {
    NoiseKind.GAUSSIAN: 0,
    NoiseKind.EXPONENTIAL: 1,
    NoiseKind.LAPLACE: 2,
    NoiseKind.POISSON: 3,
}


def sample_noise(kind: NoiseKind, n: int, rng: np.random.Generator, param: float = 1.0) -> np.ndarray:
    """Draw ``n`` centered noise values.

    ``param`` is the family's single parameter: standard deviation (Gaussian),
    rate (Exponential, Poisson) or scale (Laplace). Exponential and Poisson
    draws are shifted by their means so every family is zero-mean.
    """
    kind = NoiseKind(kind)
    if n < 1:
        raise ValueError("n must be positive")
    if param <= 0:
        raise ValueError("noise parameter must be positive")
    if kind is NoiseKind.GAUSSIAN:
        return rng.normal(0.0, param, n)
    if kind is NoiseKind.EXPONENTIAL:
        return rng.exponential(1.0 / param, n) - 1.0 / param
    if kind is NoiseKind.LAPLACE:
        return rng.laplace(0.0, param, n)
    return rng.poisson(param, n).astype(np.float64) - param


def derive_seed(master_seed: int, *key: int) -> int:
    """Deterministic 63-bit seed for the stream identified by ``key``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


@dataclass(frozen=True)
class GenSpec:
    n: int
    noise: NoiseKind
    seed: int
    slope: float = 2.0
    noise_param: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "noise", NoiseKind(self.noise))
        if self.n < MIN_N:
            raise ValueError(f"n must be at least {MIN_N}, got {self.n}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def generate(spec: GenSpec) -> PairedSample:
    x_seq, noise_seq = np.random.SeedSequence(spec.seed).spawn(2)
    x = np.random.default_rng(x_seq).standard_normal(spec.n)
    eps = sample_noise(spec.noise, spec.n, np.random.default_rng(noise_seq), spec.noise_param)
    return PairedSample(x, spec.slope * x + eps)
