"""Acceptance criteria, one test per criterion.

Run alone with ``pytest -m acceptance -s``. The permutation-null runs at
n = 1600 dominate the runtime (several minutes on one core).
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from gaussdetect import cli
from gaussdetect.core import fit_both, standardize_pair
from gaussdetect.datagen import GenSpec, NoiseKind, generate
from gaussdetect.detector import Algorithm, Verdict
from gaussdetect.experiments import ExperimentConfig, run_consistency, run_tpd
from gaussdetect.stattests import (
    IndependenceTestConfig,
    anderson_darling_test,
    hsic_statistic,
    independence_test,
    jarque_bera_test,
    median_heuristic_bandwidth,
)

pytestmark = pytest.mark.acceptance

PERM_300 = IndependenceTestConfig(permutations=300)
NON_GAUSSIAN = (NoiseKind.EXPONENTIAL, NoiseKind.LAPLACE, NoiseKind.POISSON)


def test_1_consistency_rate(record):
    cfg = ExperimentConfig(
        sample_sizes=(1600,),
        noise_kinds=(NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL),
        batches=100,
        alpha=0.05,
        it_cfg=PERM_300,
        master_seed=1,
    )
    start = time.perf_counter()
    report = run_consistency(cfg)
    elapsed = time.perf_counter() - start
    rates = {c.noise.value: c.consistency_rate for c in report.cells}
    ok = all(r >= 0.90 for r in rates.values()) and not report.invalid_cells
    record("1 consistency >= 0.90 (perm B=300, n=1600)", ok, f"{rates}, runtime {elapsed:.0f}s")
    assert ok


def test_2_tests_per_decision(record):
    # mean TPD does not depend on the independence-test null, so the gamma null keeps this fast
    cfg = ExperimentConfig(it_cfg=IndependenceTestConfig(method="gamma"), master_seed=2)
    report = run_tpd(cfg)
    gauss = [c for c in report.cells if c.algorithm is Algorithm.GAUSS_DETECT]
    base = [c for c in report.cells if c.algorithm is Algorithm.PAIRWISE_BASELINE and c.noise in NON_GAUSSIAN]
    ok = all(c.mean_tpd == 2.0 for c in gauss) and all(c.mean_tpd > 2.0 for c in base)
    ok = ok and len(gauss) == 12 and len(base) == 9 and not report.invalid_cells
    detail = ", ".join(f"{c.noise.value}/{c.n}={c.mean_tpd:.2f}" for c in base)
    record("2 TPD GaussDetect == 2 everywhere, baseline > 2 non-Gaussian", ok, f"baseline {detail}")
    assert ok


@pytest.fixture(scope="module")
def direction_report():
    cfg = ExperimentConfig(
        sample_sizes=(400, 1600),
        noise_kinds=(NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL, NoiseKind.GAUSSIAN),
        batches=100,
        it_cfg=PERM_300,
        master_seed=3,
    )
    return run_tpd(cfg)


def test_3_direction_recovery(record, direction_report):
    floors = {1600: 0.90, 400: 0.70}
    rates = {}
    for noise in (NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL):
        for n, floor in floors.items():
            cell = direction_report.cell(noise, n, Algorithm.GAUSS_DETECT)
            rates[(noise.value, n)] = cell.verdict_rate(Verdict.X_TO_Y)
    ok = all(r >= floors[n] for (_, n), r in rates.items())
    record("3 XtoY rate (>=0.90 @1600, >=0.70 @400, perm B=300)", ok, str(rates))
    assert ok


def test_4_gaussian_abstention(record, direction_report):
    rate = direction_report.cell(NoiseKind.GAUSSIAN, 1600, Algorithm.GAUSS_DETECT).verdict_rate(Verdict.GAUSSIAN_NOISE)
    ok = rate >= 0.80
    record("4 GaussianNoise rate >= 0.80 (Gaussian noise, n=1600)", ok, f"{rate:.2f}")
    assert ok


def _rejection_rate(test, trials=500):
    return sum(test(t) for t in range(trials)) / trials


def test_5_calibration(record):
    rng = np.random.default_rng(55)
    pairs = [(rng.standard_normal(100), rng.standard_normal(100)) for _ in range(500)]
    hsic = _rejection_rate(
        lambda t: independence_test(*pairs[t], IndependenceTestConfig(permutations=500, rng_seed=t)).reject
    )
    rng = np.random.default_rng(56)
    jb = _rejection_rate(lambda t: jarque_bera_test(rng.standard_normal(1000)).reject)
    ad = _rejection_rate(lambda t: anderson_darling_test(rng.standard_normal(400)).reject)
    ok = 0.03 <= hsic <= 0.07 and 0.02 <= jb <= 0.09 and 0.02 <= ad <= 0.09
    record("5 H0 rejection rates (HSIC [.03,.07], JB/AD [.02,.09])", ok, f"HSIC {hsic:.3f}, JB {jb:.3f}, AD {ad:.3f}")
    assert ok


def _naive_hsic(x, y, sx, sy):
    n = len(x)
    k = [[math.exp(-((x[i] - x[j]) ** 2) / (2 * sx * sx)) for j in range(n)] for i in range(n)]
    l = [[math.exp(-((y[i] - y[j]) ** 2) / (2 * sy * sy)) for j in range(n)] for i in range(n)]

    def centered(m):
        row = [sum(r) / n for r in m]
        col = [sum(m[i][j] for i in range(n)) / n for j in range(n)]
        tot = sum(row) / n
        return [[m[i][j] - row[i] - col[j] + tot for j in range(n)] for i in range(n)]

    kc, lc = centered(k), centered(l)
    return sum(kc[i][j] * lc[i][j] for i in range(n) for j in range(n)) / (n * n)


def test_6_exact_oracles(record):
    rng = np.random.default_rng(6)
    x = rng.standard_normal(7)
    y = x * np.abs(x) + 0.5 * rng.standard_normal(7)
    sx, sy = median_heuristic_bandwidth(x), median_heuristic_bandwidth(y)
    observed = _naive_hsic(list(x), list(y), sx, sy)
    perm_stats = [_naive_hsic(list(x), [y[i] for i in p], sx, sy) for p in itertools.permutations(range(7))]
    exact_p = sum(s >= observed * (1 - 1e-12) for s in perm_stats) / 5040
    p = independence_test(x, y, IndependenceTestConfig(permutations=5040)).p_value

    x8 = rng.standard_normal(8)
    y8 = np.exp(x8) + 0.3 * rng.standard_normal(8)
    s8x, s8y = median_heuristic_bandwidth(x8), median_heuristic_bandwidth(y8)
    diff = abs(hsic_statistic(x8, y8, s8x, s8y) - _naive_hsic(list(x8), list(y8), s8x, s8y))

    ok = p == exact_p and diff <= 1e-12
    record("6 exhaustive p-value (n=7) and naive HSIC (n=8, 1e-12)", ok, f"p={p:.6f} vs {exact_p:.6f}, |diff|={diff:.1e}")
    assert ok


def test_7_transform_identity(record):
    worst = 0.0
    for kind in NoiseKind:
        for seed in range(5):
            s = standardize_pair(generate(GenSpec(n=500, noise=kind, seed=seed)))
            fwd, rev = fit_both(s)
            a, b = fwd.slope, rev.slope
            worst = max(worst, np.max(np.abs(rev.residuals - ((1 - b * a) * s.x - b * fwd.residuals))))
    ok = worst <= 1e-10
    record("7 eps_X == (1 - b a) x - b eps_Y, all noise kinds (1e-10)", ok, f"max |err| {worst:.1e}")
    assert ok


def _run_quiet(argv, capsys):
    status = cli.main([str(a) for a in argv])
    out, _ = capsys.readouterr()
    return status, out


def test_8_determinism(record, tmp_path, capsys):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        files = {}
        _run_quiet(["simulate", "--n", 400, "--noise", "laplace", "--seed", 1, "--out", d / "sim.csv"], capsys)
        files["simulate"] = (d / "sim.csv").read_bytes()
        _, out = _run_quiet(["detect", d / "sim.csv", "--seed", 4, "--permutations", 200], capsys)
        files["detect"] = out.encode()
        bench = ["--sizes", "100", "--noise", "laplace,poisson", "--batches", 10, "--permutations", 100, "--seed", 9]
        for kind in ("consistency", "tpd"):
            _run_quiet(["bench", kind, *bench, "--out", d], capsys)
            files[f"bench {kind}"] = (d / f"{kind}.csv").read_bytes() + (d / f"{kind}.json").read_bytes()
        outputs.append(files)
    same = {k: outputs[0][k] == outputs[1][k] for k in outputs[0]}
    ok = all(same.values()) and json.loads(outputs[0]["detect"])["verdict"] in {v.value for v in Verdict}
    record("8 byte-identical outputs across two runs", ok, str(same))
    assert ok
