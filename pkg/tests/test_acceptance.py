"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (printed in the terminal summary)
before asserting. Tolerances below are fixed targets; none of them
is tuned to what the implementation happens to achieve.
"""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
from scipy import stats

from conftest import ACCEPTANCE_LINES
from planted import analytics, exact
from planted.graph import Graph, num_pairs
from planted.harness import estimate_risk, sample_collisions, y_samples
from planted.samplers import ModelParams, SeededRng, sample_structure_batch

SEED = 20240601
ORACLE_CELLS = [(n, kind, p) for n in (4, 6) for kind in ("matching", "tree")
                for p in (Fraction(1, 10), Fraction(1, 4))]


def report(number: int, title: str, passed: bool, detail: str):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} | {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert passed, line


def test_c01_collision_pmf_formula_vs_brute():
    start = time.perf_counter()
    mismatches = []
    for n in (4, 6, 8, 10):
        formula = {k: v for k, v in analytics.collision_pmf_matching_table(n).items() if v}
        if formula != exact.brute_collision_pmf(n, "matching"):
            mismatches.append(n)
    elapsed = time.perf_counter() - start
    report(1, "matching collision pmf, formula == brute force", not mismatches and elapsed < 10,
           f"n in 4,6,8,10; mismatches={mismatches}; {elapsed:.1f}s (limit 10s)")


def test_c02_collision_formula_matches_oracle_chi2():
    start = time.perf_counter()
    bad = []
    for n, kind, p in ORACLE_CELLS:
        params = ModelParams(n, kind, p)
        mgf = analytics.CollisionMgf.from_pmf(exact.brute_collision_pmf(n, kind))
        via = analytics.second_moment_via_collisions(params, 2, mgf) - 1
        if not isinstance(via, Fraction) or via != exact.exact_divergences(params).chi2:
            bad.append((n, kind, str(p)))
    elapsed = time.perf_counter() - start
    report(2, "second moment via collisions - 1 == exact chi-square", not bad and elapsed < 120,
           f"{len(ORACLE_CELLS)} cells; mismatches={bad}; {elapsed:.1f}s (limit 120s)")


def test_c03_likelihood_normalization():
    start = time.perf_counter()
    bad = []
    for n in (4, 6):
        for kind in ("matching", "tree"):
            for p in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
                total = exact.likelihood_moment(ModelParams(n, kind, p), 1)
                if total != 1:
                    bad.append((n, kind, str(p), str(total)))
    elapsed = time.perf_counter() - start
    report(3, "sum_G Q(G) L(G) == 1", not bad and elapsed < 120,
           f"n in 4,6 x both models x p in 1/10,1/4,1/2; failures={bad}; {elapsed:.1f}s")


def test_c04_optimal_risk_and_cauchy_schwarz():
    bad = []
    for n, kind, p in ORACLE_CELLS:
        r = exact.exact_divergences(ModelParams(n, kind, p))
        # tv <= sqrt(chi2)/2  <=>  4 tv^2 <= chi2, compared exactly
        if r.optimal_risk != 1 - r.tv or 4 * r.tv ** 2 > r.chi2:
            bad.append((n, kind, str(p)))
    report(4, "optimal_risk == 1 - tv and tv <= sqrt(chi2)/2", not bad,
           f"{len(ORACLE_CELLS)} cells; failures={bad}")


def _detectable(number: int, model: str):
    n = 4096
    start = time.perf_counter()
    rec = estimate_risk(n, n ** -0.75, model, "yvar", 200, SEED, engine="graph")
    elapsed = time.perf_counter() - start
    report(number, f"yvar risk <= 0.05, {model}, n=4096, p=n^-0.75",
           rec.risk <= 0.05 and elapsed < 60,
           f"risk={rec.risk:.3f} (fa={rec.false_alarm:.3f}, miss={rec.miss:.3f}, "
           f"+/-{rec.half_width:.3f}); {elapsed:.1f}s (limit 60s)")


def test_c05_detectable_matching():
    _detectable(5, "matching")


def test_c06_detectable_tree():
    _detectable(6, "tree")


def test_c07_mean_separation():
    n, trials = 4096, 2000
    gaps = {}
    for model in ("matching", "tree"):
        params = ModelParams(n, model, n ** -0.75)
        y_null = y_samples(params, 0, trials, SEED, engine="counts")
        y_planted = y_samples(params, 1, trials, SEED, engine="counts")
        gaps[model] = float(y_null.mean() - y_planted.mean())
    passed = all(0.20 <= g <= 0.30 for g in gaps.values())
    report(7, "E_Q[Y] - E_P[Y] in [0.20, 0.30], n=4096, p=n^-0.75", passed,
           ", ".join(f"{m}={g:.4f}" for m, g in gaps.items()) + f"; {trials} trials each")


def test_c08_undetectable_regime():
    n = 4096
    risks = {}
    for model in ("matching", "tree"):
        risks[model] = estimate_risk(n, 5 * n ** -0.5, model, "yvar", 200, SEED, engine="graph").risk
    report(8, "yvar risk >= 0.8, n=4096, p=5 n^-1/2", all(r >= 0.8 for r in risks.values()),
           ", ".join(f"{m}={r:.3f}" for m, r in risks.items()))


def test_c09_poisson_proximity():
    start = time.perf_counter()
    pairs = 100_000
    collisions = sample_collisions(2000, "matching", pairs, SEED)
    emp = np.bincount(collisions, minlength=11)[:11] / pairs
    pois = stats.poisson.pmf(np.arange(11), 0.5)
    tv = 0.5 * float(np.abs(emp - pois).sum())
    elapsed = time.perf_counter() - start
    report(9, "matching collisions at n=2000 within TV 0.02 of Poisson(1/2)",
           tv <= 0.02 and elapsed < 60, f"tv={tv:.5f} on 0..10; {elapsed:.1f}s (limit 60s)")


def test_c10_tree_mgf_bound_dominates():
    bad = []
    for n in (3, 4, 5):
        mgf = analytics.CollisionMgf.from_pmf(exact.brute_collision_pmf(n, "tree"))
        params = ModelParams(n, "tree", Fraction(1, 2))
        for s in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            if not mgf(s) <= analytics.tree_collision_mgf_bound(params, s):
                bad.append((n, str(s)))
    report(10, "binomial bound >= exact tree collision MGF", not bad,
           f"n in 3,4,5 x s in 1/4,1/2,3/4 (exact); violations={bad}")


def test_c11_sampler_uniformity():
    cases = [("matching", 4), ("matching", 6), ("tree", 3), ("tree", 4), ("tree", 5)]
    pvalues = {}
    for kind, n in cases:
        classes = exact.total_structures(n, kind)
        draws = 2000 * classes
        rows = sample_structure_batch(n, kind, draws, SeededRng(SEED, (11, n)).generator())
        masks = (np.left_shift(np.int64(1), rows)).sum(axis=1)
        _, counts = np.unique(masks, return_counts=True)
        observed = np.zeros(classes)
        observed[:len(counts)] = counts  # unseen classes count as zero
        pvalues[f"{kind}{n}"] = float(stats.chisquare(observed).pvalue)
    passed = all(pv >= 1e-3 for pv in pvalues.values())
    report(11, "chi-square uniformity at level 1e-3, 2000 draws per class", passed,
           ", ".join(f"{k}: p={v:.3g}" for k, v in pvalues.items()))


def test_c12_counting_oracles():
    rng = np.random.default_rng(SEED)
    bad = []
    for n, kind in ((6, "tree"), (8, "matching")):
        structures = exact.structure_masks(n, kind)
        for _ in range(100):
            density = rng.uniform(0.2, 0.9)
            g = Graph(n, rng.random(num_pairs(n)) < density)
            mask = g.to_mask()
            brute = sum(1 for h in structures if h & mask == h)
            if exact.count_structures(g, kind) != brute:
                bad.append((kind, mask))
    report(12, "matrix-tree and matching DP == exhaustive enumeration", not bad,
           f"100 random graphs each (trees n=6, matchings n=8); mismatches={len(bad)}")


def _sweep_csv(threads: int) -> bytes:
    cmd = [sys.executable, "-m", "planted", "risk-sweep", "--n-list", "64,128",
           "--p-expr", "n^-0.75,5*n^-0.5", "--model", "tree", "--trials", "40",
           "--seed", "99", "--threads", str(threads)]
    return subprocess.run(cmd, check=True, capture_output=True).stdout


def test_c13_reproducibility():
    first, second, threaded = _sweep_csv(1), _sweep_csv(1), _sweep_csv(8)
    same = first == second == threaded
    report(13, "risk-sweep CSV byte-identical across runs and threads 1/8", same and len(first) > 0,
           f"{len(first.splitlines())} lines, {len(first)} bytes")
