"""Acceptance suite: the eight headline criteria at their stated sizes and tolerances.

Each test prints one ``[criterion N] PASS|FAIL`` line (visible even under
output capture) before asserting.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from permtrees.bijections import inverse_phi_321, phi_321
from permtrees.gw import GEOMETRIC_HALF, enumerate_trees, geometric_half_pmf, size_biased_pmf
from permtrees.infinite import SpineTree, extend_spine, phi_inf, stability_horizon
from permtrees.lab import (
    LARGE,
    limit_laws,
    limit_two_level,
    sample_laws,
    sample_two_level,
    tv_distance,
    tv_stderr,
    verify,
)
from permtrees.pattern_oracle import PATTERNS, catalan, pattern_name
from permtrees.tree_core import OrderedTree, count_at_height

N_LIST = (50, 200, 1000, 5000)
MC_COUNT = 100_000
K, CAP = 2, 30


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def profile_of(t: OrderedTree) -> tuple[int, ...]:
    return tuple(t.degrees[t.depths == 1].tolist())


def gap_with_sigma(p_hat: float, n_p: int, q_hat: float, n_q: int) -> tuple[float, float]:
    sigma = math.sqrt(p_hat * (1 - p_hat) / n_p + q_hat * (1 - q_hat) / n_q)
    return abs(p_hat - q_hat), sigma


def non_increasing(values, errors, slack: float = 2.0) -> bool:
    """Each step may rise by at most ``slack`` combined standard errors."""
    return all(b <= a + slack * math.hypot(ea, eb) for a, b, ea, eb in zip(values, values[1:], errors, errors[1:]))


# -- shared Monte Carlo data ---------------------------------------------------


@pytest.fixture(scope="module")
def finite_laws():
    return {n: sample_laws(PATTERNS, n, MC_COUNT, K, CAP, seed=1000 + n) for n in N_LIST}


@pytest.fixture(scope="module")
def limit_prefix_laws():
    return limit_laws(PATTERNS, MC_COUNT, K, CAP, seed=2000)


# -- exact criteria --------------------------------------------------------------


def test_criterion_1_bijection_suite(report):
    start = time.perf_counter()
    result = verify(9)
    elapsed = time.perf_counter() - start
    ok = result.passed and catalan(9) == 4862 and elapsed < 120
    failed = [f"{c.name}/{c.sigma}/n={c.n}" for c in result.failures()]
    report(1, ok, f"{len(result.checks)} checks, failures={failed}, C_9={catalan(9)}, {elapsed:.1f}s")


def test_criterion_2_round_trip_321(report):
    start = time.perf_counter()
    bad = 0
    total = 0
    for size in range(2, 11):
        for t in enumerate_trees(size):
            total += 1
            bad += inverse_phi_321(phi_321(t)) != t
    elapsed = time.perf_counter() - start
    report(2, bad == 0 and elapsed < 60, f"{total} trees, {bad} mismatches, {elapsed:.1f}s")


# -- spine tree laws ---------------------------------------------------------------


def test_criterion_3_root_degree_law(report):
    n = 1_000_000
    start = time.perf_counter()
    root = np.random.SeedSequence(3000)
    ks = np.fromiter((SpineTree(np.random.SeedSequence(root.entropy, spawn_key=(i,))).step(0).k for i in range(n)), int, n)
    elapsed = time.perf_counter() - start
    observed = np.bincount(np.minimum(ks, 12), minlength=13)[1:]
    probs = np.array([size_biased_pmf(GEOMETRIC_HALF, k) for k in range(1, 12)])
    expected = n * np.append(probs, 1 - probs.sum())  # last bin is k >= 12
    p_value = stats.chisquare(observed, expected).pvalue
    report(3, p_value > 0.01 and elapsed < 60, f"chi-square p={p_value:.3f} over k=1..11,>=12; {elapsed:.1f}s")


def two_level_targets(max_size: int) -> list[OrderedTree]:
    return [t for size in range(2, max_size + 1) for t in enumerate_trees(size) if t.height <= 2]


def exact_two_level(t0: OrderedTree) -> float:
    inner = t0.degrees[t0.depths < 2]
    return count_at_height(t0, 2) * float(np.prod([geometric_half_pmf(int(d)) for d in inner]))


def test_criterion_4_two_level_measure(report):
    n = 1_000_000
    counts = limit_two_level(n, seed=4000)
    worst = 0.0
    lines = []
    for t0 in two_level_targets(5):
        p = exact_two_level(t0)
        p_hat = counts[profile_of(t0)] / n
        se = math.sqrt(p * (1 - p) / n)
        z = abs(p_hat - p) / se if se else (0.0 if p_hat == 0 else math.inf)
        worst = max(worst, z)
        lines.append(f"{profile_of(t0)}:{z:.2f}")
    report(4, worst <= 4, f"max |z|={worst:.2f} over {len(lines)} trees ({' '.join(lines)})")


def test_criterion_5_local_limit_of_trees(report):
    limit = limit_two_level(MC_COUNT, seed=5000)
    finite = {n: sample_two_level(n, MC_COUNT, seed=5000 + n) for n in N_LIST}
    ok = True
    lines = []
    for t0 in (t for t in two_level_targets(4) if t.height >= 1):
        key = profile_of(t0)
        q = limit[key] / MC_COUNT
        gaps, sigmas = zip(*(gap_with_sigma(finite[n][key] / MC_COUNT, MC_COUNT, q, MC_COUNT) for n in N_LIST))
        good = non_increasing(gaps, sigmas) and gaps[-1] <= 4 * sigmas[-1]
        ok &= good
        lines.append(f"{key}:{'/'.join(f'{g:.4f}' for g in gaps)}{'' if good else '!'}")
    report(5, ok, "gaps along n=" + ",".join(map(str, N_LIST)) + "  " + "  ".join(lines))


# -- permutation level -------------------------------------------------------------


def test_criterion_6_prefix_convergence(report, finite_laws, limit_prefix_laws):
    ok = True
    lines = []
    for sigma in PATTERNS:
        limit = limit_prefix_laws[sigma]
        tvs = [tv_distance(finite_laws[n][sigma], limit) for n in N_LIST]
        ses = [tv_stderr(finite_laws[n][sigma], limit, seed=n) for n in N_LIST]
        good = non_increasing(tvs, ses) and tvs[-1] < 0.03
        ok &= good
        lines.append(f"{pattern_name(sigma)}:{'/'.join(f'{v:.4f}' for v in tvs)} (errors {limit.errors}){'' if good else '!'}")
    report(6, ok, "TV along n=" + ",".join(map(str, N_LIST)) + "  " + "  ".join(lines))


def test_criterion_7_degenerate_limits(report, finite_laws, limit_prefix_laws):
    ok = True
    lines = []
    for sigma in [(1, 2, 3), (1, 3, 2)]:
        limit = limit_prefix_laws[sigma]
        all_large = limit.counts == {(LARGE, LARGE): limit.total} and limit.errors == 0
        exact_inf = all(phi_inf(sigma, SpineTree(seed), k) == math.inf for seed in range(100) for k in range(1, 6))
        law = finite_laws[5000][sigma]
        above = sum(c for key, c in law.counts.items() if key[0] == LARGE) / law.total
        good = all_large and exact_inf and above >= 0.95
        ok &= good
        lines.append(f"{pattern_name(sigma)}: limit all-inf={all_large and exact_inf}, P(Pi_5000(1)>30)={above:.4f}")
    report(7, ok, "; ".join(lines))


def test_criterion_8_pointwise_continuity(report):
    mismatches = []
    evaluated = 0
    for seed in range(100):
        for sigma in PATTERNS:
            for k in range(1, 11):
                t = SpineTree(seed)
                m = stability_horizon(sigma, t, k)
                before = phi_inf(sigma, t, k)
                for _ in range(10):
                    extend_spine(t)
                after = phi_inf(sigma, t, k)
                # an independent copy grown eagerly first must agree as well
                fresh = SpineTree(seed)
                for _ in range(m + 10):
                    extend_spine(fresh)
                again = phi_inf(sigma, fresh, k)
                evaluated += 1
                if not before == after == again:
                    mismatches.append((seed, pattern_name(sigma), k, before, after, again))
    report(8, not mismatches, f"{evaluated} evaluations, mismatches={mismatches[:5]}")
