"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import random
import time
from fractions import Fraction
from itertools import combinations
from math import comb, prod

import pytest

import conftest
import oracles
from overlapx.constructions import (
    AllocationVector,
    asymptotic_value,
    binom_le,
    octopus_build,
    octopus_size,
    optimize_partition,
)
from overlapx.family import meet_all, support
from overlapx.inequalities import fuzz, prune_two_supports
from overlapx.overlap import OverlapSpec, maximal_completion, verify_overlap
from overlapx.search import daykin_chain_bound, exact_search, family_bruteforce, local_search

GRID = [(n, ell, m) for n in range(1, 6) for ell in (2, 3) for m in range(0, 3)]


def report(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_01_closed_form():
    cases = [(n, 1, (n + 1) << n) for n in (2, 3, 4, 5)]
    cases += [(n, 2, (1 << n) * (1 + n + comb(n, 2))) for n in (3, 4, 5)]
    bad, slowest = [], 0.0
    for n, m, want in cases:
        t0 = time.perf_counter()
        r = exact_search(n, 2, m)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if not (r.exact and r.optimum == want and dt < 10):
            bad.append((n, m, r.optimum, want, round(dt, 2)))
    report(1, not bad, f"{len(cases)} instances, slowest {slowest:.2f}s, mismatches {bad}")


def test_02_formulation_equivalence():
    t0 = time.perf_counter()
    bad = []
    for n, ell, m in [(2, 2, 1), (3, 2, 1), (3, 3, 1), (4, 2, 1), (4, 3, 1)]:
        a = family_bruteforce(n, ell, OverlapSpec.uniform(ell, m)).optimum
        b = exact_search(n, ell, m).optimum
        if a != b:
            bad.append((n, ell, m, a, b))
    dt = time.perf_counter() - t0
    report(2, not bad and dt < 60, f"5 instances in {dt:.2f}s, mismatches {bad}")


def test_03_construction_identity():
    rng = random.Random(2024)
    bad = []
    for _ in range(50):
        ell = rng.randint(2, 4)
        p = ell * (ell - 1) // 2
        spec = OverlapSpec(ell, tuple(rng.randint(0, 2) for _ in range(p)))
        n = rng.randint(0, 12)
        cuts = sorted(rng.randint(0, n) for _ in range(p - 1))
        counts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        alloc = AllocationVector(spec, tuple(counts))
        fams = octopus_build(alloc)
        if prod(len(f) for f in fams) != octopus_size(alloc) or verify_overlap(fams, spec) is not True:
            bad.append(str(alloc))
    report(3, not bad, f"50 random allocations, failures {bad}")


def test_04_allocation_optimality():
    rng = random.Random(7)
    specs = [OverlapSpec.uniform(2, m) for m in range(4)]
    specs += [OverlapSpec.uniform(3, 1), OverlapSpec.uniform(3, 2), OverlapSpec(3, (2, 1, 0))]
    specs += [OverlapSpec.uniform(4, 1), OverlapSpec(4, (2, 1, 1, 0, 2, 1))]
    specs += [OverlapSpec(ell, tuple(rng.randint(0, 3) for _ in range(ell * (ell - 1) // 2)))
              for ell in (3, 4) for _ in range(2)]
    bad, checked = [], 0
    for spec in specs:
        for n in range(0, 21):
            _, value = optimize_partition(n, spec)
            checked += 1
            if value != oracles.best_composition_value(n, spec.values):
                bad.append((str(spec), n))
    report(4, not bad, f"{checked} (spec, n) pairs against full composition exhaustion, mismatches {bad}")


def test_05_asymptotic_consistency():
    spec = OverlapSpec.uniform(3, 1)
    bad = []
    for n in range(30, 301, 30):
        _, value = optimize_partition(n, spec)
        ratio = Fraction(value << n) / asymptotic_value(n, spec)
        q = n // 3
        if ratio != Fraction(q + 1, q) ** 3 or not 1 < ratio <= 1 + Fraction(10, n):
            bad.append(n)
    report(5, not bad, f"n = 30..300 step 30, ratio = ((n/3+1)/(n/3))^3 exactly; failures {bad}")


def test_06_inequality_suites():
    t0 = time.perf_counter()
    runs = [fuzz("harris_kleitman", 10_000, 10), fuzz("daykin", 10_000, 10),
            fuzz("rinott_saks", 10_000, 8, ell=3), fuzz("rinott_saks_biased", 10_000, 8, ell=3)]
    dt = time.perf_counter() - t0
    failures = {r["suite"]: r["failures"] for r in runs}
    report(6, not any(failures.values()) and dt < 120, f"4 x 10^4 trials in {dt:.1f}s, failures {failures}")


@pytest.fixture(scope="module")
def grid_values():
    out = {}
    for n, ell, m in GRID:
        spec = OverlapSpec.uniform(ell, m)
        out[n, ell, m] = {
            "octopus": optimize_partition(n, spec)[1] << n,
            "local": local_search(n, ell, m, seed=0, iterations=300).optimum,
            "exact": exact_search(n, ell, m),
            "daykin": daykin_chain_bound(n, spec),
        }
    return out


def test_07_bound_sandwich(grid_values):
    bad = []
    for key, v in grid_values.items():
        ex = v["exact"]
        if not (ex.exact and v["octopus"] <= v["local"] <= ex.optimum <= v["daykin"]):
            bad.append((key, v["octopus"], v["local"], ex.optimum, v["daykin"]))
    report(7, not bad, f"{len(GRID)} grid instances (n<=5, l<=3, m<=2), violations {bad}")


def test_08_pruning_admissibility(grid_values):
    bad = []
    for (n, ell, m), v in grid_values.items():
        plain = exact_search(n, ell, m, prune=False, symmetry=False)
        reference = oracles.plain_max_product(n, ell, m)
        if not (plain.exact and v["exact"].optimum == plain.optimum == reference):
            bad.append(((n, ell, m), v["exact"].optimum, plain.optimum, reference))
    report(8, not bad, f"{len(GRID)} grid instances, pruned = unpruned = set oracle; mismatches {bad}")


def test_09_cover_matching():
    r = fuzz("cover_matching", 1000, 12)
    report(9, r["failures"] == 0, f"10^3 hypergraphs, |V|<=12, edge size<=3, failures {r['failures']}")


def test_10_two_support_pruning():
    spec = OverlapSpec.uniform(3, 1)
    bad, losses = [], []
    for n in (6, 9, 12):
        alloc, _ = optimize_partition(n, spec)
        fams = maximal_completion(octopus_build(alloc), spec)
        out = prune_two_supports(fams, spec)
        supports = [support(f).bits for f in out]
        per_element = max(sum(s >> x & 1 for s in supports) for x in range(n))
        triple = meet_all(out).sets()
        if per_element > 2 or triple != [()]:
            bad.append(n)
        before = prod(len(f) for f in fams)
        after = prod(len(f) for f in out)
        losses.append(f"n={n}: {after}/{before}={after / before:.4f}")
        for combo in combinations(range(3), 3):
            if meet_all([out[i] for i in combo]).sets() != [()]:
                bad.append((n, combo))
    report(10, not bad, f"size retained {'; '.join(losses)}; failures {bad}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
