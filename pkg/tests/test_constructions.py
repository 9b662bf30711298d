import random
from fractions import Fraction
from math import comb, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from overlapx.constructions import (
    AllocationVector,
    PartitionLayout,
    asymptotic_value,
    binom_le,
    octopus_build,
    octopus_family_sizes,
    octopus_size,
    optimize_partition,
    proportional_allocation,
)
from overlapx.errors import CapacityError
from overlapx.family import SetFamily, is_down_closed
from overlapx.overlap import OverlapSpec, verify_overlap
from overlapx.search import daykin_chain_bound


def alloc(ell, m, counts):
    spec = OverlapSpec.uniform(ell, m) if isinstance(m, int) else OverlapSpec(ell, m)
    return AllocationVector(spec, counts)


@st.composite
def allocations(draw, n_max=10, ell_max=4, m_max=2):
    ell = draw(st.integers(2, ell_max))
    p = ell * (ell - 1) // 2
    ms = tuple(draw(st.lists(st.integers(0, m_max), min_size=p, max_size=p)))
    counts = tuple(draw(st.lists(st.integers(0, 4), min_size=p, max_size=p)))
    while sum(counts) > n_max:
        i = counts.index(max(counts))
        counts = counts[:i] + (counts[i] - 1,) + counts[i + 1:]
    return AllocationVector(OverlapSpec(ell, ms), counts)


def test_binom_le():
    assert binom_le(6, 1) == 7 and binom_le(6, 2) == 22
    assert binom_le(3, 5) == 8 and binom_le(0, 0) == 1
    for n in range(8):
        for t in range(10):
            assert binom_le(n, t) == oracles.binom_le(n, t)


class TestLayout:
    def test_consecutive_blocks(self):
        lay = PartitionLayout.from_allocation(alloc(3, 1, (2, 1, 3)))
        assert [b.elements() for b in lay.blocks] == [(1, 2), (3,), (4, 5, 6)]
        assert lay.center(1).elements() == (1, 2, 3)
        assert lay.center(2).elements() == (4, 5, 6)
        assert lay.center(3).elements() == ()

    def test_allocation_validation(self):
        with pytest.raises(ValueError):
            alloc(3, 1, (1, 2))
        with pytest.raises(ValueError):
            alloc(2, 1, (-1,))
        assert str(alloc(3, 1, (2, 2, 2))) == "n_S=2,2,2"


class TestOctopus:
    def test_two_families(self):
        f1, f2 = octopus_build(alloc(2, 1, (3,)))
        assert f1 == SetFamily.powerset(3) and f2 == SetFamily.up_to_size(3, 1)
        assert octopus_size(alloc(2, 1, (3,))) == 32

    def test_three_families(self):
        a = alloc(3, 1, (2, 2, 2))
        fams = octopus_build(a)
        assert [len(f) for f in fams] == [16, 12, 9]
        assert octopus_family_sizes(a) == [16, 12, 9]
        assert octopus_size(a) == 1728 == prod(len(f) for f in fams)
        assert verify_overlap(fams, a.spec) is True

    def test_zero_overlap(self):
        fams = octopus_build(alloc(2, 0, (4,)))
        assert fams[0] == SetFamily.powerset(4) and fams[1] == SetFamily(4, [()])
        assert octopus_size(alloc(2, 0, (4,))) == 16

    @pytest.mark.parametrize("n", range(0, 9))
    def test_frankl_size(self, n):
        assert octopus_size(alloc(2, 1, (n,))) == (n + 1) << n

    def test_all_zero_bounds(self):
        assert octopus_size(alloc(3, 0, (1, 2, 3))) == 64

    def test_build_cap(self):
        with pytest.raises(CapacityError):
            octopus_build(alloc(2, 1, (25,)))
        assert octopus_size(alloc(2, 1, (25,))) == 26 << 25

    @settings(max_examples=40, deadline=None)
    @given(allocations())
    def test_build_matches_size(self, a):
        fams = octopus_build(a)
        assert [len(f) for f in fams] == octopus_family_sizes(a)
        assert prod(len(f) for f in fams) == octopus_size(a)
        assert verify_overlap(fams, a.spec) is True
        assert all(is_down_closed(f) for f in fams)

    def test_against_set_oracle(self):
        a = alloc(3, (2, 1, 1), (2, 2, 1))
        fams = [oracles.as_sets(f) for f in octopus_build(a)]
        assert oracles.overlapping(fams, lambda k, k2: a.spec[k, k2])


class TestOptimize:
    @pytest.mark.parametrize("n,counts,value", [(6, (2, 2, 2), 27), (7, (2, 2, 3), 36)])
    def test_examples(self, n, counts, value):
        a, v = optimize_partition(n, OverlapSpec.uniform(3, 1))
        assert a.counts == counts and v == value
        # n=7: 4*3*3 beats the runners-up 32 and 30
        assert sorted(a.counts) == sorted(counts)

    def test_single_pair(self):
        for m in range(4):
            a, v = optimize_partition(9, OverlapSpec.uniform(2, m))
            assert a.counts == (9,) and v == binom_le(9, m)

    @pytest.mark.parametrize("ell,m", [(2, (1,)), (3, (1, 1, 1)), (3, (2, 1, 0)), (4, (1, 2, 1, 0, 2, 1))])
    def test_matches_exhaustion(self, ell, m):
        spec = OverlapSpec(ell, m)
        for n in range(0, 11):
            a, v = optimize_partition(n, spec)
            assert v == oracles.best_composition_value(n, m)
            assert sum(a.counts) == n and prod(binom_le(c, t) for c, t in zip(a.counts, m)) == v
            # lexicographically smallest optimal vector
            best = min(c for c in oracles.compositions(n, len(m))
                       if prod(binom_le(x, t) for x, t in zip(c, m)) == v)
            assert a.counts == best

    @given(st.integers(0, 40))
    def test_beats_proportional(self, n):
        spec = OverlapSpec.uniform(3, 1)
        _, v = optimize_partition(n, spec)
        assert v >= prod(binom_le(c, 1) for c in proportional_allocation(n, spec).counts)
        assert (v << n) <= daykin_chain_bound(n, spec)


class TestProportional:
    def test_examples(self):
        assert proportional_allocation(6, OverlapSpec.uniform(3, 1)).counts == (2, 2, 2)
        assert proportional_allocation(8, OverlapSpec(3, (2, 1, 1))).counts == (4, 2, 2)
        assert proportional_allocation(7, OverlapSpec.uniform(3, 1)).counts == (3, 2, 2)
        assert proportional_allocation(5, OverlapSpec.uniform(3, 0)).counts == (5, 0, 0)

    @given(st.integers(0, 50), st.lists(st.integers(0, 3), min_size=6, max_size=6))
    def test_sums_and_rounds(self, n, ms):
        spec = OverlapSpec(4, tuple(ms))
        counts = proportional_allocation(n, spec).counts
        assert sum(counts) == n
        if spec.sigma:
            for c, m in zip(counts, ms):
                assert abs(c - Fraction(m * n, spec.sigma)) < 1


class TestAsymptotic:
    def test_examples(self):
        assert asymptotic_value(10, OverlapSpec.uniform(2, 1)) == 10240
        assert asymptotic_value(30, OverlapSpec.uniform(3, 1)) == 1000 * 2 ** 30
        assert asymptotic_value(5, OverlapSpec.uniform(4, 0)) == 32
        assert asymptotic_value(6, OverlapSpec.uniform(3, 1)) == 512

    def test_rational(self):
        # n=7, l=3, m=1: 2^7 (7/3)^3
        assert asymptotic_value(7, OverlapSpec.uniform(3, 1)) == Fraction(128 * 343, 27)

    @pytest.mark.parametrize("n", range(30, 301, 30))
    def test_ratio_closed_form(self, n):
        spec = OverlapSpec.uniform(3, 1)
        _, v = optimize_partition(n, spec)
        ratio = Fraction(v << n) / asymptotic_value(n, spec)
        q = n // 3
        assert ratio == Fraction(q + 1, q) ** 3
        assert 1 < ratio <= 1 + Fraction(10, n)

    def test_general_m(self):
        # l=2, m=2: 2^n * (2n/2)^2 / 2
        assert asymptotic_value(8, OverlapSpec.uniform(2, 2)) == 256 * 32
        assert comb(8, 2) + 8 + 1 == binom_le(8, 2)
