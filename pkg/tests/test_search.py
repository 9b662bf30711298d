from math import comb

import pytest

import oracles
from overlapx.coloring import clique_product, count_monochromatic
from overlapx.constructions import optimize_partition
from overlapx.errors import CapacityError
from overlapx.family import is_down_closed
from overlapx.inequalities import frankl_bound
from overlapx.overlap import OverlapSpec, verify_overlap
from overlapx.search import (
    SearchReport,
    daykin_chain_bound,
    enumerate_downsets,
    exact_search,
    family_bruteforce,
    improving_moves,
    local_search,
    octopus_seed,
)

# maximum clique-count product over all 3-colorings of K4, by plain enumeration
V431 = 400


class TestExact:
    @pytest.mark.parametrize("n,ell,m,value", [(2, 2, 1, 12), (4, 2, 1, 80), (4, 3, 1, V431)])
    def test_examples(self, n, ell, m, value):
        r = exact_search(n, ell, m)
        assert r.exact and r.optimum == value
        assert clique_product(r.witness) == value

    def test_v431_oracle(self):
        assert oracles.plain_max_product(4, 3, 1) == V431

    @pytest.mark.parametrize("n,ell,m", [(3, 2, 1), (3, 3, 1), (3, 2, 0), (4, 2, 2), (3, 3, 2), (4, 2, 0)])
    def test_matches_oracle(self, n, ell, m):
        assert exact_search(n, ell, m).optimum == oracles.plain_max_product(n, ell, m)

    @pytest.mark.parametrize("n,ell,m", [(4, 3, 1), (4, 2, 1), (4, 3, 2), (3, 3, 0)])
    def test_pruning_and_symmetry_preserve_value(self, n, ell, m):
        base = exact_search(n, ell, m, prune=False, symmetry=False)
        for prune in (False, True):
            for sym in (False, True):
                r = exact_search(n, ell, m, prune=prune, symmetry=sym)
                assert r.optimum == base.optimum
        assert exact_search(n, ell, m).nodes_visited <= base.nodes_visited

    def test_frankl_values(self):
        for n in range(2, 6):
            assert exact_search(n, 2, 1).optimum == (n + 1) << n == frankl_bound(n, 1)

    def test_no_edges(self):
        r = exact_search(2, 3, 2)
        assert r.optimum == 4 ** 3 and r.exact

    def test_budget(self):
        r = exact_search(5, 3, 1, node_budget=50)
        assert not r.exact
        assert r.optimum >= 2 ** 5 * 6 ** 2  # at least the constant coloring
        assert clique_product(r.witness) == r.optimum

    def test_workers(self):
        # 10 subsets, enough to split across processes
        a = exact_search(5, 2, 1)
        b = exact_search(5, 2, 1, workers=2)
        assert a.optimum == b.optimum == 192
        assert exact_search(5, 2, 1, workers=2).nodes_visited == b.nodes_visited

    def test_bound_used(self):
        r = exact_search(4, 3, 1)
        assert r.bound_used == daykin_chain_bound(4, OverlapSpec.uniform(3, 1))
        assert r.optimum <= r.bound_used


class TestReport:
    def test_to_dict(self):
        r = exact_search(2, 2, 1)
        d = r.to_dict(timing=False)
        assert d["optimum"] == "12" and d["wall_time"] == "0" and d["exact"] is True
        assert d["witness"].startswith("n=2 m=1 l=2")
        assert set(d) >= {"optimum", "witness", "nodes_visited", "bound_used", "wall_time", "exact"}

    def test_empty_witness(self):
        assert SearchReport(3).witness_text() == ""


class TestDownsets:
    @pytest.mark.parametrize("n,count", [(0, 2), (1, 3), (2, 6), (3, 20), (4, 168)])
    def test_dedekind(self, n, count):
        assert len(enumerate_downsets(n)) == count

    def test_members_down_closed(self):
        for fam in enumerate_downsets(3):
            members = {s for s in range(8) if fam >> s & 1}
            assert all(s & ~(1 << i) in members for s in members for i in range(3) if s >> i & 1)


class TestBruteforce:
    @pytest.mark.parametrize("n,ell,m,value", [
        (3, 2, 1, 32), (3, 2, 0, 8), (4, 3, 1, V431), (2, 2, 1, 12), (4, 2, 1, 80), (3, 3, 1, 128),
    ])
    def test_examples(self, n, ell, m, value):
        r = family_bruteforce(n, ell, OverlapSpec.uniform(ell, m))
        assert r.optimum == value
        assert verify_overlap(r.witness, OverlapSpec.uniform(ell, m)) is True
        assert all(is_down_closed(f) for f in r.witness)
        size = 1
        for f in r.witness:
            size *= len(f)
        assert size == value

    def test_nonuniform(self):
        spec = OverlapSpec(3, (1, 0, 0))
        r = family_bruteforce(3, 3, spec)
        assert verify_overlap(r.witness, spec) is True
        # both zero pairs force disjoint support for family 3; checked against the set oracle
        best = 0
        from itertools import product as cart
        downs = [{frozenset(x for x in range(1, 4) if s >> (x - 1) & 1) for s in range(8) if fam >> s & 1}
                 for fam in enumerate_downsets(3)]
        for a, b, c in cart(downs, repeat=3):
            if oracles.overlapping([a, b, c], lambda k, k2: spec[k, k2]):
                best = max(best, len(a) * len(b) * len(c))
        assert r.optimum == best

    def test_limits(self):
        with pytest.raises(CapacityError):
            family_bruteforce(5, 2, 1)
        with pytest.raises(CapacityError):
            family_bruteforce(4, 4, 1)


class TestDaykinChain:
    def test_examples(self):
        assert daykin_chain_bound(6, OverlapSpec.uniform(3, 1)) == 64 * 7 * 22 == 9856
        assert daykin_chain_bound(7, OverlapSpec.uniform(4, 0)) == 128
        for n in range(1, 8):
            for m in range(0, min(n, 3) + 1):
                assert daykin_chain_bound(n, OverlapSpec.uniform(2, m)) == frankl_bound(n, m)

    def test_order_minimum(self):
        spec = OverlapSpec(3, (3, 0, 0))
        given_order = daykin_chain_bound(6, spec, all_orders=False)
        assert given_order == 64 * (1 + 6 + 15 + 20) * 1
        assert daykin_chain_bound(6, spec) <= given_order
        # order (3,1,2): factors binom(6,<=0) then binom(6,<=0+3)
        assert daykin_chain_bound(6, spec) == 64 * 1 * 42


class TestLocal:
    def test_dominates_octopus(self):
        r = local_search(6, 3, 1, seed=3, iterations=300)
        assert r.optimum >= 1728 and not r.exact
        assert clique_product(r.witness) == r.optimum
        assert r.extra["seed_value"] == 1728

    def test_zero_iterations(self):
        coloring, _ = octopus_seed(6, 3, 1)
        r = local_search(6, 3, 1, seed=9, iterations=0)
        assert r.optimum == clique_product(coloring)
        assert r.witness == coloring

    def test_deterministic(self):
        a = local_search(6, 3, 1, seed=4, iterations=200)
        b = local_search(6, 3, 1, seed=4, iterations=200)
        assert a.optimum == b.optimum and a.witness == b.witness

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_two_families_are_optimal(self, n):
        r = local_search(n, 2, 1, seed=1, iterations=100)
        assert r.optimum == (n + 1) << n
        assert improving_moves(r.witness) == []

    def test_octopus_value_is_seed_floor(self):
        for n in range(2, 8):
            coloring, octo = octopus_seed(n, 3, 1)
            assert octo == optimize_partition(n, OverlapSpec.uniform(3, 1))[1] << n
            assert clique_product(coloring) >= octo
