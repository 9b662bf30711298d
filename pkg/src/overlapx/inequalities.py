"""Executable correlation inequalities, covering/matching, entropy and degree diagnostics.

The four correlation checkers return an :class:`IneqVerdict`; a ``holds=False``
verdict on valid input means a bug, and its witness reproduces the instance.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .coloring import Hypergraph
from .constructions import binom_le
from .errors import CapacityError, EmptyFamilyError, NotDownClosedError
from .family import (
    SetFamily,
    SubsetMask,
    _same_ground,
    avoiding,
    biased_measure,
    degree,
    down_closure,
    is_down_closed,
    join,
    max_cardinality_set,
    meet,
    meet_all,
)
from .overlap import OverlapSpec

JOIN_LIMIT = 1 << 20


@dataclass(frozen=True)
class IneqVerdict:
    holds: bool
    lhs: object
    rhs: object
    witness: object = None

    def __post_init__(self):
        assert self.holds == (self.lhs <= self.rhs)

    def __bool__(self) -> bool:
        return self.holds


def _verdict(lhs, rhs, witness) -> IneqVerdict:
    ok = lhs <= rhs
    return IneqVerdict(ok, lhs, rhs, None if ok else witness)


def check_harris_kleitman(a: SetFamily, b: SetFamily) -> IneqVerdict:
    """``|A| |B| <= 2^n |A & B|`` for down-closed ``A``, ``B``."""
    n = _same_ground(a, b)
    for name, f in (("a", a), ("b", b)):
        if not is_down_closed(f):
            raise NotDownClosedError(f"family {name} is not down-closed")
    both = len(a.lookup() & b.lookup())
    return _verdict(len(a) * len(b), (1 << n) * both, (a, b))


def check_daykin(a: SetFamily, b: SetFamily) -> IneqVerdict:
    """``|A| |B| <= |A v B| |A ^ B|`` for arbitrary families."""
    _same_ground(a, b)
    return _verdict(len(a) * len(b), len(join(a, b)) * len(meet(a, b)), (a, b))


def rinott_saks_terms(families: Sequence[SetFamily]) -> list[SetFamily]:
    """For ``k = 1..l`` the join over all k-subsets S of the meet over S."""
    _same_ground(*families)
    ell = len(families)
    if ell > 5:
        raise CapacityError("Rinott-Saks checks are limited to at most 5 families")
    terms = []
    for k in range(1, ell + 1):
        acc = None
        for sub in combinations(range(ell), k):
            piece = meet_all(families[i] for i in sub)
            acc = piece if acc is None else join(acc, piece)
            if len(acc) > JOIN_LIMIT:
                raise CapacityError("intermediate join too large")
        terms.append(acc)
    return terms


def check_rinott_saks(families: Sequence[SetFamily]) -> IneqVerdict:
    lhs = math.prod(len(f) for f in families)
    rhs = math.prod(len(t) for t in rinott_saks_terms(families))
    return _verdict(lhs, rhs, tuple(families))


def check_rinott_saks_biased(families: Sequence[SetFamily], p) -> IneqVerdict:
    """Same as :func:`check_rinott_saks` with every size replaced by ``mu_p``."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    lhs = math.prod((biased_measure(f, p) for f in families), start=Fraction(1))
    rhs = math.prod((biased_measure(t, p) for t in rinott_saks_terms(families)), start=Fraction(1))
    return _verdict(lhs, rhs, (tuple(families), p))


def frankl_bound(n: int, m: int) -> int:
    """``2^n * sum_{t <= m} C(n, t)``: the two-family maximum."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    return (1 << n) * binom_le(n, m)


# --- coverings and matchings ---------------------------------------------------

def maximal_matching(h: Hypergraph, order: Sequence | None = None) -> list[SubsetMask]:
    """Greedy matching: take each edge (in ``order``) that misses all taken ones."""
    edges = h.edges.bits if order is None else [e.bits if isinstance(e, SubsetMask) else e for e in order]
    used = 0
    out = []
    for e in edges:
        if e & used == 0:
            out.append(SubsetMask(h.n, e))
            used |= e
    return out


def min_cover(h: Hypergraph, max_vertices: int = 24) -> SubsetMask:
    """A minimum vertex cover, by branching on the first uncovered edge."""
    if h.vertices.cardinality() > max_vertices:
        raise CapacityError(f"exact cover limited to {max_vertices} vertices")
    edges = sorted(h.edges.bits, key=lambda e: (e.bit_count(), e))
    if edges and edges[0] == 0:
        raise ValueError("the empty edge cannot be covered")
    best = [h.vertices.bits if edges else 0]

    def rec(chosen: int, size: int) -> None:
        if size >= best[0].bit_count():
            return
        for e in edges:
            if e & chosen == 0:
                break
        else:
            best[0] = chosen
            return
        rest = e
        while rest:
            low = rest & -rest
            rest ^= low
            rec(chosen | low, size + 1)

    if edges:
        rec(0, 0)
    return SubsetMask(h.n, best[0])


def check_cover_matching(h: Hypergraph, t: int | None = None, orders: int = 10, seed: int = 0) -> IneqVerdict:
    """``|min cover| <= t * |M|`` for greedy maximal matchings ``M``.

    Tries the lexicographic order plus ``orders`` random orders; the verdict
    uses the smallest matching seen, which is the hardest case.
    """
    sizes = [e.bit_count() for e in h.edges.bits]
    if t is None:
        t = max(sizes, default=0)
    if any(s > t for s in sizes):
        raise ValueError(f"edge larger than t={t}")
    cover = min_cover(h).cardinality()
    rng = random.Random(seed)
    worst_len, worst_order = None, None
    candidates = [list(h.edges.bits)]
    for _ in range(orders):
        perm = list(h.edges.bits)
        rng.shuffle(perm)
        candidates.append(perm)
    for order in candidates:
        size = len(maximal_matching(h, order))
        if worst_len is None or size < worst_len:
            worst_len, worst_order = size, order
    return _verdict(cover, t * worst_len, (h, worst_order))


# --- entropy -------------------------------------------------------------------

def binary_entropy(p) -> float:
    p = float(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def cross_entropy(p: Sequence[float], q: Sequence[float]) -> float:
    """``-sum p_i log2 q_i`` for distributions on the same support."""
    if len(p) != len(q):
        raise ValueError("distributions have different supports")
    if any((pi > 0) != (qi > 0) for pi, qi in zip(p, q)):
        raise ValueError("distributions have different supports")
    return -sum(float(pi) * math.log2(float(qi)) for pi, qi in zip(p, q) if pi > 0)


def empirical_entropy(f: SetFamily) -> float:
    """Entropy in bits of a uniform draw from ``f``, i.e. ``log2 |f|``."""
    if not f.bits:
        raise EmptyFamilyError("entropy of the empty family")
    return math.log2(len(f))


def marginal_entropies(f: SetFamily) -> list[float]:
    """``h2(d(f, {i}))`` per coordinate; their sum bounds :func:`empirical_entropy`."""
    if not f.bits:
        raise EmptyFamilyError("entropy of the empty family")
    n = f.ground_size
    return [binary_entropy(degree(f, SubsetMask(n, 1 << i))) for i in range(n)]


# --- degrees and pruning -------------------------------------------------------

def degree_product(families: Sequence[SetFamily], spec: OverlapSpec, sets: Mapping[int, SubsetMask],
                   require_members: bool = True) -> tuple[Fraction, int]:
    """``prod_{k in K} d_k(F_k)`` and ``sum_{k < k' in K} |F_k & F_k'|``.

    ``sets`` maps family index (1-based) to ``F_k``. With ``require_members``
    each ``F_k`` must belong to ``F_k``'s family.
    """
    if len(families) != spec.ell:
        raise ValueError("spec arity does not match the number of families")
    value = Fraction(1)
    for k, s in sets.items():
        if require_members and s not in families[k - 1]:
            raise ValueError(f"set {s} is not a member of family {k}")
        value *= degree(families[k - 1], s)
    exponent = sum((sets[a].bits & sets[b].bits).bit_count() for a, b in combinations(sorted(sets), 2))
    return value, exponent


def two_support_exclusions(families: Sequence[SetFamily]) -> list[SubsetMask]:
    """``W_k``: elements for which family ``k`` is not among the two highest degrees."""
    if any(not f.bits for f in families):
        raise EmptyFamilyError("pruning needs nonempty families")
    n = _same_ground(*families)
    drop = [0] * len(families)
    for x in range(n):
        s = SubsetMask(n, 1 << x)
        ranked = sorted(range(len(families)), key=lambda k: (-degree(families[k], s), k))
        for k in ranked[2:]:
            drop[k] |= 1 << x
    return [SubsetMask(n, w) for w in drop]


def prune_two_supports(families: Sequence[SetFamily], spec: OverlapSpec | None = None) -> list[SetFamily]:
    """Keep only members avoiding ``W_k``, so every element survives in at most two families.

    Degree ties are broken toward the smaller family index.
    """
    if spec is not None and spec.ell != len(families):
        raise ValueError("spec arity does not match the number of families")
    return [avoiding(f, w) for f, w in zip(families, two_support_exclusions(families))]


def residual_set(families: Sequence[SetFamily]) -> SubsetMask:
    """``[n]`` minus the union of one maximum-cardinality member per family."""
    if any(not f.bits for f in families):
        raise EmptyFamilyError("residual set needs nonempty families")
    n = _same_ground(*families)
    covered = 0
    for f in families:
        covered |= max_cardinality_set(f).bits
    return SubsetMask(n, ((1 << n) - 1) & ~covered)


# --- fuzz harness --------------------------------------------------------------

def random_family(rng: random.Random, n: int, max_members: int = 24, density: float | None = None) -> SetFamily:
    size = rng.randint(1, max_members)
    p = rng.random() if density is None else density
    members = []
    for _ in range(size):
        bits = 0
        for i in range(n):
            if rng.random() < p:
                bits |= 1 << i
        members.append(bits)
    return SetFamily(n, members)


def random_downset(rng: random.Random, n: int, generators: int = 4) -> SetFamily:
    return down_closure(random_family(rng, n, max_members=generators))


def random_hypergraph(rng: random.Random, n_vertices: int, t: int, max_edges: int = 16) -> Hypergraph:
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        k = rng.randint(1, min(t, n_vertices))
        edges.append(rng.sample(range(1, n_vertices + 1), k))
    return Hypergraph.on(n_vertices, edges)


SUITES = ("harris_kleitman", "daykin", "rinott_saks", "rinott_saks_biased", "cover_matching")
BIASES = (Fraction(1, 4), Fraction(1, 3), Fraction(3, 4))


def _trial(suite: str, rng: random.Random, n_max: int, ell: int) -> IneqVerdict:
    n = rng.randint(1, n_max)
    if suite == "harris_kleitman":
        return check_harris_kleitman(random_downset(rng, n), random_downset(rng, n))
    if suite == "daykin":
        return check_daykin(random_family(rng, n), random_family(rng, n))
    if suite == "rinott_saks":
        return check_rinott_saks([random_family(rng, n, 12) for _ in range(ell)])
    if suite == "rinott_saks_biased":
        p = rng.choice(BIASES)
        return check_rinott_saks_biased([random_family(rng, n, 12) for _ in range(ell)], p)
    if suite == "cover_matching":
        return check_cover_matching(random_hypergraph(rng, n, 3), 3, seed=rng.randrange(1 << 30))
    raise ValueError(f"unknown suite {suite!r}")


def _fuzz_chunk(args):
    suite, start, stop, n_max, ell, seed = args
    failures, first = 0, None
    for i in range(start, stop):
        rng = random.Random(f"{seed}:{suite}:{i}")
        verdict = _trial(suite, rng, n_max, ell)
        if not verdict.holds:
            failures += 1
            if first is None:
                first = {"trial": i, "lhs": str(verdict.lhs), "rhs": str(verdict.rhs)}
    return failures, first


def fuzz(suite: str, trials: int, n_max: int, ell: int = 3, seed: int = 0, workers: int = 1) -> dict:
    """Run ``trials`` random instances of one suite.

    Trial ``i`` draws from its own seed derived from ``(seed, suite, i)``, so the
    summary is the same for any number of workers.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    chunks = max(1, min(workers, trials))
    bounds = [trials * j // chunks for j in range(chunks + 1)]
    tasks = [(suite, bounds[j], bounds[j + 1], n_max, ell, seed) for j in range(chunks)]
    if chunks > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fuzz_chunk, tasks))
    else:
        results = [_fuzz_chunk(tasks[0])]
    failures = sum(r[0] for r in results)
    first = next((r[1] for r in results if r[1] is not None), None)
    out = {"suite": suite, "trials": trials, "failures": failures}
    if first is not None:
        out["first_witness"] = first
    return out
