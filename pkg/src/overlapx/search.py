"""Exact and heuristic computation of the maximum product s*(n, l, m).

Two independent exact routes are provided:

* :func:`exact_search` colors the (m+1)-subsets one by one (depth first, in
  lexicographic order) and prunes with a wildcard relaxation: every still
  uncolored subset counts as available to all colors at once. Adding color
  options never lowers a clique count, so the relaxed product bounds every
  completion from above.
* :func:`family_bruteforce` enumerates all downsets of ``2^[n]`` and maximizes
  over compatible tuples directly.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from math import prod
from typing import Sequence

import numpy as np

from .coloring import (
    Coloring,
    _links,
    _walk_cliques,
    coloring_from_families,
    count_cliques,
    format_coloring,
    hyperedges,
)
from .constructions import binom_le, octopus_build, optimize_partition, octopus_size
from .errors import CapacityError
from .family import SetFamily, format_family
from .overlap import OverlapSpec, maximal_completion

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass
class SearchReport:
    optimum: int
    witness: object = None
    nodes_visited: int = 0
    bound_used: int = 0
    wall_time: float = 0.0
    exact: bool = True
    extra: dict = field(default_factory=dict)

    def witness_text(self) -> str:
        if isinstance(self.witness, Coloring):
            return format_coloring(self.witness)
        if self.witness is None:
            return ""
        return "\n".join(format_family(f) for f in self.witness)

    def to_dict(self, timing: bool = True) -> dict:
        """Flat mapping; numbers are decimal strings, wall time in seconds."""
        out = {
            "optimum": str(self.optimum),
            "witness": self.witness_text(),
            "nodes_visited": str(self.nodes_visited),
            "bound_used": str(self.bound_used),
            "wall_time": f"{self.wall_time:.6f}" if timing else "0",
            "exact": self.exact,
        }
        out.update({k: str(v) for k, v in self.extra.items()})
        return out


def daykin_chain_bound(n: int, spec: OverlapSpec, all_orders: bool | None = None) -> int:
    """``2^n * prod_k binom(n, <= sum_{k' <= k} m_{k', k+1})``, minimized over family orders.

    Every order gives a valid upper bound. All ``ell!`` orders are tried when
    ``ell <= 5`` (or when ``all_orders`` is set); otherwise only the given one.
    """
    if all_orders is None:
        all_orders = spec.ell <= 5
    orders = permutations(range(1, spec.ell + 1)) if all_orders else [tuple(range(1, spec.ell + 1))]
    best = None
    for order in orders:
        value = 1 << n
        for k in range(1, spec.ell):
            t = sum(spec[order[j], order[k]] for j in range(k))
            value *= binom_le(n, t)
        if best is None or value < best:
            best = value
    return best


class _BudgetExceeded(Exception):
    pass


class _ColoringDFS:
    """Depth-first coloring search with per-color link tables kept incrementally."""

    def __init__(self, n, ell, m, prune, budget, incumbent, witness):
        self.n, self.ell, self.m = n, ell, m
        self.edges = hyperedges(n, m)
        self.prune = prune
        self.budget = budget
        self.nodes = 0
        self.best = incumbent
        self.best_colors = witness
        full = _links(self.edges)
        self.links = [dict(full) for _ in range(ell)]
        self.assign: list[int] = []

    def _counts(self) -> list[int]:
        return [_walk_cliques(self.n, self.m, link) for link in self.links]

    def _set(self, e: int, color: int, on: bool) -> None:
        # remove (on=True) or restore edge e in every color table but `color`
        for k, link in enumerate(self.links):
            if k == color:
                continue
            rest = e
            while rest:
                low = rest & -rest
                t = e ^ low
                if on:
                    link[t] &= ~low
                else:
                    link[t] |= low
                rest ^= low

    def run(self, prefix: Sequence[int]) -> None:
        for i, c in enumerate(prefix):
            self._set(self.edges[i], c, True)
            self.assign.append(c)
        self._dfs(len(prefix))

    def _dfs(self, depth: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExceeded
        if depth == len(self.edges) or self.prune:
            value = prod(self._counts())
            if depth == len(self.edges):
                if value > self.best:
                    self.best = value
                    self.best_colors = tuple(c + 1 for c in self.assign)
                return
            if value <= self.best:
                return
        e = self.edges[depth]
        for c in range(self.ell):
            self._set(e, c, True)
            self.assign.append(c)
            self._dfs(depth + 1)
            self.assign.pop()
            self._set(e, c, False)


def _explore(args):
    n, ell, m, prune, budget, incumbent, witness, prefix = args
    dfs = _ColoringDFS(n, ell, m, prune, budget, incumbent, witness)
    try:
        dfs.run(prefix)
        done = True
    except _BudgetExceeded:
        done = False
    return dfs.best, dfs.best_colors, dfs.nodes, done


def exact_search(n: int, ell: int, m: int, node_budget: int = DEFAULT_NODE_BUDGET,
                 prune: bool = True, symmetry: bool = True, workers: int = 1) -> SearchReport:
    """Maximum of ``prod_k k_i`` over all ``ell``-colorings of the (m+1)-subsets of ``[n]``.

    ``symmetry`` fixes the first subset to color 1 (colors are interchangeable).
    With ``workers > 1`` independent subtrees run in separate processes; each
    starts from the same incumbent, so the result and node count do not
    depend on scheduling; instances with fewer than 8 subsets always run
    in-process. On budget exhaustion the best coloring found so far
    is returned with ``exact=False``.
    """
    t0 = time.perf_counter()
    edges = hyperedges(n, m)
    start = Coloring.constant(n, m, ell)
    incumbent = prod(count_cliques(n, m, start.class_edges(k)) for k in range(1, ell + 1))
    witness = start.colors
    bound = min(daykin_chain_bound(n, OverlapSpec.uniform(ell, m)), (1 << n) ** ell)

    first = [(0,)] if symmetry and edges else [()]
    prefixes = list(first)
    if len(edges) < 8:
        workers = 1  # process start-up dwarfs the search
    if workers > 1:
        while len(prefixes) < 4 * workers and len(prefixes[0]) < len(edges):
            prefixes = [p + (c,) for p in prefixes for c in range(ell)]
    tasks = [(n, ell, m, prune, node_budget, incumbent, witness, p) for p in prefixes]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_explore, tasks))
    else:
        results = []
        spent = 0
        for task in tasks:
            task = task[:4] + (node_budget - spent,) + task[5:]
            results.append(_explore(task))
            spent += results[-1][2]
            if not results[-1][3]:
                break
    best, colors, nodes, exact = incumbent, witness, 0, True
    for value, cols, visited, done in results:
        nodes += visited
        exact &= done
        if value > best:
            best, colors = value, cols
    exact &= nodes <= node_budget
    return SearchReport(best, Coloring(n, m, ell, colors), nodes, bound,
                        time.perf_counter() - t0, exact)


# --- downset route -------------------------------------------------------------

def enumerate_downsets(n: int) -> list[int]:
    """All down-closed families of ``2^[n]`` as membership bit vectors over masks.

    Bit ``S`` of a returned integer is set iff subset ``S`` is in the family.
    Masks are decided in increasing order, so all immediate subsets of ``S``
    are settled before ``S`` itself.
    """
    if n > 5:
        raise CapacityError("downset enumeration is limited to n <= 5")
    size = 1 << n
    subs = [[s & ~(1 << i) for i in range(n) if s >> i & 1] for s in range(size)]
    out = []

    def rec(s: int, fam: int) -> None:
        if s == size:
            out.append(fam)
            return
        rec(s + 1, fam)
        if all(fam >> t & 1 for t in subs[s]):
            rec(s + 1, fam | (1 << s))

    rec(0, 0)
    return out


def family_bruteforce(n: int, ell: int, spec: OverlapSpec | int | None = None) -> SearchReport:
    """Maximum product over all ``ell``-tuples of downsets of ``2^[n]`` that are m-overlapping.

    Supports non-uniform bounds. Restricting to downsets loses nothing: the
    down-closure of an m-overlapping tuple is still m-overlapping.
    """
    t0 = time.perf_counter()
    if spec is None or isinstance(spec, int):
        spec = OverlapSpec.uniform(ell, 1 if spec is None else spec)
    if spec.ell != ell:
        raise ValueError("spec arity does not match ell")
    if n > 4 or (n == 4 and ell > 3) or (n == 3 and ell > 4):
        raise CapacityError("family brute force needs n <= 4 and ell <= 3 (ell <= 4 at n = 3)")
    downs = enumerate_downsets(n)
    size = 1 << n
    member = np.array([[fam >> s & 1 for s in range(size)] for fam in downs], dtype=np.int64)
    sizes = member.sum(axis=1)
    universe = np.arange(size, dtype=np.uint64)
    overlap = np.bitwise_count(universe[:, None] & universe[None, :]).astype(np.int64)
    compat = {}
    for t in set(spec.values):
        clash = member @ (overlap > t).astype(np.int64) @ member.T
        compat[t] = clash == 0
    ok = {}
    for (k, k2), t in spec.items():
        ok[k, k2] = compat[t]

    best = [-1, None]
    nodes = 0

    def rec(chosen: list[int], allowed: list[np.ndarray], value: int) -> None:
        nonlocal nodes
        k = len(chosen) + 1
        if k == ell:
            cand = allowed[0]
            nodes += 1
            if not cand.any():
                return
            scores = np.where(cand, sizes, -1)
            j = int(np.argmax(scores))
            total = value * int(sizes[j])
            if total > best[0]:
                best[0], best[1] = total, chosen + [j]
            return
        for i in np.flatnonzero(allowed[0]):
            i = int(i)
            nodes += 1
            nxt = []
            for idx, k3 in enumerate(range(k + 1, ell + 1)):
                nxt.append(allowed[idx + 1] & ok[k, k3][i])
            rec(chosen + [i], nxt, value * int(sizes[i]))

    everything = np.ones(len(downs), dtype=bool)
    rec([], [everything] * ell, 1)
    witness = [SetFamily._trusted(n, [s for s in range(size) if downs[i] >> s & 1]) for i in best[1]]
    return SearchReport(best[0], witness, nodes, daykin_chain_bound(n, spec),
                        time.perf_counter() - t0, True, {"downsets": len(downs)})


# --- heuristic -----------------------------------------------------------------

def octopus_seed(n: int, ell: int, m: int) -> tuple[Coloring, int]:
    """Coloring induced by the completed best octopus, and the raw octopus value."""
    spec = OverlapSpec.uniform(ell, m)
    alloc, _ = optimize_partition(n, spec)
    families = maximal_completion(octopus_build(alloc), spec)
    return coloring_from_families(families, m), octopus_size(alloc)


def local_search(n: int, ell: int, m: int, seed: int = 0, iterations: int = 1000) -> SearchReport:
    """Hill climbing over single-subset recolorings, from the octopus seed.

    Only strict improvements are accepted; the proposal sequence is drawn
    from ``random.Random(seed)``.
    """
    t0 = time.perf_counter()
    coloring, octo = octopus_seed(n, ell, m)
    edges = coloring.edges
    colors = list(coloring.colors)
    classes = [set(e for e, c in zip(edges, colors) if c == k) for k in range(1, ell + 1)]
    counts = [count_cliques(n, m, cls) for cls in classes]
    best = prod(counts)
    rng = random.Random(seed)
    accepted = 0
    for _ in range(iterations if edges else 0):
        i = rng.randrange(len(edges))
        old = colors[i] - 1
        new = rng.randrange(ell - 1)
        new += new >= old
        e = edges[i]
        classes[old].discard(e)
        classes[new].add(e)
        c_old = count_cliques(n, m, classes[old])
        c_new = count_cliques(n, m, classes[new])
        trial = best // (counts[old] * counts[new]) * c_old * c_new
        if trial > best:
            best = trial
            counts[old], counts[new] = c_old, c_new
            colors[i] = new + 1
            accepted += 1
        else:
            classes[new].discard(e)
            classes[old].add(e)
    return SearchReport(best, Coloring(n, m, ell, tuple(colors)), iterations if edges else 0,
                        daykin_chain_bound(n, OverlapSpec.uniform(ell, m)),
                        time.perf_counter() - t0, False,
                        {"seed_value": octo, "accepted_moves": accepted})


def improving_moves(c: Coloring) -> list[tuple[int, int]]:
    """All single recolorings ``(edge index, color)`` that strictly raise the product."""
    base = prod(count_cliques(c.n, c.m, c.class_edges(k)) for k in range(1, c.ell + 1))
    out = []
    for i in range(len(c.edges)):
        for new in range(1, c.ell + 1):
            if new == c.colors[i]:
                continue
            d = c.recolored(i, new)
            value = prod(count_cliques(d.n, d.m, d.class_edges(k)) for k in range(1, d.ell + 1))
            if value > base:
                out.append((i, new))
    return out
