"""Colorings of the complete (m+1)-uniform hypergraph and monochromatic cliques.

For a uniform bound ``m``, a maximal m-overlapping tuple is the same object as
an ``ell``-coloring of all ``(m+1)``-subsets of ``[n]``: family ``k`` is the set
of color-``k`` cliques. Sets of size at most ``m`` are cliques in every color.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import CapacityError, FormatError, NotMaximalError
from .family import SetFamily, SubsetMask, bits_to_elements, elements_to_bits
from .overlap import OverlapSpec

MAX_ENUM_N = 24


def hyperedges(n: int, m: int) -> list[int]:
    """Masks of all ``(m+1)``-subsets of ``[n]`` in lexicographic element order."""
    return [sum(1 << i for i in combo) for combo in combinations(range(n), m + 1)]


@dataclass(frozen=True)
class Coloring:
    """A total ``ell``-coloring of the ``(m+1)``-subsets of ``[n]``.

    ``colors[i]`` is the color (1..ell) of ``hyperedges(n, m)[i]``.
    """

    n: int
    m: int
    ell: int
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.n < 0 or self.m < 0 or self.ell < 1:
            raise ValueError("need n >= 0, m >= 0, ell >= 1")
        if len(self.colors) != len(self.edges):
            raise ValueError(f"expected {len(self.edges)} colors, got {len(self.colors)}")
        if any(not 1 <= c <= self.ell for c in self.colors):
            raise ValueError(f"colors must lie in 1..{self.ell}")

    @classmethod
    def constant(cls, n: int, m: int, ell: int, color: int = 1) -> "Coloring":
        return cls(n, m, ell, (color,) * len(hyperedges(n, m)))

    @classmethod
    def from_mapping(cls, n: int, m: int, ell: int, mapping: Mapping, default: int = 1) -> "Coloring":
        """Build from ``{edge: color}``; edges as masks or element tuples."""
        by_mask = {}
        for e, c in mapping.items():
            by_mask[e if isinstance(e, int) else elements_to_bits(e, n)] = c
        return cls(n, m, ell, tuple(by_mask.get(e, default) for e in hyperedges(n, m)))

    @cached_property
    def edges(self) -> list[int]:
        return hyperedges(self.n, self.m)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def color_of(self, edge) -> int:
        e = edge.bits if isinstance(edge, SubsetMask) else edge
        if not isinstance(e, int):
            e = elements_to_bits(e, self.n)
        return self.colors[self._index[e]]

    def recolored(self, index: int, color: int) -> "Coloring":
        cols = list(self.colors)
        cols[index] = color
        return Coloring(self.n, self.m, self.ell, tuple(cols))

    def class_edges(self, k: int) -> list[int]:
        return [e for e, c in zip(self.edges, self.colors) if c == k]


@dataclass(frozen=True)
class Hypergraph:
    vertices: SubsetMask
    edges: SetFamily

    def __post_init__(self):
        if self.edges.ground_size != self.vertices.ground_size:
            raise ValueError("edges and vertex mask use different ground sets")
        outside = ~self.vertices.bits
        if any(e & outside for e in self.edges.bits):
            raise ValueError("edge not contained in the vertex set")

    @classmethod
    def on(cls, n: int, edges: Iterable, vertices: Iterable[int] | None = None) -> "Hypergraph":
        vmask = SubsetMask.full(n) if vertices is None else SubsetMask.of(n, vertices)
        return cls(vmask, SetFamily(n, edges))

    @property
    def n(self) -> int:
        return self.vertices.ground_size


# --- clique machinery --------------------------------------------------------

def _links(edges: Iterable[int]) -> dict[int, int]:
    """Map each m-subset T to the mask of vertices w with T + w an allowed edge."""
    link: dict[int, int] = {}
    for e in edges:
        rest = e
        while rest:
            low = rest & -rest
            t = e ^ low
            link[t] = link.get(t, 0) | low
            rest ^= low
    return link


def _walk_cliques(n: int, m: int, link: dict[int, int], visit=None) -> int:
    """Count (and optionally visit) every set whose (m+1)-subsets are all allowed."""
    if m == 0:
        allowed = link.get(0, 0)
        if visit is None:
            return 1 << allowed.bit_count()
        idx = [i for i in range(n) if allowed >> i & 1]
        count = 0
        for r in range(len(idx) + 1):
            for combo in combinations(idx, r):
                visit(sum(1 << i for i in combo))
                count += 1
        return count

    def rec(members: list[int], mask: int, cand: int) -> int:
        if visit is not None:
            visit(mask)
        total = 1
        grow = len(members) >= m - 1
        while cand:
            low = cand & -cand
            cand ^= low
            nxt = cand
            if grow and nxt:
                for sub in combinations(members, m - 1):
                    nxt &= link.get(sum(sub) | low, 0)
                    if not nxt:
                        break
            members.append(low)
            total += rec(members, mask | low, nxt)
            members.pop()
        return total

    return rec([], 0, (1 << n) - 1)


def count_cliques(n: int, m: int, allowed_edges: Iterable[int]) -> int:
    """Number of subsets of ``[n]`` all of whose (m+1)-subsets are in ``allowed_edges``."""
    return _walk_cliques(n, m, _links(allowed_edges))


def count_monochromatic(c: Coloring) -> list[int]:
    """Monochromatic clique counts per color (sets of size <= m count everywhere)."""
    return [count_cliques(c.n, c.m, c.class_edges(k)) for k in range(1, c.ell + 1)]


def clique_product(c: Coloring) -> int:
    out = 1
    for v in count_monochromatic(c):
        out *= v
    return out


def families_from_coloring(c: Coloring, max_n: int = MAX_ENUM_N) -> list[SetFamily]:
    if c.n > max_n:
        raise CapacityError(f"n={c.n} exceeds the enumeration cap {max_n}")
    out = []
    for k in range(1, c.ell + 1):
        members: list[int] = []
        _walk_cliques(c.n, c.m, _links(c.class_edges(k)), members.append)
        out.append(SetFamily._trusted(c.n, members))
    return out


def coloring_from_families(families: Sequence[SetFamily], m) -> Coloring:
    """Color each (m+1)-subset by the unique family containing it.

    ``m`` is an int or a uniform :class:`OverlapSpec`. Raises
    :class:`NotMaximalError` if some (m+1)-subset lies in no family or in
    several.
    """
    if isinstance(m, OverlapSpec):
        if m.uniform_value is None:
            raise ValueError("the coloring bridge needs a uniform bound")
        if m.ell != len(families):
            raise ValueError("spec arity does not match the number of families")
        m = m.uniform_value
    n = families[0].ground_size
    lookups = [f.lookup() for f in families]
    colors = []
    for e in hyperedges(n, m):
        owners = [k for k, look in enumerate(lookups, 1) if e in look]
        if len(owners) != 1:
            raise NotMaximalError(
                f"edge {{{','.join(map(str, bits_to_elements(e)))}}} lies in {len(owners)} families")
        colors.append(owners[0])
    return Coloring(n, m, len(families), tuple(colors))


def complement_hypergraph(families: Sequence[SetFamily], spec: OverlapSpec, k: int) -> Hypergraph:
    """``H_k``: union over ``k' != k`` of the ``(m_{k,k'}+1)``-layers of ``F_k'``."""
    n = families[0].ground_size
    edges: set[int] = set()
    for k2 in range(1, spec.ell + 1):
        if k2 != k:
            edges.update(families[k2 - 1].layer(spec[k, k2] + 1).bits)
    return Hypergraph(SubsetMask.full(n), SetFamily._trusted(n, edges))


def count_independent(h: Hypergraph) -> int:
    """Number of vertex subsets containing no edge of ``h``.

    Vertices are added in increasing order; each edge is watched at its largest
    vertex, where it is checked against the already chosen part.
    """
    if 0 in h.edges.lookup():
        return 0
    verts = [i for i in range(h.n) if h.vertices.bits >> i & 1]
    watch: dict[int, list[int]] = {}
    for e in h.edges.bits:
        top = e.bit_length() - 1
        watch.setdefault(top, []).append(e & ~(1 << top))

    def rec(chosen: int, start: int) -> int:
        total = 1
        for j in range(start, len(verts)):
            v = verts[j]
            if all(r & ~chosen for r in watch.get(v, ())):
                total += rec(chosen | (1 << v), j + 1)
        return total

    return rec(0, 0)


# --- text format -------------------------------------------------------------

def format_coloring(c: Coloring) -> str:
    lines = [f"n={c.n} m={c.m} l={c.ell}"]
    for e, col in zip(c.edges, c.colors):
        lines.append(f"{','.join(map(str, bits_to_elements(e)))}: {col}")
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, strict: bool = False) -> Coloring:
    """Parse the coloring format; omitted subsets get color 1 unless ``strict``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty coloring text")
    try:
        head = dict(tok.split("=") for tok in lines[0].split())
        n, m, ell = int(head["n"]), int(head["m"]), int(head["l"])
    except (ValueError, KeyError):
        raise FormatError(f"bad coloring header {lines[0]!r}") from None
    given: dict[int, int] = {}
    for ln in lines[1:]:
        left, sep, right = ln.partition(":")
        if not sep:
            raise FormatError(f"bad coloring line {ln!r}")
        try:
            els = [int(x) for x in left.split(",")]
            col = int(right)
        except ValueError:
            raise FormatError(f"bad coloring line {ln!r}") from None
        if len(els) != m + 1 or len(set(els)) != len(els) or any(not 1 <= x <= n for x in els):
            raise FormatError(f"edge {left!r} is not an {m + 1}-subset of [1, {n}]")
        if not 1 <= col <= ell:
            raise FormatError(f"color {col} out of range 1..{ell}")
        e = elements_to_bits(els, n)
        if e in given:
            raise FormatError(f"edge {left!r} colored twice")
        given[e] = col
    edges = hyperedges(n, m)
    if strict and len(given) != len(edges):
        raise FormatError(f"strict mode: {len(edges) - len(given)} edges uncolored")
    return Coloring(n, m, ell, tuple(given.get(e, 1) for e in edges))


def read_coloring(path, strict: bool = False) -> Coloring:
    return parse_coloring(Path(path).read_text(), strict=strict)


def write_coloring(c: Coloring, path) -> None:
    Path(path).write_text(format_coloring(c))
