"""Subsets of [n] as bit masks, set families, and their lattice algebra.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is stored in bit ``i - 1``.
A :class:`SetFamily` keeps its members as a sorted tuple of plain ``int`` masks;
:class:`SubsetMask` is the validated value type handed across the public API.

Sizes, degrees and measures are exact (``int`` / :class:`fractions.Fraction`).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import (
    CapacityError,
    EmptyFamilyError,
    FormatError,
    GroundSizeMismatch,
)

MAX_GROUND_SIZE = 128
DEFAULT_MEMBER_LIMIT = 1 << 26

# pairwise products above this many entries go through numpy
_VECTOR_THRESHOLD = 256
_BLOCK = 1 << 22


def _check_ground(n: int) -> None:
    if not 0 <= n <= MAX_GROUND_SIZE:
        raise ValueError(f"ground size must be in [0, {MAX_GROUND_SIZE}], got {n}")


def elements_to_bits(elements: Iterable[int], n: int) -> int:
    bits = 0
    for x in elements:
        if not 1 <= x <= n:
            raise ValueError(f"element {x} outside [1, {n}]")
        bits |= 1 << (x - 1)
    return bits


def bits_to_elements(bits: int) -> tuple[int, ...]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True, order=True)
class SubsetMask:
    """One subset of ``[n]`` stored as a bit vector."""

    ground_size: int
    bits: int = 0

    def __post_init__(self):
        _check_ground(self.ground_size)
        if self.bits < 0 or self.bits >> self.ground_size:
            raise ValueError(f"mask {self.bits:#x} has bits outside [1, {self.ground_size}]")

    @classmethod
    def of(cls, n: int, elements: Iterable[int] = ()) -> "SubsetMask":
        return cls(n, elements_to_bits(elements, n))

    @classmethod
    def full(cls, n: int) -> "SubsetMask":
        return cls(n, (1 << n) - 1)

    def elements(self) -> tuple[int, ...]:
        return bits_to_elements(self.bits)

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: int) -> bool:
        return 1 <= x <= self.ground_size and bool(self.bits >> (x - 1) & 1)

    def _other(self, other: "SubsetMask") -> int:
        if other.ground_size != self.ground_size:
            raise GroundSizeMismatch(f"ground sizes {self.ground_size} and {other.ground_size}")
        return other.bits

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        return SubsetMask(self.ground_size, self.bits & self._other(other))

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        return SubsetMask(self.ground_size, self.bits | self._other(other))

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        return SubsetMask(self.ground_size, self.bits & ~self._other(other))

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.ground_size, ((1 << self.ground_size) - 1) & ~self.bits)

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & ~self._other(other) == 0

    def __str__(self) -> str:
        return format_members(self.bits)

    def __repr__(self) -> str:
        return f"SubsetMask(n={self.ground_size}, {{{','.join(map(str, self.elements()))}}})"


MemberLike = Union[int, SubsetMask, Iterable[int]]


def _member_bits(x, n: int) -> int:
    if isinstance(x, SubsetMask):
        if x.ground_size != n:
            raise GroundSizeMismatch(f"member has ground size {x.ground_size}, family has {n}")
        return x.bits
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if x < 0 or x >> n:
            raise ValueError(f"mask {x:#x} has bits outside [1, {n}]")
        return x
    return elements_to_bits(x, n)


class SetFamily:
    """A deduplicated family of subsets of ``[n]``, sorted by mask value.

    Members may be given as ``int`` masks, :class:`SubsetMask`, or iterables of
    1-based elements::

        >>> SetFamily(3, [{1, 2}, {2}, ()]).sets()
        [(), (2,), (1, 2)]
    """

    __slots__ = ("ground_size", "bits", "_lookup")

    def __init__(self, ground_size: int, members: Iterable[MemberLike] = ()):
        _check_ground(ground_size)
        self.ground_size = ground_size
        self.bits = tuple(sorted({_member_bits(x, ground_size) for x in members}))
        self._lookup = None

    @classmethod
    def _trusted(cls, n: int, bits: Iterable[int]) -> "SetFamily":
        # members already validated ints
        f = cls.__new__(cls)
        f.ground_size = n
        f.bits = tuple(sorted(set(bits)))
        f._lookup = None
        return f

    @classmethod
    def powerset(cls, n: int, within: SubsetMask | None = None) -> "SetFamily":
        """``2^X`` for ``X = within`` (default ``[n]``)."""
        base = (1 << n) - 1 if within is None else _member_bits(within, n)
        return cls._trusted(n, _submasks(base))

    @classmethod
    def up_to_size(cls, n: int, t: int, within: SubsetMask | None = None) -> "SetFamily":
        """All subsets of ``within`` (default ``[n]``) with at most ``t`` elements."""
        base = (1 << n) - 1 if within is None else _member_bits(within, n)
        idx = [i for i in range(n) if base >> i & 1]
        out = []
        for r in range(min(t, len(idx)) + 1):
            for combo in combinations(idx, r):
                out.append(sum(1 << i for i in combo))
        return cls._trusted(n, out)

    @property
    def members(self) -> tuple[SubsetMask, ...]:
        return tuple(SubsetMask(self.ground_size, b) for b in self.bits)

    def sets(self) -> list[tuple[int, ...]]:
        return [bits_to_elements(b) for b in self.bits]

    def size(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[SubsetMask]:
        n = self.ground_size
        return (SubsetMask(n, b) for b in self.bits)

    def lookup(self) -> frozenset[int]:
        if self._lookup is None:
            self._lookup = frozenset(self.bits)
        return self._lookup

    def __contains__(self, x) -> bool:
        try:
            b = _member_bits(x, self.ground_size)
        except (ValueError, GroundSizeMismatch):
            return False
        return b in self.lookup()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.ground_size == other.ground_size and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.ground_size, self.bits))

    def __le__(self, other: "SetFamily") -> bool:
        """Subfamily test."""
        return self.lookup() <= other.lookup()

    def __repr__(self) -> str:
        shown = ", ".join(format_members(b) for b in self.bits[:8])
        more = ", ..." if len(self.bits) > 8 else ""
        return f"SetFamily(n={self.ground_size}, size={len(self.bits)}, [{shown}{more}])"

    def layer(self, t: int) -> "SetFamily":
        """Members of cardinality exactly ``t``."""
        return SetFamily._trusted(self.ground_size, (b for b in self.bits if b.bit_count() == t))

    def union(self, other: "SetFamily") -> "SetFamily":
        _same_ground(self, other)
        return SetFamily._trusted(self.ground_size, self.bits + other.bits)

    def intersection(self, other: "SetFamily") -> "SetFamily":
        _same_ground(self, other)
        keep = other.lookup()
        return SetFamily._trusted(self.ground_size, (b for b in self.bits if b in keep))

    def as_array(self) -> np.ndarray:
        """Members as a ``uint64`` array; only for ground sizes up to 64."""
        if self.ground_size > 64:
            raise ValueError("uint64 view needs ground size <= 64")
        return np.fromiter(self.bits, dtype=np.uint64, count=len(self.bits))


def _submasks(base: int) -> list[int]:
    out = []
    s = base
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & base
    return out


def _same_ground(*families: SetFamily) -> int:
    n = families[0].ground_size
    for f in families[1:]:
        if f.ground_size != n:
            raise GroundSizeMismatch(f"ground sizes {n} and {f.ground_size}")
    return n


def _pairwise(a: SetFamily, b: SetFamily, op: str) -> SetFamily:
    n = _same_ground(a, b)
    if not a.bits or not b.bits:
        return SetFamily._trusted(n, ())
    if n <= 64 and len(a) * len(b) > _VECTOR_THRESHOLD:
        ufunc = np.bitwise_and if op == "and" else np.bitwise_or
        left, right = a.as_array(), b.as_array()
        rows = max(1, _BLOCK // len(right))
        acc = np.empty(0, dtype=np.uint64)
        for i in range(0, len(left), rows):
            block = ufunc(left[i:i + rows, None], right[None, :]).ravel()
            acc = np.union1d(acc, block)
        return SetFamily._trusted(n, acc.tolist())
    if op == "and":
        return SetFamily._trusted(n, {x & y for x in a.bits for y in b.bits})
    return SetFamily._trusted(n, {x | y for x in a.bits for y in b.bits})


def meet(a: SetFamily, b: SetFamily) -> SetFamily:
    """All pairwise intersections ``{A & B}``, deduplicated."""
    return _pairwise(a, b, "and")


def join(a: SetFamily, b: SetFamily) -> SetFamily:
    """All pairwise unions ``{A | B}``, deduplicated."""
    return _pairwise(a, b, "or")


def meet_all(families: Iterable[SetFamily]) -> SetFamily:
    families = list(families)
    out = families[0]
    for f in families[1:]:
        out = meet(out, f)
    return out


def join_all(families: Iterable[SetFamily]) -> SetFamily:
    families = list(families)
    out = families[0]
    for f in families[1:]:
        out = join(out, f)
    return out


def down_closure(f: SetFamily, limit: int = DEFAULT_MEMBER_LIMIT) -> SetFamily:
    """Smallest down-closed family containing ``f``.

    Raises :class:`CapacityError` as soon as an intermediate stage exceeds
    ``limit`` members (intermediate stages never exceed the final size).
    """
    n = f.ground_size
    if not f.bits:
        return f
    if n <= 64:
        arr = f.as_array()
        for i in range(n):
            bit = np.uint64(1 << i)
            arr = np.union1d(arr, arr & ~bit)
            if len(arr) > limit:
                raise CapacityError(f"down-closure exceeds {limit} members")
        return SetFamily._trusted(n, arr.tolist())
    cur = set(f.bits)
    for i in range(n):
        clear = ~(1 << i)
        cur |= {b & clear for b in cur}
        if len(cur) > limit:
            raise CapacityError(f"down-closure exceeds {limit} members")
    return SetFamily._trusted(n, cur)


def is_down_closed(f: SetFamily) -> bool:
    have = f.lookup()
    for b in f.bits:
        rest = b
        while rest:
            low = rest & -rest
            if b & ~low not in have:
                return False
            rest ^= low
    return True


def restrict(f: SetFamily, b: SubsetMask) -> SetFamily:
    """``{F & B : F in f}``; the ground size is kept."""
    n = f.ground_size
    mask = _member_bits(b, n)
    return SetFamily._trusted(n, (x & mask for x in f.bits))


def trace(f: SetFamily, a: SubsetMask, b: SubsetMask) -> SetFamily:
    """``{F \\ B : F in f, F & B == A}`` for ``A`` a subset of ``B``."""
    n = f.ground_size
    am, bm = _member_bits(a, n), _member_bits(b, n)
    if am & ~bm:
        raise ValueError("trace needs a subset of b")
    return SetFamily._trusted(n, (x & ~bm for x in f.bits if x & bm == am))


def containing(f: SetFamily, s: SubsetMask) -> SetFamily:
    """``f(S)``: members containing ``S``, with ``S`` removed."""
    return trace(f, s, s)


def avoiding(f: SetFamily, s: SubsetMask) -> SetFamily:
    """``f(not S)``: members disjoint from ``S``."""
    return trace(f, SubsetMask(f.ground_size, 0), s)


def degree(f: SetFamily, s: SubsetMask) -> Fraction:
    """Normalized degree: fraction of members of ``f`` that contain ``s``."""
    if not f.bits:
        raise EmptyFamilyError("degree is undefined on the empty family")
    sm = _member_bits(s, f.ground_size)
    hits = sum(1 for x in f.bits if x & sm == sm)
    return Fraction(hits, len(f.bits))


def support(f: SetFamily) -> SubsetMask:
    acc = 0
    for b in f.bits:
        acc |= b
    return SubsetMask(f.ground_size, acc)


def max_cardinality_set(f: SetFamily) -> SubsetMask:
    if not f.bits:
        raise EmptyFamilyError("empty family has no members")
    # bits are ascending, so max() keeps the first (smallest) of equal size
    best = max(f.bits, key=int.bit_count)
    return SubsetMask(f.ground_size, best)


def biased_measure(f: SetFamily, p) -> Fraction:
    """``sum over X in f of p^|X| (1-p)^(n-|X|)``, exactly."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n = f.ground_size
    q = 1 - p
    counts = Counter(b.bit_count() for b in f.bits)
    return sum((c * p**k * q ** (n - k) for k, c in counts.items()), Fraction(0))


# --- text format -----------------------------------------------------------

def format_members(bits: int) -> str:
    els = bits_to_elements(bits)
    return ",".join(map(str, els)) if els else "-"


def format_family(f: SetFamily) -> str:
    lines = [f"n={f.ground_size}"]
    lines.extend(format_members(b) for b in f.bits)
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SetFamily:
    """Parse the ``n=<int>`` + one-member-per-line format.

    ``-`` is the empty set. Duplicates and out-of-range elements are rejected.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise FormatError("family text must start with 'n=<int>'")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise FormatError(f"bad header {lines[0]!r}") from None
    if not 0 <= n <= MAX_GROUND_SIZE:
        raise FormatError(f"ground size {n} out of range")
    seen = set()
    for ln in lines[1:]:
        if ln == "-":
            bits = 0
        else:
            try:
                els = [int(tok) for tok in ln.split(",")]
            except ValueError:
                raise FormatError(f"bad member line {ln!r}") from None
            if len(set(els)) != len(els):
                raise FormatError(f"repeated element in {ln!r}")
            if any(not 1 <= x <= n for x in els):
                raise FormatError(f"element out of range in {ln!r}")
            bits = elements_to_bits(els, n)
        if bits in seen:
            raise FormatError(f"duplicate member {ln!r}")
        seen.add(bits)
    return SetFamily._trusted(n, seen)


def read_family(path) -> SetFamily:
    return parse_family(Path(path).read_text())


def write_family(f: SetFamily, path) -> None:
    Path(path).write_text(format_family(f))
