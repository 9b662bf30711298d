"""The m-overlapping property: bound vectors, verification and completion."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, FormatError, GroundSizeMismatch, OverlapViolationError
from .family import SetFamily, SubsetMask

MAX_COMPLETION_N = 24
_BLOCK = 1 << 22


def pair_index(ell: int) -> list[tuple[int, int]]:
    """Unordered pairs of ``[ell]`` in lexicographic order, 1-based."""
    return list(combinations(range(1, ell + 1), 2))


@dataclass(frozen=True)
class OverlapSpec:
    """``ell`` families and one intersection bound per unordered pair.

    ``values`` follows :func:`pair_index` order: (1,2), (1,3), ..., (ell-1, ell).
    """

    ell: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("need at least two families")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        expected = self.ell * (self.ell - 1) // 2
        if len(self.values) != expected:
            raise ValueError(f"ell={self.ell} needs {expected} bounds, got {len(self.values)}")
        if any(v < 0 for v in self.values):
            raise ValueError("bounds must be non-negative")

    @classmethod
    def uniform(cls, ell: int, m: int) -> "OverlapSpec":
        return cls(ell, (m,) * (ell * (ell - 1) // 2))

    @classmethod
    def from_pairs(cls, ell: int, bounds: Mapping[tuple[int, int], int]) -> "OverlapSpec":
        vals = []
        for k, k2 in pair_index(ell):
            v = bounds.get((k, k2), bounds.get((k2, k)))
            if v is None:
                raise ValueError(f"missing bound for pair ({k}, {k2})")
            vals.append(v)
        return cls(ell, tuple(vals))

    def pairs(self) -> list[tuple[int, int]]:
        return pair_index(self.ell)

    def items(self):
        return zip(self.pairs(), self.values)

    def __getitem__(self, pair: tuple[int, int]) -> int:
        k, k2 = pair
        if k == k2 or not (1 <= k <= self.ell and 1 <= k2 <= self.ell):
            raise KeyError(pair)
        if k > k2:
            k, k2 = k2, k
        # position of (k, k2) in lexicographic pair order
        pos = (k - 1) * self.ell - (k - 1) * k // 2 + (k2 - k - 1)
        return self.values[pos]

    @property
    def sigma(self) -> int:
        return sum(self.values)

    @property
    def uniform_value(self) -> int | None:
        return self.values[0] if len(set(self.values)) == 1 else None

    def __str__(self) -> str:
        return f"l={self.ell}; m={','.join(map(str, self.values))}"


def parse_spec(text: str) -> OverlapSpec:
    """Parse ``l=<int>; m=<v12,v13,...>`` or the uniform ``l=<int>; m=<int>``."""
    match = re.fullmatch(r"\s*l\s*=\s*(\d+)\s*[;,\s]\s*m\s*=\s*<?\s*([\d,\s]+?)\s*>?\s*", text)
    if not match:
        raise FormatError(f"cannot parse overlap spec {text!r}")
    ell = int(match.group(1))
    vals = [int(v) for v in match.group(2).replace(" ", "").split(",") if v]
    try:
        if len(vals) == 1:
            return OverlapSpec.uniform(ell, vals[0])
        return OverlapSpec(ell, tuple(vals))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


@dataclass(frozen=True)
class Violation:
    """A cross pair of members that overlap by more than their bound.

    Falsy, so ``if verify_overlap(...)`` reads naturally.
    """

    k: int
    k2: int
    first: SubsetMask
    second: SubsetMask
    overlap: int
    bound: int

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return (f"families {self.k},{self.k2}: |{self.first} & {self.second}| = "
                f"{self.overlap} > {self.bound}")


def _check_arity(families: Sequence[SetFamily], spec: OverlapSpec) -> int:
    if len(families) != spec.ell:
        raise ValueError(f"spec has ell={spec.ell} but {len(families)} families given")
    n = families[0].ground_size
    for f in families:
        if f.ground_size != n:
            raise GroundSizeMismatch("families live on different ground sets")
    return n


def _pair_violations(a: SetFamily, b: SetFamily, bound: int, first_only: bool):
    """Yield (i, j, overlap) index pairs in row-major order."""
    if not a.bits or not b.bits:
        return
    if a.ground_size <= 64 and len(a) * len(b) > 256:
        left, right = a.as_array(), b.as_array()
        rows = max(1, _BLOCK // len(right))
        for i0 in range(0, len(left), rows):
            pc = np.bitwise_count(left[i0:i0 + rows, None] & right[None, :])
            hits = np.argwhere(pc > bound)
            for i, j in hits:
                yield i0 + int(i), int(j), int(pc[i, j])
                if first_only:
                    return
        return
    for i, x in enumerate(a.bits):
        for j, y in enumerate(b.bits):
            c = (x & y).bit_count()
            if c > bound:
                yield i, j, c
                if first_only:
                    return


def verify_overlap(families: Sequence[SetFamily], spec: OverlapSpec, all_violations: bool = False):
    """Check the m-overlapping property.

    Returns ``True`` when every cross pair obeys its bound. Otherwise returns
    the first :class:`Violation` in (k, k', member, member) order, or the full
    list when ``all_violations`` is set.
    """
    n = _check_arity(families, spec)
    found = []
    for (k, k2), bound in spec.items():
        a, b = families[k - 1], families[k2 - 1]
        for i, j, c in _pair_violations(a, b, bound, not all_violations):
            v = Violation(k, k2, SubsetMask(n, a.bits[i]), SubsetMask(n, b.bits[j]), c, bound)
            if not all_violations:
                return v
            found.append(v)
    return found if all_violations and found else True


def _universe(n: int) -> np.ndarray:
    if n > MAX_COMPLETION_N:
        raise CapacityError(f"subset scan over 2^{n} sets exceeds cap 2^{MAX_COMPLETION_N}")
    return np.arange(1 << n, dtype=np.uint64)


def _blocked_by(universe: np.ndarray, other: SetFamily, bound: int) -> np.ndarray:
    """Boolean mask of subsets that overlap some member of ``other`` too much."""
    out = np.zeros(len(universe), dtype=bool)
    if not other.bits:
        return out
    g = other.as_array()
    step = max(1, _BLOCK // len(universe))
    for j in range(0, len(g), step):
        pc = np.bitwise_count(universe[:, None] & g[None, j:j + step])
        out |= (pc > bound).any(axis=1)
    return out


def addable_sets(families: Sequence[SetFamily], spec: OverlapSpec, k: int) -> SetFamily:
    """Every subset that could sit in family ``k`` given the other families."""
    n = _check_arity(families, spec)
    universe = _universe(n)
    blocked = np.zeros(len(universe), dtype=bool)
    for k2 in range(1, spec.ell + 1):
        if k2 != k:
            blocked |= _blocked_by(universe, families[k2 - 1], spec[k, k2])
    return SetFamily._trusted(n, np.flatnonzero(~blocked).tolist())


def is_maximal(families: Sequence[SetFamily], spec: OverlapSpec) -> bool:
    """True iff no subset can be added to any family without a violation."""
    for k in range(1, spec.ell + 1):
        if not addable_sets(families, spec, k) <= families[k - 1]:
            return False
    return True


def maximal_completion(families: Sequence[SetFamily], spec: OverlapSpec) -> list[SetFamily]:
    """Greedy maximal m-overlapping superfamilies of ``families``.

    Subsets are scanned once in ascending mask order; for each one the families
    are tried in order 1..ell. A single pass suffices: the other families only
    grow, so a subset rejected once stays rejected. The result is down-closed.
    """
    n = _check_arity(families, spec)
    first = verify_overlap(families, spec)
    if first is not True:
        raise OverlapViolationError(f"input is not m-overlapping: {first}")
    universe = _universe(n)
    ell = spec.ell
    bound = [[0] * (ell + 1) for _ in range(ell + 1)]
    for (k, k2), v in spec.items():
        bound[k][k2] = bound[k2][k] = v
    members = [set(f.bits) for f in families]
    blocked = [np.zeros(len(universe), dtype=bool) for _ in range(ell)]
    for k in range(ell):
        for k2 in range(ell):
            if k2 != k:
                blocked[k] |= _blocked_by(universe, families[k2], bound[k + 1][k2 + 1])
    for s in range(1 << n):
        for k in range(ell):
            if s in members[k] or blocked[k][s]:
                continue
            members[k].add(s)
            pc = np.bitwise_count(universe & np.uint64(s))
            for k2 in range(ell):
                if k2 != k:
                    blocked[k2] |= pc > bound[k + 1][k2 + 1]
    return [SetFamily._trusted(n, m) for m in members]
