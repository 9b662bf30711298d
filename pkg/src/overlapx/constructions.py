"""Octopus lower-bound construction, its size, and the integer allocation problem.

Each family ``F_k`` is ``2^{C_k}`` joined with small "tentacles": subsets of
size at most ``m_{k',k}`` of each block ``A_{k',k}`` with ``k' < k``, where the
center ``C_k`` is the union of blocks ``A_{k,k'}`` with ``k' > k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import CapacityError
from .family import SetFamily, SubsetMask, join
from .overlap import OverlapSpec

MAX_BUILD_N = 24


def binom_le(n: int, t: int) -> int:
    """``sum_{i <= t} C(n, i)``: the number of subsets of an n-set of size at most t."""
    if t < 0:
        return 0
    if t >= n:
        return 1 << n
    return sum(comb(n, i) for i in range(t + 1))


@dataclass(frozen=True)
class AllocationVector:
    """Block sizes ``n_S``, one per pair, in the spec's pair order."""

    spec: OverlapSpec
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != len(self.spec.values):
            raise ValueError("allocation needs one count per pair")
        if any(c < 0 for c in self.counts):
            raise ValueError("block sizes must be non-negative")

    @property
    def n(self) -> int:
        return sum(self.counts)

    def __getitem__(self, pair: tuple[int, int]) -> int:
        k, k2 = sorted(pair)
        return self.counts[self.spec.pairs().index((k, k2))]

    def __str__(self) -> str:
        return f"n_S={','.join(map(str, self.counts))}"


@dataclass(frozen=True)
class PartitionLayout:
    """Blocks ``A_{k,k'}`` as consecutive integer ranges in pair order."""

    alloc: AllocationVector
    blocks: tuple[SubsetMask, ...]

    @classmethod
    def from_allocation(cls, alloc: AllocationVector) -> "PartitionLayout":
        n = alloc.n
        blocks = []
        start = 0
        for c in alloc.counts:
            blocks.append(SubsetMask(n, ((1 << c) - 1) << start))
            start += c
        return cls(alloc, tuple(blocks))

    @property
    def n(self) -> int:
        return self.alloc.n

    def block(self, k: int, k2: int) -> SubsetMask:
        k, k2 = sorted((k, k2))
        return self.blocks[self.alloc.spec.pairs().index((k, k2))]

    def center(self, k: int) -> SubsetMask:
        bits = 0
        for k2 in range(k + 1, self.alloc.spec.ell + 1):
            bits |= self.block(k, k2).bits
        return SubsetMask(self.n, bits)


def _as_layout(x) -> PartitionLayout:
    return x if isinstance(x, PartitionLayout) else PartitionLayout.from_allocation(x)


def octopus_family_sizes(alloc: AllocationVector) -> list[int]:
    spec = alloc.spec
    sizes = []
    for k in range(1, spec.ell + 1):
        size = 1
        for k2 in range(1, spec.ell + 1):
            if k2 > k:
                size <<= alloc[k, k2]
            elif k2 < k:
                size *= binom_le(alloc[k2, k], spec[k2, k])
        sizes.append(size)
    return sizes


def octopus_size(alloc: AllocationVector) -> int:
    """Exact product ``prod_S binom(n_S, <= m_S) * 2^n``."""
    value = 1 << alloc.n
    for c, m in zip(alloc.counts, alloc.spec.values):
        value *= binom_le(c, m)
    return value


def octopus_build(layout, max_n: int = MAX_BUILD_N) -> list[SetFamily]:
    """Materialize the octopus families for a layout (or an allocation)."""
    layout = _as_layout(layout)
    n = layout.n
    if n > max_n:
        raise CapacityError(f"octopus build at n={n} exceeds cap {max_n}; use octopus_size")
    spec = layout.alloc.spec
    out = []
    for k in range(1, spec.ell + 1):
        fam = SetFamily.powerset(n, layout.center(k))
        for k2 in range(1, k):
            fam = join(fam, SetFamily.up_to_size(n, spec[k2, k], layout.block(k2, k)))
        out.append(fam)
    return out


def optimize_partition(n: int, spec: OverlapSpec) -> tuple[AllocationVector, int]:
    """Exact maximizer of ``prod_S binom(n_S, <= m_S)`` subject to ``sum n_S = n``.

    Suffix dynamic program over pairs and remaining budget. Among optimal
    vectors the lexicographically smallest one is returned.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    ms = spec.values
    p = len(ms)
    table = [[binom_le(x, m) for x in range(n + 1)] for m in ms]
    # best[i][b]: max product for pairs i.. using exactly b elements; 0 = infeasible
    best = [[0] * (n + 1) for _ in range(p + 1)]
    best[p][0] = 1
    for i in range(p - 1, -1, -1):
        row, nxt, fi = best[i], best[i + 1], table[i]
        for b in range(n + 1):
            row[b] = max(fi[x] * nxt[b - x] for x in range(b + 1))
    counts = []
    b = n
    for i in range(p):
        target = best[i][b]
        x = next(x for x in range(b + 1) if table[i][x] * best[i + 1][b - x] == target)
        counts.append(x)
        b -= x
    return AllocationVector(spec, tuple(counts)), best[0][n]


def proportional_allocation(n: int, spec: OverlapSpec) -> AllocationVector:
    """Round ``n * m_S / sigma`` with the largest-remainder rule.

    Remainder ties go to the earlier pair. With ``sigma = 0`` everything lands
    on pair (1, 2).
    """
    sigma = spec.sigma
    if sigma == 0:
        return AllocationVector(spec, (n,) + (0,) * (len(spec.values) - 1))
    quotas = [Fraction(m * n, sigma) for m in spec.values]
    counts = [q.numerator // q.denominator for q in quotas]
    left = n - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:left]:
        counts[i] += 1
    return AllocationVector(spec, tuple(counts))


def asymptotic_value(n: int, spec: OverlapSpec) -> Fraction:
    """Leading term ``2^n prod_S (1/m_S!) (m_S n / sigma)^{m_S}`` as an exact rational."""
    sigma = spec.sigma
    value = Fraction(1 << n)
    if sigma == 0:
        return value
    for m in spec.values:
        value *= Fraction(m * n, sigma) ** m / factorial(m)
    return value


def best_octopus(n: int, spec: OverlapSpec, max_n: int = MAX_BUILD_N) -> tuple[AllocationVector, list[SetFamily]]:
    """Octopus families at the optimal allocation."""
    alloc, _ = optimize_partition(n, spec)
    return alloc, octopus_build(alloc, max_n=max_n)


def family_sizes(families: Sequence[SetFamily]) -> list[int]:
    return [len(f) for f in families]
