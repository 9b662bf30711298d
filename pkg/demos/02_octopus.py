"""
The octopus construction
========================

Split [n] into one block per pair of families. Family k takes every subset of
the blocks it shares with later families (its body) and joins in small
subsets of the blocks it shares with earlier ones (its tentacles).
"""

from overlapx import (
    AllocationVector,
    OverlapSpec,
    asymptotic_value,
    maximal_completion,
    octopus_build,
    octopus_size,
    optimize_partition,
    proportional_allocation,
    verify_overlap,
)
from overlapx.constructions import PartitionLayout

spec = OverlapSpec.uniform(3, 1)
alloc = AllocationVector(spec, (2, 2, 2))
layout = PartitionLayout.from_allocation(alloc)
for (k, k2), block in zip(spec.pairs(), layout.blocks):
    print(f"A_{k}{k2} = {{{block}}}")

families = octopus_build(layout)
print("sizes:", [len(f) for f in families], "product:", octopus_size(alloc))
print("overlapping:", verify_overlap(families, spec))

# greedy completion adds the sets the construction leaves on the table
completed = maximal_completion(families, spec)
print("completed sizes:", [len(f) for f in completed])

# the best block sizes, found by dynamic programming
for n in (6, 7, 12, 30):
    best, value = optimize_partition(n, spec)
    prop = proportional_allocation(n, spec)
    ratio = (value << n) / asymptotic_value(n, spec)
    print(f"n={n}: {best} value {value}, proportional {prop}, ratio to leading term {float(ratio):.4f}")

# unequal bounds shift the blocks toward the larger ones
skew = OverlapSpec(3, (2, 1, 1))
print(skew, "->", optimize_partition(12, skew)[0], proportional_allocation(12, skew))
