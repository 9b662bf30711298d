"""
Two families with bounded cross intersections
=============================================

With two families and every cross intersection of size at most m, the best
product is 2^n times the number of sets of size <= m. The full cube paired
with the small sets reaches it.
"""

from overlapx import OverlapSpec, SetFamily, exact_search, is_maximal, verify_overlap
from overlapx.inequalities import frankl_bound

n, m = 5, 1
spec = OverlapSpec.uniform(2, m)

# the extremal pair
cube = SetFamily.powerset(n)
small = SetFamily.up_to_size(n, m)
print("sizes:", len(cube), len(small), "product:", len(cube) * len(small))
print("overlapping:", verify_overlap([cube, small], spec))
print("maximal:", is_maximal([cube, small], spec))

# exhaustive search over edge colorings confirms nothing beats it
for n in range(2, 6):
    r = exact_search(n, 2, 1)
    print(f"n={n}: search {r.optimum}, closed form {frankl_bound(n, 1)}, nodes {r.nodes_visited}")

# a single oversized intersection is reported with its witness
clash = SetFamily(3, [{1, 2}])
print(verify_overlap([clash, clash], OverlapSpec.uniform(2, 1)))
