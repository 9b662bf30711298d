"""
From families to colorings and back
===================================

For a uniform bound m, a maximal tuple of families is the same thing as a
coloring of the (m+1)-subsets of [n]: family k is the set of monochromatic
cliques of color k. Searching colorings is then a search over families.
"""

from overlapx import (
    Coloring,
    coloring_from_families,
    count_monochromatic,
    families_from_coloring,
    format_coloring,
)
from overlapx.search import exact_search, family_bruteforce, local_search, octopus_seed

# one perfect matching in color 1, everything else color 2
c = Coloring.from_mapping(4, 1, 2, {(1, 2): 1, (3, 4): 1}, default=2)
print(format_coloring(c))
print("clique counts:", count_monochromatic(c))

# round trip through the families
fams = families_from_coloring(c)
print("family sizes:", [len(f) for f in fams])
print("round trip ok:", coloring_from_families(fams, 1) == c)

# two independent routes to the optimum at n=4, three colors
print("coloring search:", exact_search(4, 3, 1).optimum)
print("downset search: ", family_bruteforce(4, 3, 1).optimum)

# beyond exhaustion: start at the completed octopus and hill climb
seed, octo = octopus_seed(8, 3, 1)
r = local_search(8, 3, 1, seed=7, iterations=2000)
print(f"n=8: octopus {octo}, local search {r.optimum}, accepted moves {r.extra['accepted_moves']}")
