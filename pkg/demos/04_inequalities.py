"""
Correlation inequalities on random families
===========================================

The product bounds rest on a handful of classical inequalities about meets
and joins. Here each one is checked on a few instances, then fuzzed.
"""

import random
from fractions import Fraction

from overlapx import SetFamily, down_closure
from overlapx.inequalities import (
    check_cover_matching,
    check_daykin,
    check_harris_kleitman,
    check_rinott_saks,
    check_rinott_saks_biased,
    empirical_entropy,
    fuzz,
    marginal_entropies,
    random_hypergraph,
)

rng = random.Random(1)
a = down_closure(SetFamily(6, [{1, 2, 3}, {4, 5}]))
b = down_closure(SetFamily(6, [{2, 3, 4}, {6}]))
print("downsets:", check_harris_kleitman(a, b))
print("arbitrary:", check_daykin(SetFamily(6, [{1}, {2, 3}]), SetFamily(6, [{3}, {1, 4}])))

triple = [SetFamily(5, [rng.randrange(32) for _ in range(6)]) for _ in range(3)]
print("three families:", check_rinott_saks(triple).holds)
print("biased 1/3:", check_rinott_saks_biased(triple, Fraction(1, 3)).holds)

h = random_hypergraph(rng, 10, 3)
v = check_cover_matching(h, 3)
print(f"cover {v.lhs} <= 3 x matching = {v.rhs}")

# entropy of a uniform member against the sum of coordinate entropies
f = SetFamily(3, [(), {1}, {1, 2}, {3}])
print(f"H = {empirical_entropy(f):.6f} <= {sum(marginal_entropies(f)):.6f}")

for suite in ("harris_kleitman", "daykin", "rinott_saks", "rinott_saks_biased", "cover_matching"):
    print(fuzz(suite, 500, 8, seed=3))
