"""
Lower and upper bounds side by side
===================================

For small n the exact optimum sits between the octopus value and the Daykin
chain bound. Local search usually closes part of the gap from below.
"""

from overlapx import OverlapSpec, optimize_partition
from overlapx.search import daykin_chain_bound, exact_search, local_search

print(f"{'n':>2} {'l':>2} {'m':>2} {'octopus':>9} {'local':>9} {'exact':>9} {'daykin':>9}")
for ell, m in ((2, 1), (3, 1), (3, 2)):
    spec = OverlapSpec.uniform(ell, m)
    for n in range(2, 7):
        octo = optimize_partition(n, spec)[1] << n
        local = local_search(n, ell, m, seed=0, iterations=500).optimum
        ex = exact_search(n, ell, m, node_budget=200_000)
        shown = str(ex.optimum) if ex.exact else f">={ex.optimum}"
        print(f"{n:>2} {ell:>2} {m:>2} {octo:>9} {local:>9} {shown:>9} {daykin_chain_bound(n, spec):>9}")
