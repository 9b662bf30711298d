"""Extremal products of m-overlapping set families.

Exact set-family algebra, the octopus lower-bound construction, the coloring
formulation, exact and heuristic search for s*(n, l, m), and executable
correlation inequalities.
"""
from .coloring import (
    Coloring,
    Hypergraph,
    coloring_from_families,
    complement_hypergraph,
    count_independent,
    count_monochromatic,
    families_from_coloring,
    format_coloring,
    parse_coloring,
)
from .constructions import (
    AllocationVector,
    PartitionLayout,
    asymptotic_value,
    binom_le,
    octopus_build,
    octopus_size,
    optimize_partition,
    proportional_allocation,
)
from .errors import CapacityError, OverlapxError
from .family import (
    SetFamily,
    SubsetMask,
    biased_measure,
    degree,
    down_closure,
    format_family,
    is_down_closed,
    join,
    max_cardinality_set,
    meet,
    parse_family,
    restrict,
    support,
    trace,
)
from .inequalities import (
    IneqVerdict,
    binary_entropy,
    check_cover_matching,
    check_daykin,
    check_harris_kleitman,
    check_rinott_saks,
    check_rinott_saks_biased,
    cross_entropy,
    degree_product,
    empirical_entropy,
    frankl_bound,
    marginal_entropies,
    maximal_matching,
    min_cover,
    prune_two_supports,
    residual_set,
)
from .overlap import OverlapSpec, Violation, is_maximal, maximal_completion, parse_spec, verify_overlap
from .search import (
    SearchReport,
    daykin_chain_bound,
    exact_search,
    family_bruteforce,
    local_search,
)

__version__ = "0.1.0"
