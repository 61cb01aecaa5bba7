"""Plane trees, pattern-avoiding permutations and their local limits.

Finite trees map bijectively onto permutations avoiding a length-3 pattern;
the same maps extend to the infinite size-biased Galton-Watson tree, whose
image is the local limit of a uniform avoider.
"""

from .bijections import PHI, inverse_phi_321, leaf_stats, phi
from .gw import (
    GEOMETRIC_HALF,
    LazyGWTree,
    OffspringDistribution,
    Overflow,
    TreeOverflow,
    enumerate_trees,
    sample_gw,
    sample_uniform_dyck,
    sample_uniform_tree,
    size_biased_pmf,
)
from .infinite import (
    INF,
    HorizonExceeded,
    Node,
    SpineTree,
    extend_spine,
    on_spine,
    phi_inf,
    phi_inf_321,
    phi_inf_prefix,
    prefix_record,
    stability_horizon,
    truncate_spine,
    v_sequence,
    w_sequence,
)
from .lab import PrefixLaw, converge, limit_laws, sample_laws, tv_distance, verify
from .pattern_oracle import PATTERNS, catalan, contains, enumerate_avoiders
from .tree_core import OrderedTree, attach, degree, fringe, lex_compare, local_distance, truncate, validate_tree

__all__ = [name for name in dir() if not name.startswith("_")]
