"""Erdős sieves over rings of integers of small étale Q-algebras."""

from .algebra import (
    Element,
    Ring,
    ball_points,
    custom_ring,
    make_ring,
    mul,
    shortest_vector,
    sup_norm,
)
from .density import (
    DensityReport,
    PartialProduct,
    empirical_density,
    log_density,
    make_folner,
    partial_density_product,
    rfree_density,
    strong_tail_statistic,
    tail_report,
    weak_tail_statistic,
)
from .entropy import (
    CapacityVector,
    count_admissible_patterns,
    entropy_estimate,
    entropy_formula,
    mc_admissible_fraction,
)
from .ideals import (
    IdealLattice,
    ResidueSystem,
    canonical_residue,
    contains,
    count_in_class,
    crt,
    hnf,
    ideal_from_generators,
    ideal_intersection,
    ideal_product,
    ideal_sum,
    is_coprime,
    residues,
)
from .mirsky import (
    AdmissibilityStatus,
    PatternSpec,
    TailBound,
    cylinder_measure,
    find_hole,
    is_admissible,
    pattern_density_experiment,
    shifted_residue_count,
    translation_check,
)
from .sieve import (
    Sieve,
    SieveTerm,
    catalog,
    catalog_schemas,
    in_term,
    is_sieved,
    nth_prime,
    permuted,
    poly_roots_mod,
    prime_count_upto,
    rfree_count,
    rfree_window,
    sieve_from_json,
    sieve_to_json,
    validate,
    with_term,
)
from .windows import Window

__version__ = "0.1.0"
