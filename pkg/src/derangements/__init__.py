"""Exact and brute-force computation of fixed-point statistics of permutations."""

from .bijections import MarkedPermutation, Mode, enumerate_marked, phi, phi_inv, psi, psi_inv
from .perm import (
    CycleForm,
    FixedPointStats,
    Permutation,
    ank_step_map,
    enumerate_permutations,
    fixed_point_stats,
    is_derangement,
    parse_cycles,
    reverse_complement,
    to_canonical_cycles,
    to_permutation,
)
from .tables import (
    a_triangle,
    alpha,
    b_triangle,
    beta,
    derangements_up_to,
    dn_via_new_recurrence,
    e_count,
    egf_derangements,
    egf_identity_check,
)

__version__ = "0.1.0"
