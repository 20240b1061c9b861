//! Finite model of the local descent sets: `F_p^r` with a standard symplectic
//! form stands in for `Γ^ab / p`, and homomorphisms to `A` are `r1 × r`
//! matrices acting on columns.

pub mod closed_form;
pub mod counting;
pub mod symplectic;
pub mod witness;

pub use closed_form::{
    axkatz_bound, climit_terms, closed_climit, closed_xi, congruent_mod_power, isotropic_subspace_count,
    padic_valuation, surjection_count,
};
pub use counting::{
    column_pair, count_cv, count_descent_sets, count_ev, matrix_at, rank_one_membership, tame_ev, CountReport,
    EvCount, RankOneReport, WitnessLists,
};
pub use symplectic::{pullback_wedge, w_pairing, DualWedge, SymplecticSpace};
pub use witness::{
    find_obstruction_witness, unramified_check, vanishes_on, ObstructionWitness, WitnessMethod, WitnessOutcome,
};
