//! The central extension of `A` by `B` attached to `β: Λ²A -> B`.

pub mod beta;
pub mod bic;
pub mod cocycle;
pub mod group;

pub use beta::BetaMap;
pub use bic::{bic_bruteforce_oracle, bic_of_beta, BicOracle, OracleMode, OracleOptions};
pub use cocycle::{antisymmetrize, iota, theta, Cocycle2};
pub use group::{commutator, commutator_formula, group_inv, group_mul, group_pow, ExtElem};
