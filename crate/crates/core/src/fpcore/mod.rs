//! Exact linear and exterior algebra over a prime field.

pub mod enumerate;
pub mod matrix;
pub mod prime;
pub mod subspace;
pub mod wedge;

pub use enumerate::{Budget, DEFAULT_BUDGET};
pub use matrix::{FpMatrix, RowReduction};
pub use prime::PrimeModulus;
pub use subspace::{enumerate_subspaces, gaussian_binomial, Subspace, SubspaceEnumeration};
pub use wedge::{pair_index, wedge, wedge_dim, Wedge2};
