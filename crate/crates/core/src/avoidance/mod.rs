//! Points of `Gr(2, A)` in `P(Λ²A)`, subspaces that miss them, and the
//! resulting `β` whose kernel contains no nonzero pure wedge.

pub mod build;
pub mod projective;
pub mod search;

pub use build::{build_beta, counting_inequality, kernel_avoids_pure_wedges, kernel_generator, BuiltBeta};
pub use projective::{grassmannian_count, plucker_image, projective_count, ProjPoint};
pub use search::{avoiding_subspace, meets, Avoidance, SearchOptions, SearchStrategy};
