//! Exact computations behind a bicyclic Brauer–Manin obstruction example.
//!
//! The crate builds a central extension `1 -> B -> G -> A -> 1` of
//! elementary abelian `p`-groups from a linear map `β: Λ²A -> B`, constructs
//! `β` so that no commuting pair of `G` projects to a nonzero pure wedge,
//! counts the local descent sets in a symplectic model of local cohomology,
//! and packages every check into a re-verifiable certificate.
//!
//! * [`fpcore`]: matrices, wedges and subspaces over `F_p`.
//! * [`extension`]: the cocycle of `β`, the group law of `G` and its bicyclic set.
//! * [`avoidance`]: Plücker points of `Gr(2, A)` and a `β` whose kernel avoids them.
//! * [`localcount`]: the sets `E_v`, `C_v`, their closed-form counts and the witness search.
//! * [`certify`]: the end-to-end pipeline and certificate format.

pub mod avoidance;
pub mod certify;
pub mod error;
pub mod extension;
pub mod fpcore;
pub mod localcount;

pub use error::{Error, Result};
