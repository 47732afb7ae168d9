//! Finite non-degenerate set-theoretic solutions of the Yang-Baxter
//! equation of multipermutation level at most 2: representation and axiom
//! checking, the attached permutation groups, the `S(G x Z_n^2, c, d)`
//! construction, congruences as triples `(S, H, Θ)`, and the exhaustive
//! classification of indecomposable solutions of a given finite size.

pub mod abelian;
pub mod congruence;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod perm;
pub mod isotopy;
pub mod permgroup;
pub mod solution;
pub mod structure;

pub use error::{Error, Result};
pub use perm::Perm;
pub use solution::Solution;
