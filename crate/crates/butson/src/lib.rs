//! Butson Hadamard matrices over the complex `q`-th roots of unity, the
//! self-dual bent sequences attached to them, and the metric geometry of
//! their associated `Z_q` codes.
//!
//! The crate is organised around a handful of objects:
//!
//! - [`CycElt`]: exact arithmetic in `Z[ζ_q]`, the ring where every
//!   verification in this crate takes place. No floating point is involved
//!   in any correctness-critical path.
//! - [`ButsonMatrix`]: an `n×n` matrix over the `q`-th roots of unity kept
//!   in logarithmic form (exponents mod `q`), with exact verification of
//!   the Hadamard equation `HH* = nI`, equivalence transforms, and the
//!   classical generators (Fourier, group-invariant, Kronecker products).
//! - [`BentSolution`]: a sequence `X ∈ Ω_q^n` with `HX = λ·μ_k(X)` for a
//!   Galois multiplier `μ_k`, found either by exhaustive enumeration or by
//!   the eigenspace method, and always re-verified exactly.
//! - [`ZqCode`]: the row code `F_H` and its translate closure `C_H`, whose
//!   Chinese-Euclidean covering radius, distance spectrum, spherical
//!   embedding and design strength live in [`metrics`].
//! - [`Digraph`]: graph encodings of the (strong) automorphism group with a
//!   desk-scale automorphism search and exact decoding back to monomial
//!   matrices.
//!
//! Floating point appears only where it is genuinely numerical: eigenspace
//! bases, spherical embeddings, and the non-integral weight tables for
//! `q ∉ {1,2,3,4,6}`. Every search result is accepted or rejected by exact
//! cyclotomic arithmetic.

pub mod autgroup;
pub mod bent;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod existence;
pub mod matrix;
pub mod metrics;

mod value;

pub use crate::autgroup::Digraph;
pub use crate::bent::BentSolution;
pub use crate::cyclotomic::CycElt;
pub use crate::error::Error;
pub use crate::matrix::{ButsonMatrix, MonomialMatrix, ZqCode};
pub use crate::metrics::{SphericalPoints, WeightTable};
pub use crate::value::Scalar;

/// Default cap on the number of candidate vectors an exhaustive or
/// eigenspace sweep may enumerate.
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 100_000_000;

/// Default cap on the number of compositions enumerated when listing
/// admissible eigenvalues.
pub const DEFAULT_COMPOSITION_BUDGET: u128 = 10_000_000;

/// Default cap on digraph size for the in-process automorphism search.
pub const DEFAULT_VERTEX_BUDGET: usize = 2000;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
