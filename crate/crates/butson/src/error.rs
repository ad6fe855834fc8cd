//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two ring elements or matrices over different root orders were mixed.
    #[error("root order mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    /// A multiplier index that is not invertible mod `q`.
    #[error("multiplier k={k} is not coprime to q={q}")]
    InvalidMultiplier { k: usize, q: usize },

    /// An enumeration would exceed the configured budget.
    #[error("budget exceeded: needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// Vector lengths do not match.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// The matrix has no common row/column sum.
    #[error("matrix is not regular")]
    NotRegular,

    /// The matrix does not satisfy the Bush-type block identity.
    #[error("matrix is not Bush-type for block size {block}")]
    NotBushType { block: usize },

    /// Order is not the square of the requested block size.
    #[error("order {n} is not the square of block size {block}")]
    BlockMismatch { n: usize, block: usize },

    /// Parse failure in the matrix file codec.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A `phi` table that is not a permutation of `Z_q^m`.
    #[error("phi table is not a permutation of Z_q^m")]
    InvalidPermutation,

    /// The shifted construction requires a non-identity permutation.
    #[error("shifted variant requires phi != identity (f would be the zero map)")]
    ZeroMap,

    /// Mismatched search parameters when combining solutions.
    #[error("solutions have different multipliers: k={left} vs k={right}")]
    MultiplierMismatch { left: usize, right: usize },

    /// The stated precondition `HX = λ·ζ^y` does not hold.
    #[error("HX is not a scalar multiple of the target vector")]
    NotBent,

    /// All eigenvectors of the product matrix have first coordinate zero.
    #[error("first basis column is numerically zero: no solutions")]
    ZeroFirstColumn,

    /// A vertex permutation that does not decode to a consistent monomial.
    #[error("digraph permutation does not decode to a monomial pair: {0}")]
    DecodeFailed(String),

    /// `act_on_bent` was called with a matrix outside the strong group.
    #[error("monomial matrix is not in the strong group for k={k}")]
    NotStrong { k: usize },

    /// Levenshtein bound evaluated outside its validity interval.
    #[error("s={s} is outside the validity interval [0, {limit})")]
    OutOfDomain { s: f64, limit: f64 },

    /// Entry out of range when building a matrix.
    #[error("log entry {entry} out of range for q={q}")]
    EntryOutOfRange { entry: i64, q: usize },

    /// Malformed input that fits no more specific variant.
    #[error("{0}")]
    InvalidInput(String),
}
