//! Exact computation of the valuation of the Dieudonné determinant for
//! square matrices over the skew inverse Laurent series field
//! `K((s⁻¹; σ, δ))`, with applications to skew polynomial matrices.

pub mod expansion;
pub mod field;
pub mod linalg;
pub mod matching;
pub mod relax;
pub mod series;
pub mod skew;

use serde::Serialize;
use thiserror::Error;

/// Result of a ζ engine run with budget `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ZetaOutcome {
    /// ζ(A), known to be at most the budget.
    Zeta(u64),
    /// ζ(A) exceeds the budget, or A is singular.
    InfiniteBeyond(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("engines disagree: {0}")]
    Disagreement(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
