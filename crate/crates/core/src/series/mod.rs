//! Exact truncated multivariate power series, Laurent expansions in one
//! variable, and the small amount of linear algebra the geometry needs.

mod coeff;
pub mod laurent;
pub mod linalg;
mod monomial;
mod trunc;

pub use coeff::{Coeff, GaussRational};
pub use laurent::{laurent_c0, laurent_c0_order_bound, LaurentSeries};
pub use linalg::{det_series, generic_rank, rank, solve_implicit, Matrix};
pub use monomial::{monomials_of_degree, monomials_up_to, Monomial, MAX_EXP, MAX_VARS};
pub use num_complex::Complex64;
pub use trunc::{var_names, TruncSeries, Vars, EXACT};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("substitution of a series with nonzero constant term into truncated series")]
    NonzeroConstant,
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("singular Jacobian at the origin")]
    SingularJacobian,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("inconsistent truncation: {0}")]
    Truncation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Vanishing order of a series along a line, or the statement that every
/// coefficient up to the truncation order vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum VanishingOrder {
    Finite(u32),
    BeyondTruncation,
}

impl VanishingOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(m) => Some(m),
            VanishingOrder::BeyondTruncation => None,
        }
    }
}
