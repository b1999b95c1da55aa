//! Pointwise invariants at the base point: Levi form, bracket filtration,
//! finite nondegeneracy of manifolds, maps and jets, nondegeneracy in
//! dimension one, and the order bounds derived from them.

pub mod bounds;
pub mod dim1;
pub mod hoermander;
pub mod levi;
pub mod nondeg;

pub use bounds::{bounds, Bounds};
pub use dim1::{nondeg_in_dimension_1, Dim1Report};
pub use hoermander::{hoermander_numbers, HoermanderData};
pub use levi::{levi_form, levi_nondegenerate, LeviForm};
pub use nondeg::{finite_nondegeneracy, jet_nondegeneracy, MapJet, NondegReport, Stabilization};

use thiserror::Error;

use crate::manifold::ModelError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("series failure: {0}")]
    Series(#[from] SeriesError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("jet does not send M into M' to order {required} (vanishes only to order {found})")]
    JetNotCR { required: u32, found: u32 },
    #[error("budget: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, InvariantError>;
