//! Iterated complexifications: Segre chains, the maps `Ṽ` and `V`, the
//! determinant `δ` with its vanishing order, and the inversion of `V`.

pub mod chain;
pub mod delta;
pub mod invert;
pub mod vmap;

pub use chain::{reflection_identity_check, segre_chain, SegreChain};
pub use delta::{delta_and_eta0, DeltaData};
pub use invert::{invert_v, invert_v_at, lemma, Inverse};
pub use vmap::{build_v, VMap};

use thiserror::Error;

use crate::manifold::ModelError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SegreError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("series failure: {0}")]
    Series(#[from] SeriesError),
    #[error("budget: {0}")]
    Budget(String),
    #[error("type/truncation budget too small: {0}")]
    Rank(String),
}

pub type Result<T> = std::result::Result<T, SegreError>;
