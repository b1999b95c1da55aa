//! Model ingestion and the geometry primitives built on it: tangential
//! fields, normal coordinates and approximate straightening of holomorphic
//! distributions.

pub mod fields;
pub mod model;
pub mod normal;
pub mod parse;
pub mod straighten;

pub use fields::{tangential_fields, CRFieldBasis, VectorField};
pub use model::{conj_swap, ManifoldModel};
pub use normal::{normal_coordinates, NormalForm};
pub use parse::{parse_model, ParseError};
pub use straighten::{straighten_approx, StraightenError, Straightened};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("bad dimensions: {0}")]
    Dimensions(String),
    #[error("not real: {0}")]
    NotReal(String),
    #[error("not generic: {0}")]
    NotGeneric(String),
    #[error("base point not on the manifold: {0}")]
    NotOnManifold(String),
    #[error("truncation budget exhausted: {0}")]
    Budget(String),
    #[error("series failure: {0}")]
    Series(String),
}

impl From<crate::series::SeriesError> for ModelError {
    fn from(e: crate::series::SeriesError) -> Self {
        ModelError::Series(e.to_string())
    }
}
