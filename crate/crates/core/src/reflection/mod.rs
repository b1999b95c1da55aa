//! Reflection of map jets along Segre chains, the parametrization `Ψᵏ`
//! of maps by their jets, the complete system and reconstruction.

pub mod basic;
pub mod complete;
pub mod graded;
pub mod jet;
pub mod param;
pub mod reconstruct;
pub mod step;

pub use crate::invariants::MapJet;
pub use basic::{basic_reflection, fixed_point_check, ReflectionMap};
pub use complete::{CompleteSystem, RealChart, SystemSummary};
pub use jet::{check_cr_jet, CrCheck, JetFile};
pub use param::{extract_psi, iterate_reflection, normalize_parameter, parametrize, parametrize_jet, singular_parametrization, Kernel, Parametrization, Setup};
pub use reconstruct::{box_grid, jet_residual, reconstruct_map, Integrator, Sample};
pub use step::{reflect_step, Side};

use thiserror::Error;

use crate::invariants::InvariantError;
use crate::manifold::ModelError;
use crate::segre::SegreError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReflectionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("series failure: {0}")]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Segre(#[from] SegreError),
    #[error("span deficiency: {0}")]
    SpanDeficient(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("jet: {0}")]
    Jet(String),
    #[error("integration: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, ReflectionError>;
