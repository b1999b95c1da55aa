//! Command-line front end: the model catalog, the subcommands and their
//! reports.

pub mod catalog;
pub mod commands;
pub mod report;

pub use catalog::{catalog, check_entry, find_entry, Annotation, AnnotationCheck, CatalogEntry};
pub use commands::{
    analyze, load_model, parametrize, reconstruct, segre, segre_chain_report, AnalyzeReport, ParametrizeArtifact, SegreReport,
};
pub use report::{render, Format, SCHEMA_VERSION};

use thiserror::Error;

use crate::invariants::InvariantError;
use crate::manifold::ModelError;
use crate::reflection::ReflectionError;
use crate::segre::SegreError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("model invalid: {0}")]
    Model(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("{stage}: {message}")]
    Math { stage: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Math { .. } => 4,
        }
    }

    pub fn math(stage: &str, message: impl ToString) -> Self {
        CliError::Math { stage: stage.into(), message: message.to_string() }
    }

    pub fn from_model(e: ModelError) -> Self {
        match e {
            ModelError::Budget(m) => CliError::Budget(m),
            ModelError::Series(m) => CliError::math("model", m),
            other => CliError::Model(other.to_string()),
        }
    }

    pub fn from_invariant(stage: &str, e: InvariantError) -> Self {
        match e {
            InvariantError::Model(m) => Self::from_model(m),
            InvariantError::Budget(m) => CliError::Budget(format!("{stage}: {m}")),
            other => CliError::math(stage, other),
        }
    }

    pub fn from_segre(stage: &str, e: SegreError) -> Self {
        match e {
            SegreError::Model(m) => Self::from_model(m),
            SegreError::Budget(m) | SegreError::Rank(m) => CliError::Budget(format!("{stage}: {m}")),
            other => CliError::math(stage, other),
        }
    }

    pub fn from_reflection(stage: &str, e: ReflectionError) -> Self {
        match e {
            ReflectionError::Model(m) => Self::from_model(m),
            ReflectionError::Invariant(m) => Self::from_invariant(stage, m),
            ReflectionError::Segre(m) => Self::from_segre(stage, m),
            ReflectionError::Budget(m) => CliError::Budget(format!("{stage}: {m}")),
            other => CliError::math(stage, other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Everything a subcommand needs. Defaults live in the binary's argument
/// parser; library callers fill this directly.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Source model, then optionally the target model. Each is a file path
    /// or a catalog name.
    pub models: Vec<String>,
    pub kappa: Option<u32>,
    pub l_max: u32,
    pub s: Option<usize>,
    pub k: Option<u32>,
    pub jet: Option<String>,
    pub system: Option<String>,
    /// Grid radius and spacing.
    pub grid: (String, String),
    pub step: String,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            models: Vec::new(),
            kappa: None,
            l_max: 6,
            s: None,
            k: None,
            jet: None,
            system: None,
            grid: ("1/10".into(), "1/20".into()),
            step: "1/1000".into(),
            tol: 1e-6,
            seed: 7,
            out: None,
            format: Format::Json,
        }
    }
}
