//! Exact jet computations for CR maps between generic submanifolds.

pub mod series;
pub mod manifold;
pub mod invariants;
pub mod segre;
pub mod reflection;
pub mod cli;
