//! Domains, lattice grids and the measure-theoretic classifiers that decide
//! which growth regime a field system falls into.

mod boundary;
mod condition_a;
mod domain;
mod grid;
mod measure;

pub use boundary::{characteristic_check, CharacteristicReport, CHARACTERISTIC_TOL};
pub use condition_a::{condition_a_integral, ConditionA, ConditionAOptions, Verdict};
pub use domain::{DomainJson, DomainSpec};
pub use grid::{build_grid, Grid};
pub use measure::{measure_h, HMeasure, HVerdict};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("empty interior: {0}")]
    EmptyInterior(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("domain has no level-set mask")]
    MissingMask,
    #[error("mask gradient vanishes at boundary sample {0:?}")]
    VanishingGradient(Vec<f64>),
    #[error("invalid domain: {0}")]
    Invalid(String),
}
