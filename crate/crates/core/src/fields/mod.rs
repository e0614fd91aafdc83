//! Symbolic algebra on polynomial-coefficient vector fields: Lie brackets,
//! commutator enumeration and the pointwise indices built from them.

mod coefficient;
mod commutators;
mod indices;
mod json;
pub mod linalg;
mod polynomial;
mod vector_field;

pub use coefficient::{Coefficient, CompiledCoefficient, Value};
pub use commutators::{enumerate_commutators, BasisEntry, CommutatorBasis};
pub use indices::{
    capital_lambda, capital_lambda_exact, lambda_i, metivier_condition_check, metivier_index, nu_via_determinants, point_indices,
    point_layers_f64, MetivierIndex, PointIndices,
};
pub use json::{field_system_from_json, field_system_to_json, polynomial_from_json, polynomial_to_json, FieldSystemJson, TermJson};
pub use polynomial::{format_rational, parse_rational, rational_from_decimal_f64, Polynomial, PolynomialF64};
pub use vector_field::{bracket, FieldSystem, VectorField};

pub(crate) use polynomial::rational_to_f64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field system: {0}")]
    Invalid(String),
    #[error("Hörmander condition fails at {point} within Q={q}")]
    HormanderFails { point: String, q: usize },
    #[error("coefficient is not polynomial")]
    NotPolynomial,
}
