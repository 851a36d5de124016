//! Exact fields, graded spaces, sparse multilinear maps, linear solving and
//! eigenspace decomposition.

pub mod eigen;
pub mod matrix;
pub mod multimap;
pub mod poly;
pub mod rat;
pub mod scalar;
pub mod solve;
pub mod space;
pub mod vector;

pub use eigen::{eigen_decompose, Eigenspace};
pub use matrix::Matrix;
pub use multimap::MultiMap;
pub use rat::Rat;
pub use scalar::{sign, Field, Scalar};
pub use solve::{solve_linear, LabeledSystem, LinearSystem, Solution};
pub use space::{BasisElement, BasisSpec, GradedSpace, Tuple};
pub use vector::Vector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("characteristic polynomial does not split over {field}: unresolved factor of degree {residual_degree}")]
    EigenvaluesOutsideField { field: Field, residual_degree: usize },
    #[error("{0}")]
    Invalid(String),
}
