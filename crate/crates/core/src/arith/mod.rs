//! Exact arithmetic over Q and the biquadratic field Q(√5, √11).

mod linalg;
mod rational;
mod scalar;

pub use linalg::{determinant, inverse, mat_vec, rational_linear_solve, RationalMatrix};
pub use rational::Rational;
pub use scalar::ExactScalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cannot parse exact value from {0:?}")]
    Parse(String),
}
