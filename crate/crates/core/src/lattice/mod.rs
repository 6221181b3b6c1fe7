//! The extended Golay code, the Leech lattice in the √8-scaled integer frame, and
//! enumeration of lattice vectors of a given norm inside constraint cosets.

pub mod fincke_pohst;
pub mod golay;
pub mod intmat;
pub mod io;
pub mod leech;
pub mod shell;

pub use golay::{build_golay, GolayCode};
pub use leech::{
    alternate_anchors, canonical_anchors, is_leech_member, leech_inner, validate_anchors, LatticeVector, LeechLattice,
    DIM,
};
pub use shell::{
    enumerate_coset_shell, shell_enumerators, shell_size, CosetConstraint, FinckePohstEnumerator, ShapeFilterEnumerator,
    ShellEnumerator,
};

use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("code construction failed: {0}")]
    BadCode(String),
    #[error("constraint system has no solution in the lattice")]
    Infeasible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid anchors: {0}")]
    Anchor(String),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("basis reduction failed: {0}")]
    Reduction(String),
    #[error("malformed point-set data: {0}")]
    Format(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
