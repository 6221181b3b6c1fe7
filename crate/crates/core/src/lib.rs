//! Exact construction and verification of the Euclidean tight 6-design on 2300 points in
//! R^22 obtained from two coset shells of the Leech lattice, together with its coherent
//! configuration, the uniqueness search for its outer layer, and the associated spherical
//! tight 7-design on 4600 points in R^23.

pub mod arith;
pub mod coherent;
pub mod construct;
pub mod design;
pub mod lattice;
pub mod registry;
pub mod report;
pub mod unique;
pub mod verify;
