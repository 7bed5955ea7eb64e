//! Lattices in F^n and linear algebra over o = F_q[[t]].

mod enumerate;
pub(crate) mod fqlin;
mod hnf;
mod lattice;
mod matrix;

pub use enumerate::{enumerate_lattices_between, MAX_ENUMERATION_LENGTH};
pub use lattice::{hermite_normal_form, lattice_ops, quotient_length, Lattice, LatticeOp, LatticeValue};
pub use matrix::FMatrix;
