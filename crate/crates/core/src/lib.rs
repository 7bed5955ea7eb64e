//! Lattice-chain models of the Bruhat-Tits building of GL_n over F_q((t)).

pub mod building;
pub mod chaincx;
pub mod coeffring;
pub mod error;
pub mod latmod;
pub mod lefschetz;
pub mod tower;

pub use chaincx::{QChainComplex, QMatrix, Rational, Zp, F2};
pub use error::{Error, Result};
