use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::simplex::SimplexX;
use crate::error::{Error, Result};
use crate::latmod::{FMatrix, Lattice};

/// A point of the apartment R^n / R(1, ..., 1) with rational coordinates.
#[derive(Clone, Debug)]
pub struct ApartmentPoint {
    coords: Vec<BigRational>,
}

impl ApartmentPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        ApartmentPoint { coords }
    }
    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
    /// Representative with first coordinate 0.
    pub fn normalized(&self) -> Vec<BigRational> {
        let c0 = self.coords.first().cloned().unwrap_or_else(BigRational::zero);
        self.coords.iter().map(|x| x - &c0).collect()
    }
    /// Squared Euclidean distance after projecting away the diagonal.
    pub fn dist_sq(&self, other: &ApartmentPoint) -> BigRational {
        let n = self.coords.len();
        let diff: Vec<BigRational> = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        let mean = diff.iter().fold(BigRational::zero(), |acc, x| acc + x) / BigRational::from_integer(BigInt::from(n));
        diff.iter().map(|x| (x - &mean) * (x - &mean)).fold(BigRational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq for ApartmentPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && self.normalized() == other.normalized()
    }
}
impl Eq for ApartmentPoint {}

/// Coordinates of each vertex of `s` in the apartment of the columns of
/// `basis`: the exponents a with L = ⊕ t^{a_i} o b_i.
pub fn apartment_coords(s: &SimplexX, basis: &FMatrix) -> Result<Vec<ApartmentPoint>> {
    let inv = match basis.inverse_exact() {
        Ok(inv) => inv,
        Err(Error::PrecisionExhausted(_)) => {
            let depth = s.classes().iter().map(Lattice::prec).max().unwrap_or(0);
            basis.inverse_to(depth + 8)?
        }
        Err(e) => return Err(e),
    };
    s.classes()
        .iter()
        .map(|l| {
            let m = l.apply(&inv)?;
            if !m.is_diagonal() {
                return Err(Error::NotInApartment);
            }
            Ok(ApartmentPoint::from_ints(m.diag()))
        })
        .collect()
}

/// The affine map x ↦ (x_i / e + μ_j)_{i, j}, with output index i·d + j
/// where d = number of offsets.
#[derive(Clone, Debug)]
pub struct AffineEmbedding {
    e: i64,
    offsets: Vec<BigRational>,
}

impl AffineEmbedding {
    pub fn apply(&self, x: &ApartmentPoint) -> ApartmentPoint {
        let e = BigRational::from_integer(BigInt::from(self.e));
        let coords = x
            .coords()
            .iter()
            .flat_map(|xi| {
                let base = xi / &e;
                self.offsets.iter().map(move |mu| &base + mu)
            })
            .collect();
        ApartmentPoint::new(coords)
    }
    /// Ratio of squared distances, d / e^2.
    pub fn scale_sq(&self) -> BigRational {
        BigRational::new(BigInt::from(self.offsets.len()), BigInt::from(self.e * self.e))
    }
}

pub fn embed_affine(e: i64, offsets: Vec<BigRational>) -> Result<AffineEmbedding> {
    if e < 1 || offsets.is_empty() {
        return Err(Error::Invalid("embed_affine needs e >= 1 and at least one offset".into()));
    }
    Ok(AffineEmbedding { e, offsets })
}
