use std::fmt;

use rayon::prelude::*;

use super::{numerical_criterion, TowerField};
use crate::building::{Ball, LatticeChain, SimplexX};
use crate::error::{Error, Result};
use crate::latmod::{FMatrix, Lattice};

/// A vertex of X[L]: the o_F classes [M], [sM], ..., [s^{e-1}M] of one o_L
/// class, e = e(L/F). As an o_F-chain this is principal of period e.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XLVertex {
    classes: Vec<Lattice>,
}

/// A simplex of X[L], kept as its set of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XLSimplex {
    vertices: Vec<XLVertex>,
}

impl XLVertex {
    /// Checks the classes form a principal chain of period `e`.
    pub fn new(classes: Vec<Lattice>, e: usize) -> Result<Self> {
        let s = SimplexX::new(classes)?;
        let inv = s.chain().invariants();
        if inv.e != e || inv.p != 1 {
            return Err(Error::Invalid(format!("not a principal chain of period {e}: d = {:?}", inv.d)));
        }
        Ok(XLVertex { classes: s.classes().to_vec() })
    }
    pub fn classes(&self) -> &[Lattice] {
        &self.classes
    }
    pub fn as_simplex(&self) -> SimplexX {
        SimplexX::new(self.classes.clone()).expect("vertex classes form a chain")
    }
    pub fn apply(&self, g: &FMatrix) -> Result<XLVertex> {
        Ok(XLVertex { classes: self.as_simplex().apply(g)?.classes().to_vec() })
    }
}

impl XLSimplex {
    /// Reads an X-simplex as a simplex of X[L]; fails unless it passes the
    /// numerical test for (e, f) = (e(L/F), f(L/F)).
    pub fn from_simplex(s: &SimplexX, e: usize, f: usize) -> Result<Self> {
        // e(A) = number of vertices must be a multiple of e, and each d_k >= f.
        let k = s.num_vertices();
        if !k.is_multiple_of(e) || k * f > s.ambient_dim() {
            return Err(Error::Invalid(format!("a simplex with {k} vertices is not in X[L]")));
        }
        let chain = s.chain();
        let inv = chain.invariants();
        if !numerical_criterion(&inv, e, f) {
            return Err(Error::Invalid(format!("simplex with d = {:?} is not in X[L]", inv.d)));
        }
        let m = inv.e / e;
        let mut vertices: Vec<XLVertex> = (0..m)
            .map(|i| {
                let mut classes: Vec<Lattice> =
                    (0..e).map(|j| chain.lattice((i + j * m) as i64).homothety_normalize()).collect();
                classes.sort();
                XLVertex { classes }
            })
            .collect();
        vertices.sort();
        Ok(XLSimplex { vertices })
    }
    pub fn from_vertices(mut vertices: Vec<XLVertex>) -> Result<Self> {
        vertices.sort();
        vertices.dedup();
        let s = XLSimplex { vertices };
        SimplexX::new(s.underlying_classes())?;
        Ok(s)
    }
    pub fn vertices(&self) -> &[XLVertex] {
        &self.vertices
    }
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
    fn underlying_classes(&self) -> Vec<Lattice> {
        self.vertices.iter().flat_map(|v| v.classes.iter().cloned()).collect()
    }
    /// The simplex of X on the union of the class sets.
    pub fn underlying(&self) -> SimplexX {
        SimplexX::new(self.underlying_classes()).expect("XL simplex is an X simplex")
    }
    /// g·σ.
    pub fn translate(&self, g: &FMatrix) -> Result<XLSimplex> {
        let mut vertices = self.vertices.iter().map(|v| v.apply(g)).collect::<Result<Vec<_>>>()?;
        vertices.sort();
        Ok(XLSimplex { vertices })
    }
    pub fn is_face_of(&self, other: &XLSimplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.binary_search(v).is_ok())
    }
    /// Faces of codimension one, indexed by the missing vertex.
    pub fn facets(&self) -> Vec<XLSimplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| XLSimplex {
                vertices: self.vertices.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect(),
            })
            .collect()
    }
}

/// The chambers of X[L] contained in the chamber C of X, L the top floor.
pub fn chamber_decomposition(tw: &TowerField, c: &LatticeChain) -> Result<Vec<XLSimplex>> {
    let n = c.dim();
    let inv = c.invariants();
    if inv.e != n || inv.d.iter().any(|&d| d != 1) {
        return Err(Error::NotAChamber(format!("d = {:?}", inv.d)));
    }
    let top = tw.top();
    let (e, f) = (tw.e(top), tw.f(top));
    if !n.is_multiple_of(e * f) {
        return Err(Error::DimensionMismatch(format!("[L:F] = {} does not divide n = {n}", e * f)));
    }
    (0..f)
        .map(|g| {
            let sub = LatticeChain::new((0..n / f).map(|j| c.lattice((g + j * f) as i64)).collect())?;
            XLSimplex::from_simplex(&SimplexX::from_chain(&sub), e, f)
        })
        .collect()
}

/// Type of an X[L]-vertex: v_t(det M) mod n / e(L/F) for any representative M.
pub fn vertex_label(v: &XLVertex, tw: &TowerField) -> usize {
    let n = v.classes[0].dim();
    let modulus = (n / tw.e(tw.top())) as i64;
    v.classes[0].det_valuation().rem_euclid(modulus) as usize
}

/// All simplices of X[L] (L the top floor) whose vertices lie in the ball.
pub fn xl_region(ball: &Ball, tw: &TowerField) -> Vec<XLSimplex> {
    let top = tw.top();
    let (e, f) = (tw.e(top), tw.f(top));
    let mut out: Vec<XLSimplex> =
        ball.simplices().par_iter().filter_map(|s| XLSimplex::from_simplex(s, e, f).ok()).collect();
    out.sort();
    out
}

impl fmt::Debug for XLVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XLVertex{:?}", self.classes)
    }
}
impl fmt::Debug for XLSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}
