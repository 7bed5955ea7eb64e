//! Field towers F ⊂ E ⊂ L over F_q((t)), restriction of scalars, the
//! embedding of the building of GL_m(E) into that of GL_n(F), and the
//! numerical tests describing X(E) and X[L].

mod field;
mod xl;

pub use field::{FloorSpec, TowerField};
pub use xl::{chamber_decomposition, vertex_label, xl_region, XLSimplex, XLVertex};

use crate::building::{ChainInvariants, LatticeChain, SimplexX};
use crate::error::{Error, Result};

/// A lattice chain over the integers of one floor of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOverFloor {
    pub floor: usize,
    pub chain: LatticeChain,
}

impl ChainOverFloor {
    pub fn new(tw: &TowerField, floor: usize, chain: LatticeChain) -> Result<Self> {
        if !chain.field().same_as(tw.residue(floor)?) {
            return Err(Error::FieldMismatch);
        }
        Ok(ChainOverFloor { floor, chain })
    }
}

/// The o_F-chain underlying an o_E-chain, with its simplex in X.
///
/// Over E the chain is M_0 ⊋ ... ⊋ M_{e_B - 1} ⊋ s M_0; over F the lattices
/// M_k for 0 <= k < e_B · e(E/F) are all distinct and t = s^{e(E/F)}.
pub fn j_embed(tw: &TowerField, c: &ChainOverFloor) -> Result<(LatticeChain, SimplexX)> {
    let period = c.chain.period() * tw.e(c.floor);
    let lattices =
        (0..period as i64).map(|k| tw.restrict_lattice(c.floor, &c.chain.lattice(k))).collect::<Result<Vec<_>>>()?;
    let chain = LatticeChain::new(lattices)?;
    let simplex = SimplexX::from_chain(&chain);
    Ok((chain, simplex))
}

/// f | d_k for all k and e | e(A)/p(A).
pub fn numerical_criterion(inv: &ChainInvariants, e: usize, f: usize) -> bool {
    inv.d.iter().all(|d| d % f == 0) && (inv.e / inv.p).is_multiple_of(e)
}

/// Whether the simplex of `c` lies in X(E) for E = floor 1 of the tower
/// (up to conjugacy). A tower without floors gives E = F.
pub fn criterion_xe(tw: &TowerField, c: &LatticeChain) -> bool {
    criterion_xe_at(tw, tw.top().min(1), c)
}

pub fn criterion_xe_at(tw: &TowerField, floor: usize, c: &LatticeChain) -> bool {
    numerical_criterion(&c.invariants(), tw.e(floor), tw.f(floor))
}

/// Whether the simplex of an o_E-chain lies in X[L] for L/E unramified of
/// degree n_E / e_param.
pub fn support_xl(c: &ChainOverFloor, e_param: usize) -> Result<bool> {
    let n = c.chain.dim();
    if e_param == 0 || e_param > n || !n.is_multiple_of(e_param) {
        return Err(Error::BadPeriod { period: e_param, n });
    }
    let f = n / e_param;
    Ok(c.chain.d_sequence().iter().all(|d| d % f == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::FiniteField;
    use crate::latmod::{quotient_length, Lattice};

    fn tower(q: u64, e: usize, f: usize) -> TowerField {
        TowerField::new(&FiniteField::with_order(q).unwrap(), vec![FloorSpec { e, f }], None).unwrap()
    }

    #[test]
    fn restriction_of_integers() {
        let tw = tower(3, 2, 1);
        let r = tw.residue(1).unwrap();
        let oe = Lattice::standard(r, 1);
        let a = tw.restrict_lattice(1, &oe).unwrap();
        assert_eq!(a, Lattice::standard(tw.base(), 2));
        let b = tw.restrict_lattice(1, &oe.scale(1)).unwrap();
        assert_eq!(quotient_length(&a, &b).unwrap(), 1);

        let tw = tower(2, 1, 2);
        let r = tw.residue(1).unwrap();
        let oe = Lattice::standard(r, 1);
        assert_eq!(tw.restrict_lattice(1, &oe).unwrap(), Lattice::standard(tw.base(), 2));
        assert_eq!(tw.restrict_lattice(1, &oe.scale(1)).unwrap(), Lattice::standard(tw.base(), 2).scale(1));
    }

    #[test]
    fn embedded_vertices() {
        let tw = tower(2, 2, 1);
        let v = LatticeChain::standard(tw.residue(1).unwrap(), &[1]).unwrap();
        let (c, s) = j_embed(&tw, &ChainOverFloor::new(&tw, 1, v.clone()).unwrap()).unwrap();
        assert_eq!(c.invariants().d, vec![1, 1]);
        assert!(s.is_chamber());

        let tw = tower(2, 1, 2);
        let v = LatticeChain::standard(tw.residue(1).unwrap(), &[1]).unwrap();
        let (c, s) = j_embed(&tw, &ChainOverFloor::new(&tw, 1, v).unwrap()).unwrap();
        assert_eq!(c.invariants().d, vec![2]);
        assert_eq!(s.num_vertices(), 1);
    }

    #[test]
    fn criterion_examples() {
        let tw = tower(2, 1, 2);
        let f = tw.base().clone();
        let ch = |d: &[usize]| LatticeChain::standard(&f, d).unwrap();
        assert!(criterion_xe(&tw, &ch(&[4])));
        assert!(!criterion_xe(&tw, &ch(&[1, 3])));
        assert!(criterion_xe(&tw, &ch(&[2, 2])));
        let trivial = TowerField::new(&f, vec![], None).unwrap();
        assert!(criterion_xe(&trivial, &ch(&[1, 3])));
    }

    #[test]
    fn support_examples() {
        let tw = tower(2, 1, 1);
        let f = tw.residue(1).unwrap().clone();
        let c = |d: &[usize]| ChainOverFloor::new(&tw, 1, LatticeChain::standard(&f, d).unwrap()).unwrap();
        assert!(support_xl(&c(&[2]), 1).unwrap());
        assert!(!support_xl(&c(&[1, 1]), 1).unwrap());
        assert!(support_xl(&c(&[1, 1]), 2).unwrap());
        assert!(matches!(support_xl(&c(&[1, 2]), 2), Err(Error::BadPeriod { .. })));
    }
}
