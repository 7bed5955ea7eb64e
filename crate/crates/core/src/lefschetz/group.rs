use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::building::{adapted_basis, apartment_coords, least_period, LatticeChain, SimplexX};
use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::{Error, Result};
use crate::latmod::{FMatrix, Lattice};
use crate::tower::{j_embed, ChainOverFloor, TowerField};

/// An invertible matrix over F with its determinant valuation.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    m: FMatrix,
    det_val: i64,
}

impl GroupElement {
    /// Fails with SingularMatrix, or PrecisionExhausted when the
    /// determinant's leading term is not certified.
    pub fn new(m: FMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("group elements are square".into()));
        }
        let det_val = Lattice::from_generators(&m)?.det_valuation();
        Ok(GroupElement { m, det_val })
    }
    pub fn identity(f: &FiniteField, n: usize) -> Self {
        GroupElement { m: FMatrix::identity(f, n), det_val: 0 }
    }
    pub fn matrix(&self) -> &FMatrix {
        &self.m
    }
    pub fn dim(&self) -> usize {
        self.m.rows()
    }
    pub fn det_valuation(&self) -> i64 {
        self.det_val
    }
    /// det(g) is a unit.
    pub fn in_g0(&self) -> bool {
        self.det_val == 0
    }
    pub fn prec(&self) -> Option<i64> {
        self.m.prec()
    }
    pub fn mul(&self, o: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement { m: self.m.mul(&o.m)?, det_val: self.det_val + o.det_val })
    }
    pub fn apply_lattice(&self, l: &Lattice) -> Result<Lattice> {
        l.apply(&self.m)
    }
    pub fn apply_simplex(&self, s: &SimplexX) -> Result<SimplexX> {
        s.apply(&self.m)
    }
    /// {"n": n, "entries": [[row of series texts], ...]}.
    pub fn to_json(&self) -> Value {
        let n = self.m.rows();
        let rows: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| self.m.get(i, j).to_text('t')).collect()).collect();
        json!({ "n": n, "entries": rows })
    }
    pub fn from_json(f: &FiniteField, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("group element must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| *k != "n" && *k != "entries") {
            return Err(Error::Parse(format!("unknown field {k:?}")));
        }
        let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing n".into()))? as usize;
        let rows =
            obj.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing entries".into()))?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch(format!("{} rows for n = {n}", rows.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == n).ok_or_else(|| Error::Parse("bad row".into()))?;
            for x in r {
                let s = x.as_str().ok_or_else(|| Error::Parse("entries are strings".into()))?;
                data.push(LaurentSeries::parse(f, s, 't')?);
            }
        }
        Self::new(FMatrix::new(f, n, n, data)?)
    }
}

/// g = z·u with z = s_E^a Π^b (Π the E-linear element shifting the o_E-chain
/// by its least period) and u fixing every lattice of the chain.
#[derive(Clone, Debug)]
pub struct NormalizerDecomposition {
    pub shift: i64,
    pub s_power: i64,
    pub pi_power: usize,
    pub z: FMatrix,
    pub u: GroupElement,
}

/// Π for an o_E-chain: with an adapted basis b, b_i ↦ b_{i+s_p}, wrapping
/// around with a factor of the uniformizer. Returns (Π, Π^{-1}).
pub fn chain_shift_element(c: &LatticeChain) -> Result<(FMatrix, FMatrix)> {
    let f = c.field().clone();
    let n = c.dim();
    let d = c.d_sequence();
    let sp: usize = d[..least_period(&d)].iter().sum();
    let (g, g_inv) = adapted_basis(c)?;
    let pi = FMatrix::from_fn(&f, n, n, |i, j| {
        let target = j + sp;
        if target % n == i {
            LaurentSeries::monomial(&f, 1, (target / n) as i64)
        } else {
            LaurentSeries::zero(&f)
        }
    });
    let pi_inv = FMatrix::from_fn(&f, n, n, |i, j| {
        let target = i + sp;
        if target % n == j {
            LaurentSeries::monomial(&f, 1, -((target / n) as i64))
        } else {
            LaurentSeries::zero(&f)
        }
    });
    Ok((g.mul(&pi)?.mul(&g_inv)?, g.mul(&pi_inv)?.mul(&g_inv)?))
}

fn mat_pow(m: &FMatrix, k: usize) -> Result<FMatrix> {
    (0..k).try_fold(FMatrix::identity(m.field(), m.rows()), |acc, _| acc.mul(m))
}

pub fn normalizer_decompose(g: &GroupElement, ce: &ChainOverFloor, tw: &TowerField) -> Result<NormalizerDecomposition> {
    let (chain, _) = j_embed(tw, ce)?;
    let image0 = g.apply_lattice(&chain.lattice(0))?;
    let shift = chain.index_of(&image0)?.ok_or(Error::NotNormalizing)?;
    for k in 1..chain.period() as i64 {
        if g.apply_lattice(&chain.lattice(k))? != chain.lattice(k + shift) {
            return Err(Error::NotNormalizing);
        }
    }
    let eb = ce.chain.period() as i64;
    let pb = least_period(&ce.chain.d_sequence()) as i64;
    let r = shift.rem_euclid(eb);
    if r % pb != 0 {
        return Err(Error::NotNormalizing);
    }
    let (a, b) = (shift.div_euclid(eb), (r / pb) as usize);
    let re = tw.residue(ce.floor)?;
    let m = ce.chain.dim();
    let s_pow = |k: i64| FMatrix::identity(re, m).shift(k);
    let (z_e, z_inv_e) = if b == 0 {
        (s_pow(a), s_pow(-a))
    } else {
        let (pi, pi_inv) = chain_shift_element(&ce.chain)?;
        (s_pow(a).mul(&mat_pow(&pi, b)?)?, mat_pow(&pi_inv, b)?.mul(&s_pow(-a))?)
    };
    let z = tw.restrict_matrix(ce.floor, &z_e)?;
    let z_inv = tw.restrict_matrix(ce.floor, &z_inv_e)?;
    let u = GroupElement::new(z_inv.mul(g.matrix())?)?;
    for k in 0..chain.period() as i64 {
        if u.apply_lattice(&chain.lattice(k))? != chain.lattice(k) {
            return Err(Error::NotNormalizing);
        }
    }
    Ok(NormalizerDecomposition { shift, s_power: a, pi_power: b, z, u })
}

/// The exact polynomial lift of x modulo t^prec.
fn lift_mod(x: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    if x.is_zero() {
        return Ok(LaurentSeries::zero(x.field()));
    }
    let v = x.valuation()?;
    let keep = (prec - v).clamp(0, x.codes().len() as i64) as usize;
    Ok(LaurentSeries::from_codes(x.field(), v, x.codes()[..keep].to_vec(), None))
}

/// Elementary and diagonal generators of the parahoric subgroup U(A) of a
/// chain, modulo t^prec: E_ij(c t^k) for c in an F_p-basis of F_q and
/// k from the least allowed exponent up to prec - 1, and diag(ω at i) for a
/// generator ω of F_q^×.
pub fn parahoric_generators(c: &LatticeChain, prec: i64) -> Result<Vec<GroupElement>> {
    let f = c.field().clone();
    let n = c.dim();
    let d = c.d_sequence();
    let block: Vec<usize> = d.iter().enumerate().flat_map(|(b, &dk)| std::iter::repeat_n(b, dk)).collect();
    let (g, g_inv) = adapted_basis(c)?;
    let basis: Vec<u32> = (0..f.k()).map(|r| f.pow(f.generator().code(), r as i64).unwrap()).collect();
    let mut gens = Vec::new();
    let conj = |m: FMatrix| -> Result<GroupElement> { GroupElement::new(g.mul(&m)?.mul(&g_inv)?) };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k0 = i64::from(block[i] < block[j]);
            for k in k0..prec.max(k0 + 1) {
                for &cc in &basis {
                    let mut e = FMatrix::identity(&f, n);
                    e.set(i, j, LaurentSeries::monomial(&f, cc, k));
                    gens.push(conj(e)?);
                }
            }
        }
    }
    if f.order() > 2 {
        for i in 0..n {
            let mut e = FMatrix::identity(&f, n);
            e.set(i, i, LaurentSeries::monomial(&f, f.primitive(), 0));
            gens.push(conj(e)?);
        }
    }
    Ok(gens)
}

/// Closure of {s} under the generators, each replaced by its polynomial lift
/// modulo t^prec.
pub fn orbit_bfs(generators: &[GroupElement], s: &SimplexX, prec: i64, guard: usize) -> Result<BTreeSet<SimplexX>> {
    let lifts: Vec<FMatrix> = generators
        .iter()
        .map(|g| {
            let m = g.matrix();
            let data = m.entries().iter().map(|x| lift_mod(x, prec)).collect::<Result<Vec<_>>>()?;
            FMatrix::new(m.field(), m.rows(), m.cols(), data)
        })
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::from([s.clone()]);
    let mut frontier = vec![s.clone()];
    while !frontier.is_empty() {
        let images: Vec<SimplexX> =
            frontier.par_iter().flat_map_iter(|x| lifts.iter().map(move |g| x.apply(g))).collect::<Result<_>>()?;
        frontier = Vec::new();
        for y in images {
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
        if seen.len() > guard {
            return Err(Error::GuardExceeded(format!("orbit exceeds {guard} simplices")));
        }
    }
    Ok(seen)
}

/// Members of the orbit lying in the apartment of the basis columns.
pub fn orbit_apartment_intersection(orbit: &BTreeSet<SimplexX>, basis: &FMatrix) -> Result<Vec<SimplexX>> {
    let mut out = Vec::new();
    for s in orbit {
        match apartment_coords(s, basis) {
            Ok(_) => out.push(s.clone()),
            Err(Error::NotInApartment) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
