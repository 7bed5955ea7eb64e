use serde::Serialize;

use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::{Error, Result};
use crate::latmod::fqlin::{rank, rref};
use crate::latmod::{quotient_length, FMatrix, Lattice};

/// A periodic lattice chain L_0 ⊋ L_1 ⊋ ... ⊋ L_{e-1} ⊋ t L_0, extended by
/// L_{k+e} = t L_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeChain {
    lattices: Vec<Lattice>,
}

/// The invariants (d, e, p) of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainInvariants {
    pub d: Vec<usize>,
    pub e: usize,
    pub p: usize,
}

impl LatticeChain {
    /// Checks strictness over one period, including L_{e-1} ⊋ t L_0.
    pub fn new(lattices: Vec<Lattice>) -> Result<Self> {
        let Some(first) = lattices.first() else {
            return Err(Error::Invalid("a chain needs at least one lattice".into()));
        };
        let e = lattices.len();
        for k in 0..e {
            let a = &lattices[k];
            let b = if k + 1 < e { lattices[k + 1].clone() } else { first.scale(1) };
            if a.dim() != b.dim() || a == &b || !a.contains(&b)? {
                return Err(Error::Invalid(format!("lattices {k} and {} do not form a strict step", k + 1)));
            }
        }
        Ok(LatticeChain { lattices })
    }
    /// The standard chain with d-sequence `d`: L_k = t o^{s_k} ⊕ o^{n - s_k}
    /// where s_k = d_0 + ... + d_{k-1}.
    pub fn standard(field: &FiniteField, d: &[usize]) -> Result<Self> {
        if d.is_empty() || d.contains(&0) {
            return Err(Error::BadComposition(format!("{d:?} is not a composition")));
        }
        let n: usize = d.iter().sum();
        let mut s = 0;
        let mut lattices = Vec::with_capacity(d.len());
        for &dk in d {
            let exps: Vec<i64> = (0..n).map(|i| i64::from(i < s)).collect();
            lattices.push(Lattice::diagonal(field, &exps));
            s += dk;
        }
        Ok(LatticeChain { lattices })
    }
    /// The chain through the classes of a set of lattices, starting at the
    /// class of `classes[0]`. Fails if the classes are not totally ordered.
    pub fn from_classes(classes: &[Lattice]) -> Result<Self> {
        let Some(l0) = classes.first() else {
            return Err(Error::Invalid("empty class set".into()));
        };
        let tl0 = l0.scale(1);
        let mut reps = vec![(0u64, l0.clone())];
        for m in &classes[1..] {
            let r = rep_below(l0, m)?;
            if !r.contains(&tl0)? || r == *l0 {
                return Err(Error::Invalid("classes do not form a chain".into()));
            }
            reps.push((quotient_length(l0, &r)?, r));
        }
        reps.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        LatticeChain::new(reps.into_iter().map(|(_, l)| l).collect())
    }

    pub fn period(&self) -> usize {
        self.lattices.len()
    }
    pub fn dim(&self) -> usize {
        self.lattices[0].dim()
    }
    pub fn field(&self) -> &FiniteField {
        self.lattices[0].field()
    }
    pub fn lattices(&self) -> &[Lattice] {
        &self.lattices
    }
    /// L_k for any integer k.
    pub fn lattice(&self, k: i64) -> Lattice {
        let e = self.period() as i64;
        self.lattices[k.rem_euclid(e) as usize].scale(k.div_euclid(e))
    }
    pub fn d_sequence(&self) -> Vec<usize> {
        (0..self.period() as i64)
            .map(|k| (self.lattice(k + 1).det_valuation() - self.lattice(k).det_valuation()) as usize)
            .collect()
    }
    pub fn invariants(&self) -> ChainInvariants {
        let d = self.d_sequence();
        let e = d.len();
        let p = least_period(&d);
        ChainInvariants { d, e, p }
    }
    /// The chain g L_0 ⊋ g L_1 ⊋ ...
    pub fn transform(&self, g: &FMatrix) -> Result<Self> {
        let lattices = self.lattices.iter().map(|l| l.apply(g)).collect::<Result<_>>()?;
        Ok(LatticeChain { lattices })
    }
    /// Re-indexes so that L_k becomes L_0.
    pub fn reindex(&self, k: i64) -> Self {
        LatticeChain { lattices: (0..self.period() as i64).map(|i| self.lattice(i + k)).collect() }
    }
    /// Homothety-normalized class representatives, sorted and deduplicated.
    pub fn classes(&self) -> Vec<Lattice> {
        let mut out: Vec<Lattice> = self.lattices.iter().map(Lattice::homothety_normalize).collect();
        out.sort();
        out.dedup();
        out
    }
    /// Index of `l` in the extended chain, if it occurs.
    pub fn index_of(&self, l: &Lattice) -> Result<Option<i64>> {
        let e = self.period() as i64;
        let shift = l.det_valuation() - self.lattices[0].det_valuation();
        // det valuations increase by n per period.
        let n = self.dim() as i64;
        let base = shift.div_euclid(n) * e;
        for k in base - e..=base + e {
            if self.lattice(k) == *l {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// A basis (b_i) of L_0 adapted to the chain, with its inverse: L_k is
/// spanned by t b_i for i < s_k and b_i for i >= s_k, s_k = d_0 + ... + d_{k-1}.
pub fn adapted_basis(c: &LatticeChain) -> Result<(FMatrix, FMatrix)> {
    let f = c.field().clone();
    let l0 = &c.lattices[0];
    let n = c.dim();
    let e = c.period();
    // W_k = L_k / t L_0 inside L_0 / t L_0, in coordinates of the basis of L_0.
    let residues = |k: usize| -> Result<Vec<Vec<u32>>> {
        c.lattices[k]
            .basis_columns()
            .iter()
            .map(|col| Ok(l0.coordinates(col)?.iter().map(|x| x.coeff_code(0)).collect()))
            .collect()
    };
    let mut blocks: Vec<Vec<Vec<u32>>> = vec![Vec::new(); e];
    let mut span: Vec<Vec<u32>> = Vec::new();
    for k in (0..e).rev() {
        let (w, _) = rref(&f, residues(k)?);
        for v in w {
            let mut trial = span.clone();
            trial.push(v.clone());
            if rank(&f, trial) > span.len() {
                span.push(v.clone());
                blocks[k].push(v);
            }
        }
    }
    let cols: Vec<Vec<u32>> = blocks.into_iter().flatten().collect();
    debug_assert_eq!(cols.len(), n);
    let change = FMatrix::from_fn(&f, n, n, |i, j| LaurentSeries::monomial(&f, cols[j][i], 0));
    let g = l0.basis().mul(&change)?;
    let g_inv = change.inverse_exact()?.mul(&l0.basis().inverse_exact()?)?;
    Ok((g, g_inv))
}

/// t^k m for the unique k with t^k m ⊆ l0 and t^k m ⊄ t l0.
pub(crate) fn rep_below(l0: &Lattice, m: &Lattice) -> Result<Lattice> {
    let coords = m.basis_columns().iter().map(|c| l0.coordinates(c)).collect::<Result<Vec<_>>>()?;
    let v = coords.iter().flatten().filter_map(|x| x.val_lower_bound()).min().ok_or(Error::SingularMatrix)?;
    Ok(m.scale(-v))
}

/// Least positive period of a cyclic sequence.
pub fn least_period<T: PartialEq>(d: &[T]) -> usize {
    let e = d.len();
    (1..=e).find(|&p| e.is_multiple_of(p) && (0..e).all(|i| d[i] == d[(i + p) % e])).unwrap_or(e)
}

/// Lexicographically least rotation.
pub fn min_rotation<T: Ord + Clone>(d: &[T]) -> Vec<T> {
    (0..d.len().max(1))
        .map(|s| d.iter().cycle().skip(s).take(d.len()).cloned().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

pub fn chain_invariants(c: &LatticeChain) -> ChainInvariants {
    c.invariants()
}

/// Chains are conjugate under GL_n(F) iff their d-sequences agree up to a
/// cyclic shift.
pub fn are_conjugate(c1: &LatticeChain, c2: &LatticeChain) -> bool {
    c1.dim() == c2.dim()
        && c1.period() == c2.period()
        && min_rotation(&c1.d_sequence()) == min_rotation(&c2.d_sequence())
}
