use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::fqlin::{all_subspaces, projective_points, rref};
use super::lattice::{quotient_length, Lattice};
use crate::coeffring::LaurentSeries;
use crate::error::{Error, Result};

/// Largest quotient length accepted by [`enumerate_lattices_between`].
pub const MAX_ENUMERATION_LENGTH: u64 = 8;

/// Every lattice M with low ⊆ M ⊆ high, sorted by canonical encoding.
pub fn enumerate_lattices_between(low: &Lattice, high: &Lattice) -> Result<Vec<Lattice>> {
    let len = quotient_length(high, low)?;
    if len > MAX_ENUMERATION_LENGTH {
        return Err(Error::TooLarge { what: "quotient length", size: len, limit: MAX_ENUMERATION_LENGTH });
    }
    if low.contains(&high.scale(1))? {
        between_killed_by_t(low, high)
    } else {
        by_covers(low, high)
    }
}

/// Residue-field coordinates of `v` in the basis of `m` (v must lie in m).
fn residue_coords(m: &Lattice, v: &[LaurentSeries]) -> Result<Vec<u32>> {
    Ok(m.coordinates(v)?.iter().map(|c| c.coeff_code(0)).collect())
}

/// Lifts a residue vector through the basis of `m`.
fn lift(m: &Lattice, v: &[u32]) -> Vec<LaurentSeries> {
    let f = m.field();
    let n = m.dim();
    (0..n)
        .map(|i| {
            let mut acc = LaurentSeries::zero(f);
            for (j, &c) in v.iter().enumerate() {
                if c != 0 {
                    acc = acc.add(&m.entry(i, j).scale_code(c)).unwrap();
                }
            }
            acc
        })
        .collect()
}

/// When t·high ⊆ low the quotient is an F_q-vector space: intermediate
/// lattices are low + (lifts of a subspace of a complement of low/t·high).
fn between_killed_by_t(low: &Lattice, high: &Lattice) -> Result<Vec<Lattice>> {
    let f = high.field();
    let n = high.dim();
    let rows = low.basis_columns().iter().map(|c| residue_coords(high, c)).collect::<Result<Vec<_>>>()?;
    let (_, pivots) = rref(f, rows);
    let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let subspaces = all_subspaces(f, complement.len());
    let low_cols = low.basis_columns();
    let mut out = subspaces
        .par_iter()
        .map(|basis| {
            let mut cols = low_cols.clone();
            for row in basis {
                let mut v = vec![0u32; n];
                for (&c, &x) in complement.iter().zip(row) {
                    v[c] = x;
                }
                cols.push(lift(high, &v));
            }
            Lattice::from_columns(f, n, &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Breadth-first search through covering relations M ⊂ M + o·x, where x
/// runs over lines of the socle (t^{-1}M ∩ high)/M.
fn by_covers(low: &Lattice, high: &Lattice) -> Result<Vec<Lattice>> {
    let mut seen: HashSet<Lattice> = HashSet::from([low.clone()]);
    let mut frontier = vec![low.clone()];
    while !frontier.is_empty() {
        let next: Vec<Vec<Lattice>> = frontier.par_iter().map(|m| covers_within(m, high)).collect::<Result<_>>()?;
        frontier = Vec::new();
        for m in next.into_iter().flatten() {
            if seen.insert(m.clone()) {
                frontier.push(m);
            }
        }
    }
    Ok(seen.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
}

fn covers_within(m: &Lattice, high: &Lattice) -> Result<Vec<Lattice>> {
    let f = m.field();
    let n = m.dim();
    let up = m.scale(-1);
    let socle = up.intersection(high)?;
    if socle == *m {
        return Ok(Vec::new());
    }
    let rows = socle.basis_columns().iter().map(|c| residue_coords(&up, c)).collect::<Result<Vec<_>>>()?;
    let (basis, _) = rref(f, rows);
    let m_cols = m.basis_columns();
    projective_points(f, basis.len())
        .into_iter()
        .map(|c| {
            let mut v = vec![0u32; n];
            for (row, &ci) in basis.iter().zip(&c) {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(ci, y));
                }
            }
            let mut cols = m_cols.clone();
            cols.push(lift(&up, &v));
            Lattice::from_columns(f, n, &cols)
        })
        .collect()
}
