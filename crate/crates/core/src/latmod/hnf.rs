//! Column Hermite form over o = F_q[[t]], computed in (o/t^N)^n.
//!
//! After scaling into o^n, the generators are reduced modulo t^N and
//! column-reduced bottom-up with least-valuation pivots. The result is
//! accepted once t^{N-1} o^n is visibly inside the span of the triangular
//! basis; by Nakayama this forces the truncated span to equal the true one.
//! Otherwise N is doubled, up to the degree bound (exact input, beyond which
//! the matrix is singular) or the input precision (inexact input).

use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::{Error, Result};

use super::matrix::FMatrix;

type Trunc = Vec<u32>;

fn tval(a: &[u32]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// dst -= q * src, all modulo t^len.
fn sub_mul(f: &FiniteField, dst: &mut [u32], q: &[u32], src: &[u32]) {
    let n = dst.len();
    for (i, &qi) in q.iter().enumerate() {
        if qi == 0 {
            continue;
        }
        for (j, &s) in src.iter().enumerate().take(n - i) {
            if s != 0 {
                dst[i + j] = f.sub(dst[i + j], f.mul(qi, s));
            }
        }
    }
}

fn mul_trunc(f: &FiniteField, a: &[u32], b: &[u32], len: usize) -> Trunc {
    let mut out = vec![0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    out
}

/// Inverse of a unit power series modulo t^len.
fn unit_inv(f: &FiniteField, u: &[u32], len: usize) -> Trunc {
    let u0 = f.inv(u[0]).expect("unit has nonzero constant term");
    let mut w = vec![0; len];
    if len == 0 {
        return w;
    }
    w[0] = u0;
    for i in 1..len {
        let mut acc = 0;
        for j in 1..=i.min(u.len() - 1) {
            acc = f.add(acc, f.mul(u[j], w[i - j]));
        }
        w[i] = f.neg(f.mul(u0, acc));
    }
    w
}

/// Canonical basis data: diagonal exponents and exact entries above it.
pub(crate) struct Hermite {
    pub diag: Vec<i64>,
    /// `upper[i][j - i - 1]` is entry (i, j) for j > i.
    pub upper: Vec<Vec<LaurentSeries>>,
    /// Column transform, present when requested.
    pub transform: Option<FMatrix>,
}

struct Attempt {
    diag: Vec<usize>,
    cols: Vec<Vec<Trunc>>,
    transform: Option<Vec<Vec<Trunc>>>,
    /// -min valuation of H^{-1}
    inv_depth: i64,
}

/// Column-reduces the given generators (each of length `n`) of a full-rank
/// o-module in F^n.
pub(crate) fn hermite(field: &FiniteField, n: usize, gens: &[Vec<LaurentSeries>], track: bool) -> Result<Hermite> {
    if gens.len() < n {
        return Err(Error::SingularMatrix);
    }
    let entries = gens.iter().flatten();
    let m = entries.clone().filter_map(LaurentSeries::val_lower_bound).min().ok_or(Error::SingularMatrix)?;
    let inexact_limit = entries.clone().filter_map(LaurentSeries::prec).map(|p| p - m).min();
    let limit = match inexact_limit {
        Some(p) => p,
        None => {
            // Degree bound: a nonzero n x n minor has valuation at most the sum
            // of the n largest column degrees.
            let mut degs: Vec<i64> = gens
                .iter()
                .map(|c| c.iter().filter(|x| !x.is_zero()).map(|x| x.end() - 1 - m).max().unwrap_or(0))
                .collect();
            degs.sort_unstable_by(|a, b| b.cmp(a));
            degs.iter().take(n).sum::<i64>() + 1
        }
    };
    if limit <= 0 {
        return Err(Error::PrecisionExhausted("generators carry no integral information".into()));
    }
    let mut big_n = limit.min(8);
    loop {
        if let Some(att) = attempt(field, n, gens, m, big_n as usize, track)? {
            let mut att = att;
            if track && inexact_limit.is_none() {
                // Re-run so the transform is known to useful precision.
                let want = big_n.max(8) + att.inv_depth;
                if want > big_n {
                    big_n = want;
                    att = attempt(field, n, gens, m, big_n as usize, track)?.expect("certified at lower N");
                }
            }
            return Ok(finish(field, n, m, big_n, att, gens.len()));
        }
        if big_n >= limit {
            return Err(match inexact_limit {
                Some(_) => Error::PrecisionExhausted(format!(
                    "canonical form not certified with generators known modulo t^{}",
                    limit + m
                )),
                None => Error::SingularMatrix,
            });
        }
        big_n = (2 * big_n).min(limit);
    }
}

fn attempt(
    f: &FiniteField,
    n: usize,
    gens: &[Vec<LaurentSeries>],
    m: i64,
    big_n: usize,
    track: bool,
) -> Result<Option<Attempt>> {
    let k = gens.len();
    let mut cols: Vec<Vec<Trunc>> = gens
        .iter()
        .map(|c| c.iter().map(|x| (0..big_n).map(|e| x.coeff_code(e as i64 + m)).collect()).collect())
        .collect();
    let mut u: Option<Vec<Vec<Trunc>>> = track.then(|| {
        (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| {
                        let mut v = vec![0; big_n];
                        if i == j {
                            v[0] = 1;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    });
    let mut active: Vec<usize> = (0..k).collect();
    let mut pivot_of = vec![0usize; n];
    let mut diag = vec![0usize; n];
    for row in (0..n).rev() {
        let best = active.iter().enumerate().filter_map(|(pos, &c)| tval(&cols[c][row]).map(|v| (v, pos))).min();
        let Some((v, pos)) = best else {
            return Ok(None);
        };
        let pc = active.remove(pos);
        let inv_u = unit_inv(f, &cols[pc][row][v..], big_n - v);
        for &c in &active {
            let Some(w) = tval(&cols[c][row]) else { continue };
            debug_assert!(w >= v);
            let q = mul_trunc(f, &cols[c][row][v..], &inv_u, big_n - v);
            let src = cols[pc].clone();
            for (dst, s) in cols[c].iter_mut().zip(&src).take(row + 1) {
                sub_mul(f, dst, &q, s);
            }
            if let Some(u) = u.as_mut() {
                let src = u[pc].clone();
                for (dst, s) in u[c].iter_mut().zip(&src) {
                    sub_mul(f, dst, &q, s);
                }
            }
        }
        pivot_of[row] = pc;
        diag[row] = v;
    }
    // Normalize diagonals to exact powers of t.
    for i in 0..n {
        let c = pivot_of[i];
        let v = diag[i];
        let inv_u = unit_inv(f, &cols[c][i][v..], big_n - v);
        for x in cols[c].iter_mut() {
            *x = mul_trunc(f, x, &inv_u, big_n);
        }
        if let Some(u) = u.as_mut() {
            for x in u[c].iter_mut() {
                *x = mul_trunc(f, x, &inv_u, big_n);
            }
        }
    }
    // Reduce entries above the diagonal modulo t^{a_i}.
    for j in 0..n {
        let cj = pivot_of[j];
        for i in (0..j).rev() {
            let ci = pivot_of[i];
            let a = diag[i];
            let q: Trunc = cols[cj][i][a..].to_vec();
            if tval(&q).is_none() {
                continue;
            }
            let src = cols[ci].clone();
            for (dst, s) in cols[cj].iter_mut().zip(&src).take(i + 1) {
                sub_mul(f, dst, &q, s);
            }
            if let Some(u) = u.as_mut() {
                let src = u[ci].clone();
                for (dst, s) in u[cj].iter_mut().zip(&src) {
                    sub_mul(f, dst, &q, s);
                }
            }
        }
    }
    let basis: Vec<Vec<Trunc>> = pivot_of.iter().map(|&c| cols[c].clone()).collect();
    let depth = inverse_depth(f, n, &basis, &diag, big_n);
    if depth > big_n as i64 - 1 {
        return Ok(None);
    }
    let transform = u.map(|u| pivot_of.iter().map(|&c| u[c].clone()).collect());
    Ok(Some(Attempt { diag, cols: basis, transform, inv_depth: depth }))
}

/// -min valuation over the entries of H^{-1}, for H upper triangular with
/// diagonal t^{a_i}, by exact back substitution on Laurent polynomials.
fn inverse_depth(f: &FiniteField, n: usize, basis: &[Vec<Trunc>], diag: &[usize], big_n: usize) -> i64 {
    let entry = |i: usize, j: usize| -> LaurentSeries {
        let a = &basis[j][i];
        LaurentSeries::from_codes(f, 0, a[..big_n].to_vec(), None)
    };
    let mut depth = i64::MIN;
    // Column k of H^{-1}: solve H x = e_k.
    for k in 0..n {
        let mut x: Vec<LaurentSeries> = vec![LaurentSeries::zero(f); n];
        for i in (0..=k).rev() {
            let mut rhs = if i == k { LaurentSeries::one(f) } else { LaurentSeries::zero(f) };
            for (j, xj) in x.iter().enumerate().take(k + 1).skip(i + 1) {
                if !xj.is_zero() {
                    rhs = rhs.sub(&entry(i, j).mul(xj).unwrap()).unwrap();
                }
            }
            x[i] = rhs.shift(-(diag[i] as i64));
            if let Some(v) = x[i].val_lower_bound() {
                depth = depth.max(-v);
            }
        }
    }
    depth
}

fn finish(f: &FiniteField, n: usize, m: i64, big_n: i64, att: Attempt, k: usize) -> Hermite {
    let diag: Vec<i64> = att.diag.iter().map(|&a| a as i64 + m).collect();
    let upper = (0..n)
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let a = att.diag[i];
                    LaurentSeries::from_codes(f, m, att.cols[j][i][..a].to_vec(), None)
                })
                .collect()
        })
        .collect();
    let transform = att.transform.map(|u| {
        let prec = big_n - att.inv_depth;
        let cols: Vec<Vec<LaurentSeries>> = u
            .iter()
            .map(|col| col.iter().map(|x| LaurentSeries::from_codes(f, 0, x.clone(), Some(prec))).collect())
            .collect();
        debug_assert_eq!(cols.first().map_or(k, Vec::len), k);
        FMatrix::from_columns(f, &cols).expect("square transform")
    });
    Hermite { diag, upper, transform }
}
