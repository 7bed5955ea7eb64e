use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::building::LatticeChain;
use crate::error::{Error, Result};

fn q_factorial(n: usize, q: u64) -> BigInt {
    let q = BigInt::from(q);
    // [k]_q = 1 + q + ... + q^{k-1}
    (1..=n).fold(BigInt::one(), |acc, k| {
        let bracket: BigInt = (0..k).map(|i| Pow::pow(&q, i as u32)).sum();
        acc * bracket
    })
}

/// Number of flags of type `parts` in F_q^n; the ordinary multinomial at q = 1.
pub fn q_multinomial(n: usize, parts: &[usize], q: u64) -> Result<BigInt> {
    if parts.iter().sum::<usize>() != n {
        return Err(Error::BadComposition(format!("{parts:?} does not sum to {n}")));
    }
    if q == 0 {
        return Err(Error::Invalid("q must be positive".into()));
    }
    let den = parts.iter().fold(BigInt::one(), |acc, &d| acc * q_factorial(d, q));
    Ok(q_factorial(n, q) / den)
}

/// |GL_d(F_q)|.
pub fn gl_order(d: usize, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let qd: BigInt = Pow::pow(&q, d as u32);
    (0..d).fold(BigInt::one(), |acc, i| acc * (&qd - Pow::pow(&q, i as u32)))
}

/// |U(A) / U^m(A)| for a hereditary order with d-sequence `d`:
/// Π_k |GL_{d_k}(F_q)| times q^{Σ_k d_k d_{k+j}} for each 1 <= j < m.
pub fn parahoric_order(d: &[usize], q: u64, m: usize) -> Result<BigInt> {
    if d.is_empty() || d.contains(&0) {
        return Err(Error::BadComposition(format!("{d:?} is not a composition")));
    }
    if q < 2 || m == 0 {
        return Err(Error::Invalid("parahoric_order needs q >= 2 and m >= 1".into()));
    }
    let e = d.len();
    let levels: usize = (1..m).map(|j| (0..e).map(|k| d[k] * d[(k + j) % e]).sum::<usize>()).sum();
    let units = d.iter().fold(BigInt::one(), |acc, &dk| acc * gl_order(dk, q));
    Ok(units * Pow::pow(&BigInt::from(q), levels))
}

/// [U(A) : 1 + t^m M_n(o)] for the standard chain with d-sequence `d`,
/// read off the filtration of A at level e·m.
fn index_over_congruence(d: &[usize], q: u64, m: usize) -> Result<BigInt> {
    let e = d.len();
    // [M_n(o) : A] = q^{Σ_{i > j} d_i d_j}: the entries of A above the block
    // diagonal lie in t·o.
    let upper: usize = (0..e).map(|i| d[i] * d[i + 1..].iter().sum::<usize>()).sum();
    Ok(parahoric_order(d, q, e * m)? / Pow::pow(&BigInt::from(q), upper))
}

/// vol(U(A_1)) / vol(U(A_2)), each normalized by the common subgroup
/// 1 + t^m M_n(o) and checked to agree at m and m + 1.
pub fn relative_volume(c1: &LatticeChain, c2: &LatticeChain, q: u64) -> Result<BigRational> {
    relative_volume_of(&c1.d_sequence(), &c2.d_sequence(), q)
}

pub fn relative_volume_of(d1: &[usize], d2: &[usize], q: u64) -> Result<BigRational> {
    let (n1, n2): (usize, usize) = (d1.iter().sum(), d2.iter().sum());
    if n1 != n2 {
        return Err(Error::DimensionMismatch(format!("chains in dimensions {n1} and {n2}")));
    }
    let ratio = |m| -> Result<BigRational> {
        Ok(BigRational::new(index_over_congruence(d1, q, m)?, index_over_congruence(d2, q, m)?))
    };
    let (a, b) = (ratio(1)?, ratio(2)?);
    if a != b {
        return Err(Error::NotStabilized(format!("{a} at m = 1, {b} at m = 2")));
    }
    Ok(a)
}
