//! Dense polynomials over a prime field F_p, coefficients stored low degree first.
//!
//! Only what field construction needs: products, division with remainder,
//! the extended Euclidean algorithm and an irreducibility test by trial
//! division.

pub(crate) type FpPoly = Vec<u64>;

pub(crate) fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, c) in out.iter_mut().enumerate() {
        *c = (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, c) in out.iter_mut().enumerate() {
        *c = (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut rem: FpPoly = a.to_vec();
    trim(&mut rem);
    let mut quot = vec![0; rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = rem[dr] * lead_inv % p;
        let shift = dr - db;
        quot[shift] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            rem[shift + j] = (rem[shift + j] + p - c * bj % p) % p;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub(crate) fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], vec![]);
    let (mut t0, mut t1): (FpPoly, FpPoly) = (vec![], vec![1]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(d) = degree(&r0) {
        let c = inv_mod(r0[d], p);
        let scale = |v: &FpPoly| -> FpPoly {
            let mut out: FpPoly = v.iter().map(|x| x * c % p).collect();
            trim(&mut out);
            out
        };
        (scale(&r0), scale(&s0), scale(&t0))
    } else {
        (r0, s0, t0)
    }
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `code` (least significant digit = constant term).
pub(crate) fn monic_from_code(code: u64, deg: usize, p: u64) -> FpPoly {
    let mut out = Vec::with_capacity(deg + 1);
    let mut c = code;
    for _ in 0..deg {
        out.push(c % p);
        c /= p;
    }
    out.push(1);
    out
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(deg) = degree(f) else { return false };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let g = monic_from_code(code, d, p);
            let (_, r) = divrem(f, &g, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `k` over F_p with the smallest
/// code, where the code reads the non-leading coefficients as base-p digits
/// with the degree `k-1` coefficient most significant.
pub fn find_irreducible(p: u64, k: usize) -> Vec<u64> {
    assert!(k >= 1, "degree must be positive");
    let limit = p.pow(k as u32);
    for code in 0..limit {
        let f = monic_from_code(code, k, p);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
