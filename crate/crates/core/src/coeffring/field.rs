use std::fmt;
use std::sync::Arc;

use super::poly::{self, FpPoly};
use crate::error::{Error, Result};

/// Largest field order with lookup tables.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u64 = 256;

/// The finite field F_{p^k} = F_p[a]/(m(a)), with `m` chosen by
/// [`find_irreducible`](super::find_irreducible).
///
/// Elements are encoded as `u32` codes: the base-p digits of the code are the
/// coefficients of the representing polynomial in `a`, constant term first.
/// The handle is cheap to clone and shares its tables.
#[derive(Clone)]
pub struct FiniteField(Arc<Tables>);

struct Tables {
    p: u64,
    k: usize,
    q: u64,
    modulus: FpPoly,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        let q = p.checked_pow(k as u32).filter(|&q| q <= MAX_FIELD_ORDER).ok_or(Error::TooLarge {
            what: "field order",
            size: u64::MAX,
            limit: MAX_FIELD_ORDER,
        })?;
        let modulus = poly::find_irreducible(p, k);
        Ok(FiniteField(Arc::new(Tables::build(p, k, q, modulus))))
    }

    /// F_q for a prime power q.
    pub fn with_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let (mut r, mut k) = (q, 0);
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::Invalid(format!("{q} is not a prime power")));
        }
        Self::new(p, k)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn k(&self) -> usize {
        self.0.k
    }
    pub fn order(&self) -> u64 {
        self.0.q
    }
    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn same_as(&self, other: &FiniteField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }

    pub fn elem(&self, code: u32) -> FFElem {
        assert!((code as u64) < self.0.q, "code out of range");
        FFElem { field: self.clone(), code }
    }
    pub fn zero(&self) -> FFElem {
        self.elem(0)
    }
    pub fn one(&self) -> FFElem {
        self.elem(1)
    }
    /// The class of `a` (the image of x in F_p[x]/(m)); equals 0 only when k = 1 and m = x.
    pub fn generator(&self) -> FFElem {
        let code = self.poly_to_code(&[0, 1]);
        self.elem(code)
    }
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.0.q as u32).map(move |c| self.elem(c))
    }
    /// A generator of the multiplicative group (the smallest code).
    pub fn primitive(&self) -> u32 {
        self.0.exp[if self.0.q == 2 { 0 } else { 1 }]
    }

    // Raw arithmetic on codes; callers guarantee codes belong to this field.

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let t = &self.0;
        if t.p == 2 {
            return a ^ b;
        }
        if let Some(tab) = &t.add {
            return tab[(a as usize) * (t.q as usize) + b as usize];
        }
        let (mut a, mut b, mut out, mut place) = (a as u64, b as u64, 0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % t.p + b % t.p) % t.p) * place;
            a /= t.p;
            b /= t.p;
            place *= t.p;
        }
        out as u32
    }
    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }
    #[inline]
    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let t = &self.0;
        let m = (t.q - 1) as u32;
        Some(t.exp[((m - t.log[a as usize]) % m) as usize])
    }
    pub(crate) fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => None,
                std::cmp::Ordering::Equal => Some(1),
                std::cmp::Ordering::Greater => Some(0),
            };
        }
        let t = &self.0;
        let m = (t.q - 1) as i64;
        let l = (t.log[a as usize] as i64 * e.rem_euclid(m)).rem_euclid(m);
        Some(t.exp[l as usize])
    }
    /// Image of an integer under Z -> F_p -> F.
    pub(crate) fn int_code(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub(crate) fn code_to_poly(&self, code: u32) -> FpPoly {
        let mut out = Vec::with_capacity(self.0.k);
        let mut c = code as u64;
        for _ in 0..self.0.k {
            out.push(c % self.0.p);
            c /= self.0.p;
        }
        poly::trim(&mut out);
        out
    }
    pub(crate) fn poly_to_code(&self, f: &[u64]) -> u32 {
        let (_, r) = poly::divrem(f, &self.0.modulus, self.0.p);
        r.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c) as u32
    }

    /// Table `phi` with `phi[code in self] = code in big` for the embedding that
    /// sends `a` to the smallest-code root of this field's modulus in `big`.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Vec<u32>> {
        if self.p() != big.p() || !big.k().is_multiple_of(self.k()) {
            return Err(Error::FieldMismatch);
        }
        let eval = |x: u32| -> u32 {
            self.0.modulus.iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, x), big.int_code(c as i64)))
        };
        let root = (0..big.order() as u32).find(|&x| eval(x) == 0).ok_or(Error::FieldMismatch)?;
        let mut table = Vec::with_capacity(self.order() as usize);
        for code in 0..self.order() as u32 {
            let coeffs = self.code_to_poly(code);
            let img = coeffs.iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, root), big.int_code(c as i64)));
            table.push(img);
        }
        Ok(table)
    }

    /// Smallest d >= 1 with x^(sub_order^d) = x, i.e. the degree of x over F_{sub_order}.
    pub(crate) fn degree_over(&self, x: u32, sub_order: u64) -> usize {
        let mut y = x;
        let mut d = 0;
        loop {
            y = self.pow(y, sub_order as i64).unwrap();
            d += 1;
            if y == x {
                return d;
            }
        }
    }

    pub(crate) fn fmt_code(&self, code: u32) -> String {
        let coeffs = self.code_to_poly(code);
        if coeffs.len() <= 1 {
            return coeffs.first().copied().unwrap_or(0).to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join("+")
    }
}

impl Tables {
    fn build(p: u64, k: usize, q: u64, modulus: FpPoly) -> Tables {
        let to_code = |f: &[u64]| -> u32 {
            let (_, r) = poly::divrem(f, &modulus, p);
            r.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
        };
        let to_poly = |code: u32| -> FpPoly {
            let mut out = Vec::with_capacity(k);
            let mut c = code as u64;
            for _ in 0..k {
                out.push(c % p);
                c /= p;
            }
            poly::trim(&mut out);
            out
        };
        let neg: Vec<u32> = (0..q as u32)
            .map(|c| {
                let f: FpPoly = to_poly(c).iter().map(|&x| (p - x) % p).collect();
                to_code(&f)
            })
            .collect();
        let add = (q <= ADD_TABLE_LIMIT && p != 2).then(|| {
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    tab[(a as u64 * q + b as u64) as usize] = to_code(&poly::add(&to_poly(a), &to_poly(b), p));
                }
            }
            tab
        });
        // Smallest-code primitive element.
        let order = q - 1;
        let mut exp = Vec::new();
        for g in 1..q as u32 {
            let gp = to_poly(g);
            let mut powers = Vec::with_capacity(order as usize);
            let mut cur: FpPoly = vec![1];
            let mut ok = true;
            for i in 0..order {
                let c = to_code(&cur);
                if i > 0 && c == 1 {
                    ok = false;
                    break;
                }
                powers.push(c);
                cur = poly::divrem(&poly::mul(&cur, &gp, p), &modulus, p).1;
            }
            if ok {
                exp = powers;
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &c) in exp.iter().enumerate() {
            log[c as usize] = i as u32;
        }
        // Doubled so that log a + log b indexes directly.
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
        Tables { p, k, q, modulus, add, neg, log, exp: doubled }
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k).hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

/// An element of a [`FiniteField`].
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    field: FiniteField,
    code: u32,
}

/// Operation selector for [`ff_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FFOp {
    Add,
    Mul,
    Inv,
    Pow(i64),
}

impl FFElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    /// Coefficients over F_p of the representing polynomial in `a`.
    pub fn coeffs(&self) -> Vec<u64> {
        let mut c = self.field.code_to_poly(self.code);
        c.resize(self.field.k(), 0);
        c
    }

    fn check(&self, other: &FFElem) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
    fn wrap(&self, code: u32) -> FFElem {
        FFElem { field: self.field.clone(), code }
    }

    pub fn add(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.add(self.code, other.code)))
    }
    pub fn sub(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.sub(self.code, other.code)))
    }
    pub fn neg(&self) -> FFElem {
        self.wrap(self.field.neg(self.code))
    }
    pub fn mul(&self, other: &FFElem) -> Result<FFElem> {
        self.check(other)?;
        Ok(self.wrap(self.field.mul(self.code, other.code)))
    }
    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn inv(&self) -> Result<FFElem> {
        if self.code == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.p();
        let a = self.field.code_to_poly(self.code);
        let (g, s, _) = poly::ext_gcd(&a, self.field.modulus(), p);
        debug_assert_eq!(g, vec![1]);
        Ok(self.wrap(self.field.poly_to_code(&s)))
    }
    pub fn pow(&self, e: i64) -> Result<FFElem> {
        self.field.pow(self.code, e).map(|c| self.wrap(c)).ok_or(Error::DivisionByZero)
    }
}

/// Dispatch form of the field operations; `b` is ignored for `Inv` and `Pow`.
pub fn ff_arith(a: &FFElem, b: &FFElem, op: FFOp) -> Result<FFElem> {
    match op {
        FFOp::Add => a.add(b),
        FFOp::Mul => a.mul(b),
        FFOp::Inv => a.inv(),
        FFOp::Pow(e) => a.pow(e),
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_code(self.code))
    }
}
impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self, self.field)
    }
}
