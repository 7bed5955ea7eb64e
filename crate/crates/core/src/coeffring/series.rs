use std::cmp::Ordering;
use std::fmt;

use super::field::{FFElem, FiniteField};
use crate::error::{Error, Result};

/// A Laurent series over a finite field, known modulo `t^prec`.
///
/// Nonzero values keep a nonzero leading coefficient at `t^val` and never
/// store terms at or beyond `prec`. `prec == None` marks an exact value (a
/// Laurent polynomial). A zero with finite precision is the unknown quantity
/// `O(t^prec)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: FiniteField,
    val: i64,
    coeffs: Vec<u32>,
    prec: Option<i64>,
}

/// Operation selector for [`laurent_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Inv,
    Val,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesValue {
    Series(LaurentSeries),
    Int(i64),
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    /// Builds `t^val * (c_0 + c_1 t + ...) + O(t^prec)` from raw field codes,
    /// normalizing leading zeros and truncating at `prec`.
    pub fn from_codes(field: &FiniteField, val: i64, coeffs: Vec<u32>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries { field: field.clone(), val, coeffs, prec };
        s.normalize();
        s
    }
    pub fn from_elems(val: i64, coeffs: &[FFElem], prec: Option<i64>) -> Result<Self> {
        let field = coeffs.first().ok_or_else(|| Error::Invalid("empty coefficient list".into()))?.field().clone();
        if coeffs.iter().any(|c| !c.field().same_as(&field)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::from_codes(&field, val, coeffs.iter().map(FFElem::code).collect(), prec))
    }
    pub fn zero(field: &FiniteField) -> Self {
        LaurentSeries { field: field.clone(), val: 0, coeffs: Vec::new(), prec: None }
    }
    /// The unknown quantity O(t^prec).
    pub fn big_o(field: &FiniteField, prec: i64) -> Self {
        LaurentSeries { field: field.clone(), val: prec, coeffs: Vec::new(), prec: Some(prec) }
    }
    pub fn one(field: &FiniteField) -> Self {
        Self::monomial(field, 1, 0)
    }
    /// Exact `c * t^k` for a field code `c`.
    pub fn monomial(field: &FiniteField, c: u32, k: i64) -> Self {
        Self::from_codes(field, k, vec![c], None)
    }
    pub fn constant(c: &FFElem) -> Self {
        Self::monomial(c.field(), c.code(), 0)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec.unwrap_or(0);
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
                if let Some(p) = self.prec {
                    let keep = (p - self.val).max(0) as usize;
                    self.coeffs.truncate(keep);
                }
                while self.coeffs.last() == Some(&0) {
                    self.coeffs.pop();
                }
                if self.coeffs.is_empty() {
                    self.val = self.prec.unwrap_or(0);
                }
            }
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }
    /// True for the exact zero and for O(t^p).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }
    /// Order of the leading term.
    pub fn valuation(&self) -> Result<i64> {
        if !self.coeffs.is_empty() {
            Ok(self.val)
        } else if let Some(p) = self.prec {
            Err(Error::PrecisionExhausted(format!("leading term of O(t^{p}) is not determined")))
        } else {
            Err(Error::Invalid("the zero series has no valuation".into()))
        }
    }
    /// A lower bound for the valuation, `None` only for the exact zero.
    pub fn val_lower_bound(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.val)
        } else {
            self.prec
        }
    }
    /// Raw coefficient code at `t^i` (0 outside the stored range; callers
    /// check precision themselves).
    pub fn coeff_code(&self, i: i64) -> u32 {
        if self.coeffs.is_empty() || i < self.val {
            return 0;
        }
        self.coeffs.get((i - self.val) as usize).copied().unwrap_or(0)
    }
    pub fn coeff(&self, i: i64) -> FFElem {
        self.field.elem(self.coeff_code(i))
    }
    pub fn leading_coeff(&self) -> Result<FFElem> {
        self.valuation().map(|v| self.coeff(v))
    }
    /// Stored coefficient codes starting at `t^val`.
    pub fn codes(&self) -> &[u32] {
        &self.coeffs
    }
    /// Exponent one past the last stored term (the degree bound of the
    /// polynomial part).
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }
    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return match prec {
                Some(p) => Self::big_o(&self.field, p),
                None => Self::zero(&self.field),
            };
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.val,
            (_, true) => self.val,
            _ => self.val.min(other.val),
        };
        let hi = self.end().max(other.end());
        let hi = prec.map_or(hi, |p| hi.min(p));
        if hi <= lo {
            return Self::big_o(&self.field, prec.unwrap());
        }
        let coeffs = (lo..hi).map(|i| self.field.add(self.coeff_code(i), other.coeff_code(i))).collect();
        Self::from_codes(&self.field, lo, coeffs, prec)
    }
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.field);
        }
        let vx = self.val_lower_bound().unwrap();
        let vy = other.val_lower_bound().unwrap();
        let prec = min_prec(self.prec.map(|p| p + vy), other.prec.map(|p| p + vx));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::big_o(&self.field, prec.unwrap());
        }
        let val = self.val + other.val;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - val).max(0) as usize);
        }
        let mut out = vec![0u32; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Self::from_codes(&self.field, val, out, prec)
    }

    /// Multiplicative inverse with precision `prec - 2*val`.
    ///
    /// Exact monomials invert exactly; other exact series have infinite
    /// inverses and must go through [`inv_to`](Self::inv_to).
    pub fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.valuation()?;
        match self.prec {
            None if self.is_monomial() => {
                let c = self.field.inv(self.coeffs[0]).unwrap();
                Ok(Self::monomial(&self.field, c, -v))
            }
            None => Err(Error::PrecisionExhausted("exact non-monomial series has an infinite inverse".into())),
            Some(p) => Ok(self.unit_inverse(v, (p - v) as usize, Some(p - 2 * v))),
        }
    }
    /// Inverse known modulo `t^target`.
    pub fn inv_to(&self, target: i64) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.valuation()?;
        let rel = target + v;
        if rel <= 0 {
            return Ok(Self::big_o(&self.field, target));
        }
        if let Some(p) = self.prec {
            if p - 2 * v < target {
                return Err(Error::PrecisionExhausted(format!(
                    "inverse needed to t^{target} but input only supports t^{}",
                    p - 2 * v
                )));
            }
        }
        if self.prec.is_none() && self.is_monomial() {
            return self.inv().map(|s| s.truncate(target));
        }
        Ok(self.unit_inverse(v, rel as usize, Some(target)))
    }
    fn unit_inverse(&self, v: i64, rel: usize, prec: Option<i64>) -> Self {
        let f = &self.field;
        let u0_inv = f.inv(self.coeffs[0]).unwrap();
        let mut w = vec![0u32; rel];
        if rel > 0 {
            w[0] = u0_inv;
        }
        for i in 1..rel {
            let mut acc = 0;
            for j in 1..=i.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[j], w[i - j]));
            }
            w[i] = f.neg(f.mul(u0_inv, acc));
        }
        Self::from_codes(f, -v, w, prec)
    }

    /// Drops terms at `t^prec` and beyond; never raises precision.
    pub fn truncate(&self, prec: i64) -> Self {
        let p = min_prec(self.prec, Some(prec));
        Self::from_codes(&self.field, self.val, self.coeffs.clone(), p)
    }
    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        LaurentSeries {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }
    /// Multiplication by a field constant given by code.
    pub fn scale_code(&self, c: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect();
        Self::from_codes(&self.field, self.val, coeffs, self.prec)
    }
    /// True if the two values agree modulo the smaller of their precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if !self.field.same_as(&other.field) {
            return false;
        }
        let prec = min_prec(self.prec, other.prec);
        let lo = [self.val_lower_bound(), other.val_lower_bound()].into_iter().flatten().min().unwrap_or(0);
        let hi = self.end().max(other.end());
        let hi = prec.map_or(hi, |p| hi.min(p));
        (lo..hi).all(|i| self.coeff_code(i) == other.coeff_code(i))
    }

    /// Total order on exact values used for canonical sorting.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        (self.coeffs.is_empty(), self.val, &self.coeffs, self.prec).cmp(&(
            other.coeffs.is_empty(),
            other.val,
            &other.coeffs,
            other.prec,
        ))
    }
}

/// Dispatch form of series arithmetic; `y` is ignored for `Inv` and `Val`.
pub fn laurent_arith(x: &LaurentSeries, y: &LaurentSeries, op: SeriesOp) -> Result<SeriesValue> {
    match op {
        SeriesOp::Add => x.add(y).map(SeriesValue::Series),
        SeriesOp::Mul => x.mul(y).map(SeriesValue::Series),
        SeriesOp::Inv => x.inv().map(SeriesValue::Series),
        SeriesOp::Val => x.valuation().map(SeriesValue::Int),
    }
}

impl std::hash::Hash for LaurentSeries {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.val.hash(state);
        self.coeffs.hash(state);
        self.prec.hash(state);
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1).unwrap()
    }

    #[test]
    fn valuation_of_polynomial() {
        let f = f2();
        let x = LaurentSeries::from_codes(&f, 2, vec![1, 1], None);
        assert_eq!(x.valuation().unwrap(), 2);
    }

    #[test]
    fn geometric_series() {
        let f = FiniteField::new(5, 1).unwrap();
        // 1 - t = 1 + 4t over F_5.
        let x = LaurentSeries::from_codes(&f, 0, vec![1, 4], None);
        let inv = x.inv_to(4).unwrap();
        assert_eq!(inv, LaurentSeries::from_codes(&f, 0, vec![1, 1, 1, 1], Some(4)));
        let prod = x.mul(&inv).unwrap();
        assert!(prod.agrees_with(&LaurentSeries::one(&f)));
        assert_eq!(prod.prec(), Some(4));
    }

    #[test]
    fn precision_rules() {
        let f = f2();
        let x = LaurentSeries::from_codes(&f, 1, vec![1, 1], Some(5));
        let y = LaurentSeries::from_codes(&f, -2, vec![1, 0, 1], Some(3));
        assert_eq!(x.add(&y).unwrap().prec(), Some(3));
        // min(5 + (-2), 3 + 1) = 3
        assert_eq!(x.mul(&y).unwrap().prec(), Some(3));
        // 5 - 2*1
        assert_eq!(x.inv().unwrap().prec(), Some(3));
    }

    #[test]
    fn undetermined_leading_term() {
        let f = f2();
        let x = LaurentSeries::from_codes(&f, 0, vec![1], Some(3));
        let z = x.sub(&x).unwrap();
        assert!(matches!(z.valuation(), Err(Error::PrecisionExhausted(_))));
        assert!(matches!(z.inv(), Err(Error::PrecisionExhausted(_))));
        assert_eq!(LaurentSeries::zero(&f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn exact_monomial_inverse() {
        let f = FiniteField::new(3, 1).unwrap();
        let x = LaurentSeries::monomial(&f, 2, 3);
        assert_eq!(x.inv().unwrap(), LaurentSeries::monomial(&f, 2, -3));
    }
}
