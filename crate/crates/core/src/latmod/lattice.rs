use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde_json::{json, Value};

use super::hnf::{hermite, Hermite};
use super::matrix::FMatrix;
use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::{Error, Result};

/// A full-rank o-lattice in F^n in canonical column Hermite form.
///
/// The basis is upper triangular with diagonal `t^{a_i}`; the entry in row i
/// above the diagonal is an exact Laurent polynomial with exponents below
/// `a_i`. Equality, ordering and hashing use only `(diag, upper)`.
#[derive(Clone)]
pub struct Lattice {
    field: FiniteField,
    diag: Vec<i64>,
    upper: Vec<Vec<LaurentSeries>>,
    prec: i64,
}

/// Selector for [`lattice_ops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Sum,
    Intersection,
    Contains,
    HomothetyNormalize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeValue {
    Lattice(Lattice),
    Bool(bool),
}

impl Lattice {
    fn from_hermite(field: &FiniteField, h: Hermite) -> Self {
        let prec = h.diag.iter().copied().max().unwrap_or(0) + 2;
        Lattice { field: field.clone(), diag: h.diag, upper: h.upper, prec }
    }

    /// The standard lattice o^n.
    pub fn standard(field: &FiniteField, n: usize) -> Self {
        Self::diagonal(field, &vec![0; n])
    }
    /// diag(t^{a_1}, ..., t^{a_n}) o^n.
    pub fn diagonal(field: &FiniteField, exps: &[i64]) -> Self {
        let n = exps.len();
        let upper = (0..n).map(|i| vec![LaurentSeries::zero(field); n - i - 1]).collect();
        let prec = exps.iter().copied().max().unwrap_or(0) + 2;
        Lattice { field: field.clone(), diag: exps.to_vec(), upper, prec }
    }
    /// The o-span of the columns of `m` (any number of columns, rank n).
    pub fn from_generators(m: &FMatrix) -> Result<Self> {
        let h = hermite(m.field(), m.rows(), &m.columns(), false)?;
        Ok(Self::from_hermite(m.field(), h))
    }
    pub(crate) fn from_columns(field: &FiniteField, n: usize, cols: &[Vec<LaurentSeries>]) -> Result<Self> {
        Ok(Self::from_hermite(field, hermite(field, n, cols, false)?))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
    pub fn diag(&self) -> &[i64] {
        &self.diag
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    /// Entry (i, j) of the canonical basis.
    pub fn entry(&self, i: usize, j: usize) -> LaurentSeries {
        match i.cmp(&j) {
            Ordering::Equal => LaurentSeries::monomial(&self.field, 1, self.diag[i]),
            Ordering::Less => self.upper[i][j - i - 1].clone(),
            Ordering::Greater => LaurentSeries::zero(&self.field),
        }
    }
    pub fn basis(&self) -> FMatrix {
        let n = self.dim();
        FMatrix::from_fn(&self.field, n, n, |i, j| self.entry(i, j))
    }
    pub(crate) fn basis_columns(&self) -> Vec<Vec<LaurentSeries>> {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| self.entry(i, j)).collect()).collect()
    }
    /// True when the basis is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.upper.iter().flatten().all(LaurentSeries::is_zero)
    }
    /// v_t(det) of the canonical basis.
    pub fn det_valuation(&self) -> i64 {
        self.diag.iter().sum()
    }

    /// t^k L.
    pub fn scale(&self, k: i64) -> Lattice {
        Lattice {
            field: self.field.clone(),
            diag: self.diag.iter().map(|a| a + k).collect(),
            upper: self.upper.iter().map(|r| r.iter().map(|x| x.shift(k)).collect()).collect(),
            prec: self.prec + k,
        }
    }
    /// g L for a square matrix g.
    pub fn apply(&self, g: &FMatrix) -> Result<Lattice> {
        if g.rows() != self.dim() || g.cols() != self.dim() {
            return Err(Error::DimensionMismatch("group element and lattice".into()));
        }
        Lattice::from_generators(&g.mul(&self.basis())?)
    }

    /// Coordinates of a vector in the canonical basis, by back substitution.
    pub fn coordinates(&self, v: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let n = self.dim();
        let mut x = vec![LaurentSeries::zero(&self.field); n];
        for i in (0..n).rev() {
            let mut rhs = v[i].clone();
            for (u, xj) in self.upper[i].iter().zip(&x[i + 1..]) {
                if !xj.is_zero() && !u.is_zero() {
                    rhs = rhs.sub(&u.mul(xj)?)?;
                }
            }
            x[i] = rhs.shift(-self.diag[i]);
        }
        Ok(x)
    }
    pub fn contains_vector(&self, v: &[LaurentSeries]) -> Result<bool> {
        let x = self.coordinates(v)?;
        Ok(x.iter().all(|c| c.val_lower_bound().is_none_or(|v| v >= 0)))
    }
    /// other ⊆ self.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        self.check(other)?;
        for col in other.basis_columns() {
            if !self.contains_vector(&col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    fn check(&self, other: &Lattice) -> Result<()> {
        if !self.field.same_as(&other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("lattices of rank {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check(other)?;
        let mut cols = self.basis_columns();
        cols.extend(other.basis_columns());
        Lattice::from_columns(&self.field, self.dim(), &cols)
    }
    /// The dual lattice {x : x^T L ⊆ o}, spanned by the columns of (B^{-1})^T.
    pub fn dual(&self) -> Result<Lattice> {
        let inv = self.basis().inverse_exact()?;
        Lattice::from_generators(&inv.transpose())
    }
    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        self.check(other)?;
        self.dual()?.sum(&other.dual()?)?.dual()
    }
    /// Smallest valuation of a basis entry.
    pub fn min_entry_valuation(&self) -> i64 {
        let up = self.upper.iter().flatten().filter_map(LaurentSeries::val_lower_bound);
        self.diag.iter().copied().chain(up).min().unwrap()
    }
    /// The representative t^k L with L ⊆ o^n and L ⊄ t o^n.
    pub fn homothety_normalize(&self) -> Lattice {
        self.scale(-self.min_entry_valuation())
    }
    pub fn is_normalized(&self) -> bool {
        self.min_entry_valuation() == 0
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        let upper: Vec<Vec<String>> = self.upper.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        json!({
            "dim": self.dim(),
            "diag": self.diag,
            "upper": upper,
            "prec": self.prec,
        })
    }
    /// Reads the JSON form; the entries must already be canonical.
    pub fn from_json(field: &FiniteField, v: &Value) -> Result<Lattice> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("lattice must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "dim" | "diag" | "upper" | "prec") {
                return Err(Error::Parse(format!("unknown lattice field {key:?}")));
            }
        }
        let n = obj.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing dim".into()))? as usize;
        let diag: Vec<i64> = serde_json::from_value(obj.get("diag").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("diag: {e}")))?;
        let upper_s: Vec<Vec<String>> = serde_json::from_value(obj.get("upper").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("upper: {e}")))?;
        let prec = obj.get("prec").and_then(Value::as_i64).ok_or_else(|| Error::Parse("missing prec".into()))?;
        if diag.len() != n || upper_s.len() != n || upper_s.iter().enumerate().any(|(i, r)| r.len() != n - i - 1) {
            return Err(Error::DimensionMismatch("lattice JSON shape".into()));
        }
        let max_a = diag.iter().copied().max().unwrap_or(0);
        if prec < max_a + 2 {
            return Err(Error::PrecisionExhausted(format!("prec {prec} below max diagonal exponent {max_a} + 2")));
        }
        let mut upper = Vec::with_capacity(n);
        for (i, row) in upper_s.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for s in row {
                let x = LaurentSeries::parse(field, s, 't')?;
                if !x.is_exact() || (!x.is_zero() && x.end() > diag[i]) {
                    return Err(Error::Parse(format!("entry {s:?} in row {i} is not reduced")));
                }
                r.push(x);
            }
            upper.push(r);
        }
        Ok(Lattice { field: field.clone(), diag, upper, prec })
    }

    fn key(&self) -> (&[i64], &Vec<Vec<LaurentSeries>>) {
        (&self.diag, &self.upper)
    }
}

/// dim_{F_q}(outer / inner), after checking inner ⊆ outer.
pub fn quotient_length(outer: &Lattice, inner: &Lattice) -> Result<u64> {
    if !outer.contains(inner)? {
        return Err(Error::NotContained);
    }
    Ok((inner.det_valuation() - outer.det_valuation()) as u64)
}

/// The canonical form of the column span of a square matrix, together with
/// the column transform `u` (over o, known to finite precision) with `m u = h`.
pub fn hermite_normal_form(m: &FMatrix) -> Result<(FMatrix, FMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("hermite_normal_form needs a square matrix".into()));
    }
    let h = hermite(m.field(), m.rows(), &m.columns(), true)?;
    let transform = h.transform.clone().expect("transform requested");
    let lat = Lattice::from_hermite(m.field(), h);
    Ok((lat.basis(), transform))
}

pub fn lattice_ops(a: &Lattice, b: &Lattice, op: LatticeOp) -> Result<LatticeValue> {
    match op {
        LatticeOp::Sum => a.sum(b).map(LatticeValue::Lattice),
        LatticeOp::Intersection => a.intersection(b).map(LatticeValue::Lattice),
        LatticeOp::Contains => a.contains(b).map(LatticeValue::Bool),
        LatticeOp::HomothetyNormalize => Ok(LatticeValue::Lattice(a.homothety_normalize())),
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.key() == other.key()
    }
}
impl Eq for Lattice {}
impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.diag.hash(state);
        self.upper.hash(state);
    }
}
impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diag.cmp(&other.diag).then_with(|| {
            for (ra, rb) in self.upper.iter().zip(&other.upper) {
                for (x, y) in ra.iter().zip(rb) {
                    let c = x.cmp_canonical(y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::new(2, 1).unwrap()
    }
    fn mono(f: &FiniteField, k: i64) -> LaurentSeries {
        LaurentSeries::monomial(f, 1, k)
    }

    #[test]
    fn identity_is_canonical() {
        let f = f2();
        let (h, u) = hermite_normal_form(&FMatrix::identity(&f, 3)).unwrap();
        assert_eq!(h, FMatrix::identity(&f, 3));
        assert!(u.agrees_with(&FMatrix::identity(&f, 3)));
    }

    #[test]
    fn two_by_two_example() {
        // Columns (t, 0) and (1, 1); e_1 is not in the span, so the upper
        // triangular form has diagonal (t, 1).
        let f = f2();
        let z = LaurentSeries::zero(&f);
        let m = FMatrix::from_columns(&f, &[vec![mono(&f, 1), z.clone()], vec![mono(&f, 0), mono(&f, 0)]]).unwrap();
        let (h, u) = hermite_normal_form(&m).unwrap();
        let lat = Lattice::from_generators(&m).unwrap();
        assert_eq!(lat.diag(), &[1, 0]);
        assert!(m.mul(&u).unwrap().agrees_with(&h));
        assert_eq!(quotient_length(&Lattice::standard(&f, 2), &lat).unwrap(), 1);
    }

    #[test]
    fn singular_is_reported() {
        let f = f2();
        let m = FMatrix::from_columns(&f, &[vec![mono(&f, 0), mono(&f, 1)], vec![mono(&f, 1), mono(&f, 2)]]).unwrap();
        assert_eq!(Lattice::from_generators(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn inexact_generators() {
        let f = f2();
        let x = LaurentSeries::from_codes(&f, 0, vec![1, 1], Some(3));
        let y = LaurentSeries::from_codes(&f, 0, vec![1], Some(3));
        let m = FMatrix::from_columns(&f, &[vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]]).unwrap();
        // det = (1+t)^2 - 1 = t^2 over F_2, needing t^2 plus a margin.
        assert_eq!(Lattice::from_generators(&m).unwrap().det_valuation(), 2);
        let x1 = x.truncate(1);
        let y1 = y.truncate(1);
        let m1 = FMatrix::from_columns(&f, &[vec![x1.clone(), y1.clone()], vec![y1, x1]]).unwrap();
        assert!(matches!(Lattice::from_generators(&m1), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = FiniteField::new(3, 1).unwrap();
        let m = FMatrix::from_columns(
            &f,
            &[vec![mono(&f, 2), mono(&f, 0)], vec![LaurentSeries::from_codes(&f, -1, vec![1, 2], None), mono(&f, 3)]],
        )
        .unwrap();
        let lat = Lattice::from_generators(&m).unwrap();
        let back = Lattice::from_json(&f, &lat.to_json()).unwrap();
        assert_eq!(back, lat);
        assert_eq!(back.to_json(), lat.to_json());
    }

    #[test]
    fn normalization() {
        let f = f2();
        let l = Lattice::standard(&f, 3).scale(3);
        assert_eq!(l.homothety_normalize(), Lattice::standard(&f, 3));
        assert_eq!(l.sum(&l).unwrap(), l);
    }
}
