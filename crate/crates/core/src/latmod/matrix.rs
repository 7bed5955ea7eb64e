use std::fmt;

use crate::coeffring::{FiniteField, LaurentSeries};
use crate::error::{Error, Result};

/// Dense matrix over F = F_q((t)); entries stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<LaurentSeries>,
}

impl FMatrix {
    pub fn new(field: &FiniteField, rows: usize, cols: usize, data: Vec<LaurentSeries>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|x| !x.field().same_as(field)) {
            return Err(Error::FieldMismatch);
        }
        Ok(FMatrix { field: field.clone(), rows, cols, data })
    }
    pub fn from_fn(
        field: &FiniteField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LaurentSeries,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FMatrix { field: field.clone(), rows, cols, data }
    }
    pub fn zero(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Self::from_fn(field, rows, cols, |_, _| LaurentSeries::zero(field))
    }
    pub fn identity(field: &FiniteField, n: usize) -> Self {
        Self::diag_monomials(field, &vec![0; n])
    }
    /// diag(t^{a_1}, ..., t^{a_n}).
    pub fn diag_monomials(field: &FiniteField, exps: &[i64]) -> Self {
        let n = exps.len();
        Self::from_fn(field, n, n, |i, j| {
            if i == j {
                LaurentSeries::monomial(field, 1, exps[i])
            } else {
                LaurentSeries::zero(field)
            }
        })
    }
    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &FiniteField, cols: &[Vec<LaurentSeries>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged column list".into()));
        }
        let data = (0..rows).flat_map(|i| cols.iter().map(move |c| c[i].clone())).collect();
        Self::new(field, rows, cols.len(), data)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: LaurentSeries) {
        self.data[i * self.cols + j] = x;
    }
    pub fn column(&self, j: usize) -> Vec<LaurentSeries> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn columns(&self) -> Vec<Vec<LaurentSeries>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }
    pub fn entries(&self) -> &[LaurentSeries] {
        &self.data
    }
    pub fn is_exact(&self) -> bool {
        self.data.iter().all(LaurentSeries::is_exact)
    }
    /// Smallest precision among the entries (`None` when exact).
    pub fn prec(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentSeries::prec).min()
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !self.field.same_as(&other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::from_fn(&self.field, self.rows, other.cols, |i, j| {
            let mut acc = LaurentSeries::zero(&self.field);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                acc = acc.add_unchecked(&a.mul_unchecked(b));
            }
            acc
        }))
    }
    pub fn add(&self, other: &FMatrix) -> Result<FMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(FMatrix { data, ..self.clone() })
    }
    pub fn neg(&self) -> FMatrix {
        FMatrix { data: self.data.iter().map(LaurentSeries::neg).collect(), ..self.clone() }
    }
    pub fn sub(&self, other: &FMatrix) -> Result<FMatrix> {
        self.add(&other.neg())
    }
    pub fn transpose(&self) -> FMatrix {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    /// Multiplication by the scalar t^k.
    pub fn shift(&self, k: i64) -> FMatrix {
        FMatrix { data: self.data.iter().map(|x| x.shift(k)).collect(), ..self.clone() }
    }
    pub fn scale(&self, c: &LaurentSeries) -> Result<FMatrix> {
        let data = self.data.iter().map(|x| x.mul(c)).collect::<Result<_>>()?;
        Ok(FMatrix { data, ..self.clone() })
    }
    pub fn hstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(&self.field, &cols)
    }
    /// Truncates every entry modulo t^prec.
    pub fn truncate(&self, prec: i64) -> FMatrix {
        FMatrix { data: self.data.iter().map(|x| x.truncate(prec)).collect(), ..self.clone() }
    }
    /// Smallest valuation of a nonzero entry; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(LaurentSeries::val_lower_bound).min()
    }
    /// True if all entries lie in o = F_q[[t]].
    pub fn is_integral(&self) -> bool {
        self.min_valuation().is_none_or(|v| v >= 0)
    }
    pub fn agrees_with(&self, other: &FMatrix) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.data.iter().zip(&other.data).all(|(a, b)| a.agrees_with(b))
    }

    /// Inverse by Gauss-Jordan elimination with minimal-valuation pivots.
    ///
    /// Exact entries are first truncated to a working precision, which is
    /// raised until every entry of the result is known modulo `t^target`
    /// (inexact inputs get a single attempt).
    pub fn inverse_to(&self, target: i64) -> Result<FMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let span = self.data.iter().filter_map(|x| x.val_lower_bound()).fold(0i64, |acc, v| acc.max(v.abs()))
            + self.data.iter().map(|x| x.end().abs()).max().unwrap_or(0);
        let mut work = target + 2 * span + 4;
        loop {
            let m = self.truncate(work);
            let inv = gauss_jordan(&m, n)?;
            let reached = inv.prec().unwrap_or(i64::MAX);
            if reached >= target {
                return Ok(inv.truncate(target));
            }
            if !self.is_exact() || work > target + 64 * (span + n as i64 + 4) {
                return Err(Error::PrecisionExhausted(format!(
                    "inverse only known modulo t^{reached}, wanted t^{target}"
                )));
            }
            work = 2 * work + 1;
        }
    }

    /// Exact inverse, available when Gauss-Jordan never divides by a
    /// non-monomial exact pivot (triangular matrices with monomial diagonal,
    /// monomial matrices, and similar).
    pub fn inverse_exact(&self) -> Result<FMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if !self.is_exact() {
            return Err(Error::PrecisionExhausted("matrix is not exact".into()));
        }
        gauss_jordan(self, self.rows)
    }
}

fn gauss_jordan(m: &FMatrix, n: usize) -> Result<FMatrix> {
    let f = m.field.clone();
    let mut a: Vec<Vec<LaurentSeries>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut b: Vec<Vec<LaurentSeries>> =
        FMatrix::identity(&f, n).data.chunks(n).map(<[LaurentSeries]>::to_vec).collect();
    for col in 0..n {
        // Pivot: certified nonzero entry of least valuation.
        let mut best: Option<(usize, i64)> = None;
        let mut undetermined = false;
        for (r, row) in a.iter().enumerate().skip(col) {
            match row[col].valuation() {
                Ok(v) => {
                    if best.is_none_or(|(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
                Err(Error::PrecisionExhausted(_)) => undetermined = true,
                Err(_) => {}
            }
        }
        let Some((r, _)) = best else {
            return Err(if undetermined {
                Error::PrecisionExhausted("pivot not determined".into())
            } else {
                Error::SingularMatrix
            });
        };
        a.swap(col, r);
        b.swap(col, r);
        let piv_inv = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&piv_inv)?;
            b[col][j] = b[col][j].mul(&piv_inv)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_exact_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = factor.mul(&a[col][j])?;
                a[r][j] = a[r][j].sub(&da)?;
                let db = factor.mul(&b[col][j])?;
                b[r][j] = b[r][j].sub(&db)?;
            }
        }
    }
    Ok(FMatrix { field: f, rows: n, cols: n, data: b.into_iter().flatten().collect() })
}

impl fmt::Display for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_inverse_is_exact() {
        let f = FiniteField::new(2, 1).unwrap();
        let one = LaurentSeries::one(&f);
        let t = LaurentSeries::monomial(&f, 1, 1);
        let z = LaurentSeries::zero(&f);
        let m = FMatrix::new(&f, 2, 2, vec![one.clone(), one.clone(), z, t]).unwrap();
        let inv = m.inverse_exact().unwrap();
        assert!(inv.is_exact());
        assert_eq!(m.mul(&inv).unwrap(), FMatrix::identity(&f, 2));
    }

    #[test]
    fn series_inverse() {
        let f = FiniteField::new(3, 1).unwrap();
        let x = |v: i64, c: Vec<u32>| LaurentSeries::from_codes(&f, v, c, None);
        let m =
            FMatrix::new(&f, 2, 2, vec![x(0, vec![1, 1]), x(1, vec![1]), x(0, vec![2]), x(0, vec![1, 0, 1])]).unwrap();
        let inv = m.inverse_to(10).unwrap();
        let prod = m.mul(&inv).unwrap();
        assert!(prod.agrees_with(&FMatrix::identity(&f, 2)));
        assert!(prod.prec().unwrap() >= 10);
    }
}
