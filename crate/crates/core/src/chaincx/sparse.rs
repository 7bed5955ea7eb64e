use std::collections::HashMap;

use super::scalar::Scalar;

/// Column-sparse matrix; each column holds (row, value) pairs with
/// increasing rows and nonzero values.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }
    pub fn from_dense(d: &[Vec<S>]) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, Vec::len);
        let mut m = Self::zero(rows, cols);
        for (r, row) in d.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                m.add_to(r, c, x.clone());
            }
        }
        m
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column(&self, c: usize) -> &[(usize, S)] {
        &self.columns[c]
    }
    pub fn get(&self, r: usize, c: usize) -> S {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |e| e.0).map_or_else(|_| S::zero(), |i| col[i].1.clone())
    }
    pub fn add_to(&mut self, r: usize, c: usize, x: S) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if x.is_zero() {
            return;
        }
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => {
                let v = col[i].1.clone() + x;
                if v.is_zero() {
                    col.remove(i);
                } else {
                    col[i].1 = v;
                }
            }
            Err(i) => col.insert(i, (r, x)),
        }
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut d = vec![vec![S::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                d[*r][c] = x.clone();
            }
        }
        d
    }
    /// self · other.
    pub fn mul(&self, other: &SparseMatrix<S>) -> SparseMatrix<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zero(self.rows, other.cols);
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: Vec<(usize, S)> = Vec::new();
            for (k, y) in col {
                for (r, x) in &self.columns[*k] {
                    acc.push((*r, x.clone() * y.clone()));
                }
            }
            acc.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, S)> = Vec::new();
            for (r, x) in acc {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 = last.1.clone() + x,
                    _ => merged.push((r, x)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            out.columns[c] = merged;
        }
        out
    }
    /// Scales row i and column j by the given ±1 signs.
    pub fn conjugate_signs(&self, row_signs: &[bool], col_signs: &[bool]) -> SparseMatrix<S> {
        let mut out = self.clone();
        for (c, col) in out.columns.iter_mut().enumerate() {
            for (r, x) in col.iter_mut() {
                if row_signs[*r] != col_signs[c] {
                    *x = -x.clone();
                }
            }
        }
        out
    }
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        let mut out = SparseMatrix::zero(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                out.add_to(*r, c, f(x));
            }
        }
        out
    }

    /// Rank by column reduction on the lowest nonzero row.
    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<(usize, S)>> = HashMap::new();
        for col in &self.columns {
            let mut v = col.clone();
            while let Some((low, lv)) = v.last().cloned() {
                match pivots.get(&low) {
                    Some(p) => {
                        let factor = lv / p.last().unwrap().1.clone();
                        v = axpy(&v, p, &factor);
                    }
                    None => {
                        pivots.insert(low, v);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// v - a·p for sorted sparse vectors.
fn axpy<S: Scalar>(v: &[(usize, S)], p: &[(usize, S)], a: &S) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let take_v = j >= p.len() || (i < v.len() && v[i].0 < p[j].0);
        let take_p = i >= v.len() || (j < p.len() && p[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(a.clone() * p[j].1.clone())));
            j += 1;
        } else {
            let x = v[i].1.clone() - a.clone() * p[j].1.clone();
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
