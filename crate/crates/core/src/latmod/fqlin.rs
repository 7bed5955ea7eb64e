//! Small linear algebra over the residue field F_q, on raw element codes.

use crate::coeffring::FiniteField;

/// Row-reduces `rows` in place and returns the nonzero rows of the reduced
/// echelon form together with their pivot columns.
pub(crate) fn rref(f: &FiniteField, mut rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let k = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(k, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub(crate) fn rank(f: &FiniteField, rows: Vec<Vec<u32>>) -> usize {
    rref(f, rows).0.len()
}

/// Every subspace of F_q^dim, each as the rows of its reduced echelon basis.
pub(crate) fn all_subspaces(f: &FiniteField, dim: usize) -> Vec<Vec<Vec<u32>>> {
    let q = f.order() as u32;
    let mut out = Vec::new();
    for mask in 0u32..(1 << dim) {
        let pivots: Vec<usize> = (0..dim).filter(|&i| mask >> i & 1 == 1).collect();
        // Free positions: row r, column c > pivot r, c not a pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..dim).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<Vec<u32>> = pivots
                .iter()
                .map(|&p| {
                    let mut v = vec![0; dim];
                    v[p] = 1;
                    v
                })
                .collect();
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = (c % q as u64) as u32;
                c /= q as u64;
            }
            out.push(rows);
        }
    }
    out
}

/// Representatives of the points of P^{dim-1}(F_q): nonzero vectors whose
/// first nonzero coordinate is 1.
pub(crate) fn projective_points(f: &FiniteField, dim: usize) -> Vec<Vec<u32>> {
    let q = f.order();
    let mut out = Vec::new();
    for lead in 0..dim {
        let tail = dim - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut v = vec![0u32; dim];
            v[lead] = 1;
            let mut c = code;
            for x in v.iter_mut().skip(lead + 1) {
                *x = (c % q) as u32;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}
