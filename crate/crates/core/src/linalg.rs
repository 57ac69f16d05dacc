//! Sparse triplet storage and a banded LU solve with partial pivoting.
//!
//! The rod Jacobian is banded once unknowns and equations are ordered along
//! the centerline. Callers pass one ordering key per unknown and per
//! equation; both are sorted stably and the permuted matrix is factored in
//! band storage.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Square sparse matrix as unsorted `(row, col, value)` entries; duplicates add.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Triplets {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl Triplets {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }
}

fn order(keys: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    idx
}

/// Solves `A x = b` for the triplet matrix `A`.
///
/// `unknown_keys[j]` and `equation_keys[i]` place column `j` and row `i`
/// along a common axis; rows and columns with nearby keys should couple.
pub fn solve_banded(
    a: &Triplets,
    b: &DVector<f64>,
    unknown_keys: &[f64],
    equation_keys: &[f64],
) -> Result<DVector<f64>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    if unknown_keys.len() != n || equation_keys.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: unknown_keys.len().min(equation_keys.len()) });
    }
    let col_order = order(unknown_keys);
    let row_order = order(equation_keys);
    let mut col_pos = vec![0; n];
    for (pos, &j) in col_order.iter().enumerate() {
        col_pos[j] = pos;
    }
    let mut row_pos = vec![0; n];
    for (pos, &i) in row_order.iter().enumerate() {
        row_pos[i] = pos;
    }

    let (mut kl, mut ku) = (0usize, 0usize);
    for &(i, j, _) in a.entries() {
        let (i, j) = (row_pos[i], col_pos[j]);
        if i > j {
            kl = kl.max(i - j);
        } else {
            ku = ku.max(j - i);
        }
    }
    // row i holds columns i - kl ..= i + kl + ku
    let width = 2 * kl + ku + 1;
    let mut band = vec![0.0; n * width];
    let at = |i: usize, j: usize| i * width + j + kl - i;
    for &(i, j, v) in a.entries() {
        let (i, j) = (row_pos[i], col_pos[j]);
        band[at(i, j)] += v;
    }
    let mut rhs: Vec<f64> = row_order.iter().map(|&i| b[i]).collect();

    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let last_col = (k + kl + ku).min(n - 1);
        let mut piv = k;
        let mut best = band[at(k, k)].abs();
        for i in k + 1..=last_row {
            let v = band[at(i, k)].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if !(best > 0.0) || !best.is_finite() {
            return Err(Error::SingularJacobian(k));
        }
        if piv != k {
            for j in k..=last_col {
                band.swap(at(k, j), at(piv, j));
            }
            rhs.swap(k, piv);
        }
        let pivot = band[at(k, k)];
        for i in k + 1..=last_row {
            let f = band[at(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            band[at(i, k)] = 0.0;
            for j in k + 1..=last_col {
                band[at(i, j)] -= f * band[at(k, j)];
            }
            rhs[i] -= f * rhs[k];
        }
    }

    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let last_col = (i + kl + ku).min(n - 1);
        let mut s = rhs[i];
        for j in i + 1..=last_col {
            s -= band[at(i, j)] * y[j];
        }
        y[i] = s / band[at(i, i)];
    }
    let mut x = DVector::zeros(n);
    for (pos, &j) in col_order.iter().enumerate() {
        x[j] = y[pos];
    }
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularJacobian(n))
    }
}
