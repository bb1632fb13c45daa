// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

//! Row-compressed complex sparse matrix with triplet export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::{CMatrix, CVector, C64};

/// Sparse matrix stored as sorted `(column, value)` lists per row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, C64>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_dense(d: &CMatrix) -> Self {
        let mut m = Self::zeros(d.nrows(), d.ncols());
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if d[(i, j)] != C64::new(0.0, 0.0) {
                    m.set(i, j, d[(i, j)]);
                }
            }
        }
        m
    }

    pub fn from_diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Overwrite an entry; zero values remove it.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v == C64::new(0.0, 0.0) {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i].get(&j).copied().unwrap_or_default()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.data[i].iter().map(|(&j, &v)| (j, v))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    /// Maximum number of stored entries in any row.
    pub fn row_sparsity(&self) -> usize {
        self.data.iter().map(BTreeMap::len).max().unwrap_or(0)
    }

    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (i, row) in self.data.iter().enumerate() {
            for (&j, &v) in row {
                out.push((i, j, v));
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut d = CMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            d[(i, j)] = v;
        }
        d
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().map(|(&j, &v)| v * x[j]).sum())
            .collect()
    }

    pub fn mul_dvec(&self, x: &CVector) -> CVector {
        CVector::from_vec(self.mul_vec(x.as_slice()))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.triplets() {
            m.set(j, i, v.conj());
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m.set(i, j, v * s);
        }
        m
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (i, j, v) in other.triplets() {
            m.add(i, j, v);
        }
        m
    }

    /// Kronecker product, `self` on the more significant index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.triplets() {
            for (k, l, b) in other.triplets() {
                m.set(i * other.rows + k, j * other.cols + l, a * b);
            }
        }
        m
    }

    /// `i j re im` lines, one per stored entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("# {} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{i} {j} {:.17e} {:.17e}", v.re, v.im);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = SparseMatrix::zeros(2, 2);
        m.set(0, 1, C64::new(1.0, 0.0));
        m.add(0, 1, C64::new(-1.0, 0.0));
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn kron_matches_dense() {
        let a = SparseMatrix::from_dense(&CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 1.0)));
        let b = SparseMatrix::identity(3);
        let dense = crate::linalg::kron(&a.to_dense(), &b.to_dense());
        assert_eq!(a.kron(&b).to_dense(), dense);
    }
}
