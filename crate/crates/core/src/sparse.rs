//! Compressed sparse row operators.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

/// Something that can compute `y = A x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    /// Overwrites `y` with `A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Which matrix an operator represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Order-g non-backtracking matrix; order 0 is the adjacency matrix.
    NonBacktracking {
        order: usize,
    },
    DeltaB1,
    DeltaB2,
    DDelta,
    M,
    Generic,
}

/// Square sparse matrix in CSR form. Columns are sorted within each row and
/// no stored value is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    kind: OperatorKind,
}

impl SparseOperator {
    /// Builds from `(row, col, value)` triplets. Duplicates are summed and
    /// resulting zeros dropped.
    pub fn from_triplets<I>(dim: usize, triplets: I, kind: OperatorKind) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut t: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut offsets = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals = Vec::with_capacity(t.len());
        let mut rows = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) out of range for dim {dim}");
            if rows.last() == Some(&r) && cols.last() == Some(&(c as u32)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            rows.push(r);
            cols.push(c as u32);
            vals.push(v);
        }
        let mut keep_cols = Vec::with_capacity(cols.len());
        let mut keep_vals = Vec::with_capacity(vals.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != 0.0 {
                offsets[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for i in 0..dim {
            offsets[i + 1] += offsets[i];
        }
        SparseOperator { dim, offsets, cols: keep_cols, vals: keep_vals, kind }
    }

    /// Builds a 0/1 matrix from per-row sorted column lists.
    pub fn from_pattern_rows(offsets: Vec<usize>, cols: Vec<u32>, kind: OperatorKind) -> Self {
        let dim = offsets.len() - 1;
        debug_assert!((0..dim).all(|i| cols[offsets[i]..offsets[i + 1]].windows(2).all(|w| w[0] < w[1])));
        let vals = vec![1.0; cols.len()];
        SparseOperator { dim, offsets, cols, vals, kind }
    }

    pub fn diagonal(values: &[f64], kind: OperatorKind) -> Self {
        Self::from_triplets(values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, v)), kind)
    }

    pub fn zero(dim: usize, kind: OperatorKind) -> Self {
        SparseOperator { dim, offsets: vec![0; dim + 1], cols: Vec::new(), vals: Vec::new(), kind }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: OperatorKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (c, v) = self.row(i);
        c.binary_search(&(j as u32)).map(|k| v[k]).unwrap_or(0.0)
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).1.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.vals.iter().all(|&v| v >= 0.0)
    }

    /// Iterates stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&c, &v)| (i, c as usize, v))
        })
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim * self.dim];
        for (i, j, v) in self.entries() {
            d[i * self.dim + j] = v;
        }
        d
    }

    /// One `row col value` line per stored entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = String::new();
        for (i, j, v) in self.entries() {
            let _ = writeln!(out, "{i} {j} {v}");
        }
        out
    }

    /// Entrywise equality of structure and values, ignoring the kind tag.
    pub fn same_entries(&self, other: &SparseOperator) -> bool {
        self.dim == other.dim && self.offsets == other.offsets && self.cols == other.cols && self.vals == other.vals
    }
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.dim) {
            let r = self.offsets[i]..self.offsets[i + 1];
            let mut acc = 0.0;
            for (c, v) in self.cols[r.clone()].iter().zip(&self.vals[r]) {
                acc += v * x[*c as usize];
            }
            *yi = acc;
        }
    }
}
