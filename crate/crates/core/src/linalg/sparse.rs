//! Compressed-sparse-row matrix and the product kernels built on it.
//!
//! Every reduction runs in fixed left-to-right order so repeated runs are
//! bit-identical; nothing here is parallel.

use crate::error::{Error, Result};

use super::dense::{DenseSymmetric, DenseVector};

/// An `n_rows x n_cols` real matrix in CSR form.
///
/// Invariants enforced at construction:
/// - `row_offsets` has length `n_rows + 1`, is non-decreasing, and its last
///   entry equals `values.len()`;
/// - column indices are `< n_cols` and strictly increasing within a row;
/// - all stored values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(Error::DimensionMismatch(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            )));
        }
        if row_offsets[0] != 0 || *row_offsets.last().unwrap() != values.len() {
            return Err(Error::DimensionMismatch(
                "row_offsets must start at 0 and end at nnz".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::DimensionMismatch(
                "col_indices and values lengths differ".into(),
            ));
        }
        for r in 0..n_rows {
            let (lo, hi) = (row_offsets[r], row_offsets[r + 1]);
            if lo > hi {
                return Err(Error::DimensionMismatch(format!(
                    "row_offsets decreases at row {r}"
                )));
            }
            let mut prev: Option<usize> = None;
            for k in lo..hi {
                let c = col_indices[k];
                if c >= n_cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column index {c} out of range in row {r}"
                    )));
                }
                if let Some(p) = prev {
                    if c <= p {
                        return Err(Error::DimensionMismatch(format!(
                            "column indices not strictly increasing in row {r}"
                        )));
                    }
                }
                prev = Some(c);
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {v}")));
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "triplet ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|t| (t.0, t.1));

        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let (r, c, mut v) = sorted[i];
            let mut j = i + 1;
            while j < sorted.len() && sorted[j].0 == r && sorted[j].1 == c {
                v += sorted[j].2;
                j += 1;
            }
            col_indices.push(c);
            values.push(v);
            row_offsets[r + 1] += 1;
            i = j;
        }
        for r in 0..n_rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self::new(n_rows, n_cols, row_offsets, col_indices, values)
    }

    pub fn identity(n: usize) -> Self {
        let row_offsets = (0..=n).collect();
        let col_indices = (0..n).collect();
        let values = vec![1.0; n];
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of stored non-zero entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_offsets[r], self.row_offsets[r + 1]);
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Dense row-major copy; intended for small matrices and test oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out[r][c] = v;
            }
        }
        out
    }
}

/// `A * x` in row order, O(nnz).
pub fn spmv(a: &SparseMatrix, x: &DenseVector) -> Result<DenseVector> {
    if x.len() != a.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "spmv: vector length {} vs {} columns",
            x.len(),
            a.n_cols
        )));
    }
    let xs = x.as_slice();
    let mut out = vec![0.0; a.n_rows];
    for r in 0..a.n_rows {
        let (cols, vals) = a.row(r);
        let mut acc = 0.0;
        for (&c, &v) in cols.iter().zip(vals) {
            acc += v * xs[c];
        }
        out[r] = acc;
    }
    DenseVector::new(out)
}

/// `A^T * y`, scattering row contributions in row order.
pub fn spmv_t(a: &SparseMatrix, y: &DenseVector) -> Result<DenseVector> {
    if y.len() != a.n_rows {
        return Err(Error::DimensionMismatch(format!(
            "spmv_t: vector length {} vs {} rows",
            y.len(),
            a.n_rows
        )));
    }
    let ys = y.as_slice();
    let mut out = vec![0.0; a.n_cols];
    for r in 0..a.n_rows {
        let (cols, vals) = a.row(r);
        let yr = ys[r];
        for (&c, &v) in cols.iter().zip(vals) {
            out[c] += v * yr;
        }
    }
    DenseVector::new(out)
}

/// Materializes `A^T diag(d) A` as a dense symmetric `n_cols x n_cols` matrix.
///
/// Exactly symmetric by construction: only the upper triangle is accumulated
/// and then mirrored.
pub fn weighted_gram(a: &SparseMatrix, d: &DenseVector) -> Result<DenseSymmetric> {
    if d.len() != a.n_rows {
        return Err(Error::DimensionMismatch(format!(
            "weighted_gram: diagonal length {} vs {} rows",
            d.len(),
            a.n_rows
        )));
    }
    let ds = d.as_slice();
    let dim = a.n_cols;
    let mut g = vec![0.0; dim * dim];
    for r in 0..a.n_rows {
        let (cols, vals) = a.row(r);
        let w = ds[r];
        for (p, (&ci, &vi)) in cols.iter().zip(vals).enumerate() {
            let wvi = w * vi;
            for (&cj, &vj) in cols[p..].iter().zip(&vals[p..]) {
                g[ci * dim + cj] += wvi * vj;
            }
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            g[j * dim + i] = g[i * dim + j];
        }
    }
    Ok(DenseSymmetric::from_raw_symmetric(dim, g))
}
