//! Dense vector and dense symmetric matrix types.

use std::ops::Index;

use crate::error::{Error, Result};

/// A finite real vector. Construction rejects NaN and infinities so that
/// overflow surfaces where it happens instead of miles downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    values: Vec<f64>,
}

impl DenseVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("vector entry {v}")));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            values: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Euclidean norm, summed left to right.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn inf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `self + scale * other`; lengths must match.
    pub fn add_scaled(&self, scale: f64, other: &DenseVector) -> Result<DenseVector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "add_scaled: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        DenseVector::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + scale * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &DenseVector) -> Result<DenseVector> {
        self.add_scaled(-1.0, other)
    }

    /// Distance `||self - other||_2` without allocating the difference.
    pub fn dist(&self, other: &DenseVector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// A dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric {
    dim: usize,
    values: Vec<f64>,
}

impl DenseSymmetric {
    /// Validating constructor: requires symmetry to within `1e-12` relative
    /// to the largest absolute entry.
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix: {} values for dim {}",
                values.len(),
                dim
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {v}")));
        }
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let diff = (values[i * dim + j] - values[j * dim + i]).abs();
                if diff > 1e-12 * scale {
                    return Err(Error::PreconditionViolated(format!(
                        "matrix not symmetric at ({i}, {j}): skew {diff:e}"
                    )));
                }
            }
        }
        Ok(Self { dim, values })
    }

    /// For callers that construct an exactly symmetric buffer themselves.
    pub(crate) fn from_raw_symmetric(dim: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), dim * dim);
        Self { dim, values }
    }

    /// Builds `(M + M^T) / 2` from an arbitrary square buffer.
    pub fn symmetrized(dim: usize, values: &[f64]) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "symmetrized: {} values for dim {}",
                values.len(),
                dim
            )));
        }
        let mut out = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                out[i * dim + j] = 0.5 * (values[i * dim + j] + values[j * dim + i]);
            }
        }
        Ok(Self { dim, values: out })
    }

    pub fn identity(dim: usize) -> Self {
        let mut values = vec![0.0; dim * dim];
        for i in 0..dim {
            values[i * dim + i] = 1.0;
        }
        Self { dim, values }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut values = vec![0.0; dim * dim];
        for (i, &v) in diag.iter().enumerate() {
            values[i * dim + i] = v;
        }
        Self { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sub(&self, other: &DenseSymmetric) -> Result<DenseSymmetric> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix sub: dim {} vs {}",
                self.dim, other.dim
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            values,
        })
    }

    pub fn scale(&self, s: f64) -> DenseSymmetric {
        Self {
            dim: self.dim,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `M * x` for a dense vector.
    pub fn mul_vec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "mul_vec: vector length {} vs dim {}",
                x.len(),
                self.dim
            )));
        }
        let xs = x.as_slice();
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.values[i * self.dim..(i + 1) * self.dim];
            out[i] = row.iter().zip(xs).map(|(a, b)| a * b).sum();
        }
        DenseVector::new(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
