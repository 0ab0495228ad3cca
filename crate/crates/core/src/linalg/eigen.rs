//! Symmetric eigendecomposition via cyclic Jacobi rotations, and the
//! singular-value and whitening helpers built on it.
//!
//! Jacobi is quadratically convergent and accurate to machine precision for
//! the small dense blocks this crate works with; it also runs in a fixed
//! sweep order, so results are bit-stable across runs.

use crate::error::{Error, Result};

use super::dense::{DenseSymmetric, DenseVector};
use super::sparse::{weighted_gram, SparseMatrix};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching eigenvectors.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column-major eigenvectors: component `i` of eigenvector `j` is
    /// `vectors[j * dim + i]`.
    pub vectors: Vec<f64>,
    pub dim: usize,
}

/// Full eigendecomposition of a symmetric matrix.
pub fn sym_eigen(h: &DenseSymmetric) -> SymEigen {
    let dim = h.dim();
    let mut a = h.values().to_vec();
    // v starts as the identity, accumulated row-major.
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }

    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0f64;
            for i in 0..dim {
                for j in (i + 1)..dim {
                    off += a[i * dim + j] * a[i * dim + j];
                }
            }
            if off.sqrt() <= 1e-15 * scale * dim as f64 {
                break;
            }
            for p in 0..dim {
                for q in (p + 1)..dim {
                    let apq = a[p * dim + q];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let app = a[p * dim + p];
                    let aqq = a[q * dim + q];
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    for k in 0..dim {
                        let akp = a[k * dim + p];
                        let akq = a[k * dim + q];
                        a[k * dim + p] = c * akp - s * akq;
                        a[k * dim + q] = s * akp + c * akq;
                    }
                    for k in 0..dim {
                        let apk = a[p * dim + k];
                        let aqk = a[q * dim + k];
                        a[p * dim + k] = c * apk - s * aqk;
                        a[q * dim + k] = s * apk + c * aqk;
                    }
                    for k in 0..dim {
                        let vkp = v[k * dim + p];
                        let vkq = v[k * dim + q];
                        v[k * dim + p] = c * vkp - s * vkq;
                        v[k * dim + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        a[i * dim + i]
            .partial_cmp(&a[j * dim + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * dim + i]).collect();
    let mut vectors = vec![0.0; dim * dim];
    for (out_col, &in_col) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[out_col * dim + i] = v[i * dim + in_col];
        }
    }
    SymEigen {
        values,
        vectors,
        dim,
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(h: &DenseSymmetric) -> f64 {
    let dim = h.dim();
    if dim == 0 {
        return 0.0;
    }
    sym_eigen(h).values[0]
}

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
pub fn spectral_norm(h: &DenseSymmetric) -> f64 {
    let eig = sym_eigen(h);
    eig.values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Extreme singular values of a tall sparse matrix, computed from the
/// eigenvalues of the d x d Gram matrix `A^T A`.
pub fn extreme_singular_values(a: &SparseMatrix) -> Result<(f64, f64)> {
    if a.n_rows() < a.n_cols() {
        return Err(Error::UnsupportedShape(format!(
            "extreme_singular_values expects a tall matrix, got {}x{}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    let gram = weighted_gram(a, &DenseVector::ones(a.n_rows()))?;
    let eig = sym_eigen(&gram);
    let lo = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let hi = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    Ok((lo.sqrt(), hi.sqrt()))
}

/// Symmetric inverse square root `H^{-1/2}`; requires `H` positive definite.
pub fn inverse_sqrt(h: &DenseSymmetric) -> Result<DenseSymmetric> {
    let dim = h.dim();
    let eig = sym_eigen(h);
    if let Some((index, &pivot)) = eig
        .values
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > 0.0))
    {
        return Err(Error::NotPositiveDefinite { index, pivot });
    }
    // H^{-1/2} = V diag(lambda^{-1/2}) V^T
    let inv_roots: Vec<f64> = eig.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut acc = 0.0;
            for (k, &ir) in inv_roots.iter().enumerate() {
                acc += eig.vectors[k * dim + i] * ir * eig.vectors[k * dim + j];
            }
            out[i * dim + j] = acc;
            out[j * dim + i] = acc;
        }
    }
    Ok(DenseSymmetric::from_raw_symmetric(dim, out))
}
