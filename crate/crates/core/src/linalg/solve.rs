//! Dense SPD factorization and solves.
//!
//! At the target scale the normal-equations matrix is a small dense d x d
//! block, so a plain Cholesky factorization is the whole story. The solve
//! verifies its own multiply-back residual and runs iterative refinement
//! before accepting an answer.

use crate::error::{Error, Result};

use super::dense::{DenseSymmetric, DenseVector};

/// Relative multiply-back residual a solve must meet: `1e-10 * (1 + ||g||)`.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

const MAX_REFINEMENT_STEPS: usize = 2;

/// Lower-triangular Cholesky factor `L` with `H = L L^T`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>,
}

impl CholeskyFactor {
    /// Factorizes a symmetric matrix; a non-positive pivot aborts with
    /// `NotPositiveDefinite`.
    pub fn new(h: &DenseSymmetric) -> Result<Self> {
        let dim = h.dim();
        let mut lower = vec![0.0; dim * dim];
        for j in 0..dim {
            let mut diag = h.get(j, j);
            for k in 0..j {
                diag -= lower[j * dim + k] * lower[j * dim + k];
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    index: j,
                    pivot: diag,
                });
            }
            let ljj = diag.sqrt();
            lower[j * dim + j] = ljj;
            for i in (j + 1)..dim {
                let mut v = h.get(i, j);
                for k in 0..j {
                    v -= lower[i * dim + k] * lower[j * dim + k];
                }
                lower[i * dim + j] = v / ljj;
            }
        }
        Ok(Self { dim, lower })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solves `L z = rhs` in place.
    pub fn forward(&self, rhs: &mut [f64]) {
        debug_assert_eq!(rhs.len(), self.dim);
        for i in 0..self.dim {
            let mut v = rhs[i];
            for k in 0..i {
                v -= self.lower[i * self.dim + k] * rhs[k];
            }
            rhs[i] = v / self.lower[i * self.dim + i];
        }
    }

    /// Solves `L^T z = rhs` in place.
    pub fn backward(&self, rhs: &mut [f64]) {
        debug_assert_eq!(rhs.len(), self.dim);
        for i in (0..self.dim).rev() {
            let mut v = rhs[i];
            for k in (i + 1)..self.dim {
                v -= self.lower[k * self.dim + i] * rhs[k];
            }
            rhs[i] = v / self.lower[i * self.dim + i];
        }
    }

    /// Full solve `H y = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut z = rhs.to_vec();
        self.forward(&mut z);
        self.backward(&mut z);
        z
    }
}

/// Solves `H y = g` for symmetric positive definite `H`.
///
/// The result is accepted only if `||H y - g||_2 <= 1e-10 * (1 + ||g||_2)`,
/// with up to two rounds of iterative refinement to get there. Deterministic:
/// fixed elimination and summation order throughout.
pub fn solve_spd(h: &DenseSymmetric, g: &DenseVector) -> Result<DenseVector> {
    if g.len() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "solve_spd: rhs length {} vs dim {}",
            g.len(),
            h.dim()
        )));
    }
    let factor = CholeskyFactor::new(h)?;
    let bound = SOLVE_RESIDUAL_TOL * (1.0 + g.norm());

    let mut y = factor.solve(g.as_slice());
    let mut residual = residual_norm(h, &y, g)?;
    for _ in 0..MAX_REFINEMENT_STEPS {
        if residual <= bound {
            break;
        }
        let r = residual_vec(h, &y, g)?;
        let correction = factor.solve(r.as_slice());
        for (yi, ci) in y.iter_mut().zip(&correction) {
            *yi -= ci;
        }
        residual = residual_norm(h, &y, g)?;
    }
    if residual > bound {
        return Err(Error::SolveResidual { residual, bound });
    }
    DenseVector::new(y)
}

fn residual_vec(h: &DenseSymmetric, y: &[f64], g: &DenseVector) -> Result<DenseVector> {
    let yv = DenseVector::new(y.to_vec())?;
    h.mul_vec(&yv)?.sub(g)
}

fn residual_norm(h: &DenseSymmetric, y: &[f64], g: &DenseVector) -> Result<f64> {
    Ok(residual_vec(h, y, g)?.norm())
}
