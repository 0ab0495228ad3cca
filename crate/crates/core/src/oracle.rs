//! Independent verification machinery: finite-difference derivatives, a
//! tightly-converged reference optimum, and the gradient/Hessian integral
//! identity check.
//!
//! Everything here deliberately avoids the analytic kernels it is used to
//! verify — derivatives come from central differences of the loss value, and
//! the integral check quadratures the Hessian along a segment — so a bug in
//! the closed forms cannot hide on both sides of a comparison.

use crate::error::{Error, Result};
use crate::linalg::{solve_spd, DenseSymmetric, DenseVector};
use crate::losses::ProblemInstance;

/// Default step for gradient differences; balances truncation against
/// roundoff at double precision.
pub const DEFAULT_GRADIENT_STEP: f64 = 1e-5;
/// Default step for Hessian differences.
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-4;

const REFERENCE_MAX_ITERS: usize = 200;

/// Central-difference gradient `(L(x + h e_i) - L(x - h e_i)) / (2h)`.
pub fn fd_gradient(inst: &ProblemInstance, x: &DenseVector, h: f64) -> Result<DenseVector> {
    if !(h > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let dim = inst.dim();
    let mut out = Vec::with_capacity(dim);
    let mut probe = x.as_slice().to_vec();
    for i in 0..dim {
        probe[i] = x[i] + h;
        let plus = inst.eval_loss(&DenseVector::new(probe.clone())?)?;
        probe[i] = x[i] - h;
        let minus = inst.eval_loss(&DenseVector::new(probe.clone())?)?;
        probe[i] = x[i];
        out.push((plus - minus) / (2.0 * h));
    }
    DenseVector::new(out)
}

/// Central differences of the analytic gradient, symmetrized.
pub fn fd_hessian(inst: &ProblemInstance, x: &DenseVector, h: f64) -> Result<DenseSymmetric> {
    if !(h > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let dim = inst.dim();
    let mut cols = vec![0.0; dim * dim];
    let mut probe = x.as_slice().to_vec();
    for i in 0..dim {
        probe[i] = x[i] + h;
        let plus = inst.gradient(&DenseVector::new(probe.clone())?)?;
        probe[i] = x[i] - h;
        let minus = inst.gradient(&DenseVector::new(probe.clone())?)?;
        probe[i] = x[i];
        for j in 0..dim {
            cols[i * dim + j] = (plus[j] - minus[j]) / (2.0 * h);
        }
    }
    DenseSymmetric::symmetrized(dim, &cols)
}

/// Exact Newton run to `||g|| <= 1e-12 * (1 + ||b||)`, used as the reference
/// optimum `x*` for distance diagnostics.
pub fn reference_optimum(inst: &ProblemInstance, x0: &DenseVector) -> Result<DenseVector> {
    let tol = 1e-12 * (1.0 + inst.target().norm());
    let mut x = x0.clone();
    for _ in 0..REFERENCE_MAX_ITERS {
        let g = inst.gradient(&x)?;
        if g.norm() <= tol {
            return Ok(x);
        }
        let h = inst.hessian(&x)?;
        let step = solve_spd(&h, &g)?;
        x = x.sub(&step)?;
    }
    let g = inst.gradient(&x)?;
    if g.norm() <= tol {
        return Ok(x);
    }
    Err(Error::OracleFailed(format!(
        "gradient norm {:e} above tolerance {tol:e} after {REFERENCE_MAX_ITERS} iterations",
        g.norm()
    )))
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial from the standard
/// Chebyshev initial guesses; accurate to machine precision for the orders
/// used here.
pub fn gauss_legendre_unit(n_points: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n_points >= 1, "quadrature needs at least one node");
    let n = n_points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] to [0, 1]; nodes come in symmetric pairs.
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Relative mismatch between `g(y) - g(x)` and the quadrature of
/// `H(x + t (y - x)) (y - x)` over `t` in `[0, 1]`.
pub fn integral_identity_check(
    inst: &ProblemInstance,
    x: &DenseVector,
    y: &DenseVector,
    n_points: usize,
) -> Result<f64> {
    let direction = y.sub(x)?;
    let lhs = inst.gradient(y)?.sub(&inst.gradient(x)?)?;

    let (nodes, weights) = gauss_legendre_unit(n_points);
    let mut integral = DenseVector::zeros(inst.dim());
    for (&t, &w) in nodes.iter().zip(&weights) {
        let point = x.add_scaled(t, &direction)?;
        let h = inst.hessian(&point)?;
        integral = integral.add_scaled(w, &h.mul_vec(&direction)?)?;
    }

    let scale = lhs.norm().max(1e-30);
    Ok(lhs.sub(&integral)?.norm() / scale)
}
