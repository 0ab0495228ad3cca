//! Exact and sketched Newton drivers.
//!
//! The update is always `x <- x - H^{-1} g` with the full regularized
//! gradient and Hessian; in sketched mode the Hessian is replaced by the
//! leverage-score subsample from [`crate::sketch`], drawn fresh each
//! iteration with failure budget `delta / max_iters`.
//!
//! The solve never panics or errors on numerical trouble: certificate
//! violations, non-PD factorizations and overflow all land in the returned
//! report's status. The stopping rule is the computable surrogate
//! `||step|| <= eps / 2 && ||gradient|| <= grad_tol`; under the certified
//! margin `H >= margin * I` this implies `||x - x*|| <= ||g|| / margin`, so
//! the default `grad_tol = margin * eps / 2` lands the iterate within `eps`
//! of the optimum without knowing it.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{solve_spd, weighted_gram, DenseVector};
use crate::losses::{ConditionReport, ProblemInstance, RadiusBundle};
use crate::rng;
use crate::sketch::{subsample, SketchParams, SketchedDiagonal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Sketched,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Exact => "exact",
            SolveMode::Sketched => "sketched",
        }
    }

    pub fn parse(s: &str) -> Option<SolveMode> {
        match s {
            "exact" => Some(SolveMode::Exact),
            "sketched" => Some(SolveMode::Sketched),
            _ => None,
        }
    }
}

/// Solver configuration; `eps` and `delta` ranges follow the convergence
/// guarantee's hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Target accuracy on `||x - x*||`; must lie in (0, 0.1).
    pub eps: f64,
    /// Total failure probability budget; must lie in (0, 0.1).
    pub delta: f64,
    /// Spectral half-width for the sketched Hessian.
    pub eps_h: f64,
    /// Maximum number of Newton updates.
    pub max_iters: usize,
    /// Gradient-norm stopping fallback; `None` uses `margin * eps / 2`.
    pub grad_tol: Option<f64>,
    pub seed: u64,
    pub mode: SolveMode,
}

impl SolverConfig {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        let cfg = Self {
            eps,
            delta,
            eps_h: SketchParams::DEFAULT_EPS_H,
            max_iters: 50,
            grad_tol: None,
            seed: 0,
            mode: SolveMode::Sketched,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.1) {
            return Err(Error::PreconditionViolated(format!(
                "eps must lie in (0, 0.1), got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(Error::PreconditionViolated(format!(
                "delta must lie in (0, 0.1), got {}",
                self.delta
            )));
        }
        if !(self.eps_h > 0.0 && self.eps_h < 0.5) {
            return Err(Error::PreconditionViolated(format!(
                "eps_h must lie in (0, 0.5), got {}",
                self.eps_h
            )));
        }
        Ok(())
    }
}

/// Diagnostics for one recorded iterate. Index 0 is the starting point.
#[derive(Debug, Clone)]
pub struct IterateRecord {
    pub k: usize,
    pub x: DenseVector,
    /// `||g(x_k)||_2`; infinite if the gradient overflowed at this iterate.
    pub grad_norm: f64,
    /// `||x_k - x_{k-1}||_2`; zero for the starting record.
    pub step_norm: f64,
    /// `||x_k - x*||_2` when a reference optimum was supplied.
    pub dist_to_ref: Option<f64>,
    /// Sketch sparsity for sketched updates.
    pub sketch_nnz: Option<usize>,
    /// Wall time of this update in milliseconds (zero for the start record).
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIters,
    CertificateFailed,
    Overflow,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIters => "max_iters",
            SolveStatus::CertificateFailed => "certificate_failed",
            SolveStatus::Overflow => "overflow",
        }
    }
}

/// Full account of a solve: trajectory, contraction diagnostics, and the
/// certificate outcomes the run was gated on.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub iterates: Vec<IterateRecord>,
    pub final_x: DenseVector,
    /// `dist_k / dist_{k-1}` for consecutive recorded iterates, when a
    /// reference optimum was supplied and the previous distance was nonzero.
    pub contraction_ratios: Vec<f64>,
    pub certificates: ConditionReport,
}

impl SolveReport {
    /// Number of Newton updates actually taken.
    pub fn updates(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }
}

/// One exact Newton update `x - H(x)^{-1} g(x)`.
pub fn exact_step(inst: &ProblemInstance, x: &DenseVector) -> Result<DenseVector> {
    let g = inst.gradient(x)?;
    let h = inst.hessian(x)?;
    let step = solve_spd(&h, &g)?;
    x.sub(&step)
}

/// One sketched Newton update `x - H~(x)^{-1} g(x)`.
///
/// Requires the Hessian factor to be entrywise positive, since the
/// leverage-score sampler only accepts positive diagonals; returns the
/// sketch used alongside the new point.
pub fn approx_step(
    inst: &ProblemInstance,
    x: &DenseVector,
    params: &SketchParams,
) -> Result<(DenseVector, SketchedDiagonal)> {
    let factor = inst.hessian_factor(x)?;
    let min_entry = factor.min_entry();
    if !(min_entry > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "hessian factor must be entrywise positive before sketching; min entry {min_entry:e}"
        )));
    }
    let g = inst.gradient(x)?;
    let sketch = subsample(inst.matrix(), factor.diagonal(), params)?;
    let h = weighted_gram(inst.matrix(), &sketch.to_dense())?;
    let step = solve_spd(&h, &g)?;
    Ok((x.sub(&step)?, sketch))
}

/// Basin certificate: `M * ||x0 - x_ref|| <= 0.1 * margin`.
///
/// A zero starting distance passes regardless of `M`, including the infinite
/// `M` produced by very large radii.
pub fn good_start_check(
    inst: &ProblemInstance,
    x0: &DenseVector,
    bundle: &RadiusBundle,
    x_ref: &DenseVector,
) -> bool {
    let r0 = x0.dist(x_ref);
    r0 == 0.0 || bundle.lipschitz() * r0 <= 0.1 * inst.margin()
}

/// One-step contraction bound
/// `2 (eps_h + M r / (margin - M r)) * r`; requires `M r < margin`.
pub fn shrink_bound(eps_h: f64, lipschitz: f64, margin: f64, dist: f64) -> Result<f64> {
    let mr = lipschitz * dist;
    if !(mr < margin) {
        return Err(Error::PreconditionViolated(format!(
            "shrink_bound requires M * r < margin, got {mr:e} vs {margin:e}"
        )));
    }
    Ok(2.0 * (eps_h + mr / (margin - mr)) * dist)
}

/// Runs the solve loop from `x0`.
pub fn solve(inst: &ProblemInstance, x0: &DenseVector, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_with_reference(inst, x0, cfg, None)
}

/// Like [`solve`], additionally recording distances to a known reference
/// optimum in every iterate (testing and diagnostics).
pub fn solve_with_reference(
    inst: &ProblemInstance,
    x0: &DenseVector,
    cfg: &SolverConfig,
    x_ref: Option<&DenseVector>,
) -> Result<SolveReport> {
    cfg.validate()?;
    if x0.len() != inst.dim() {
        return Err(Error::DimensionMismatch(format!(
            "x0 length {} vs dimension {}",
            x0.len(),
            inst.dim()
        )));
    }

    // Certificate gate: a rank-deficient design matrix fails the certificate
    // rather than erroring, matching the report contract.
    let certificates = match inst.check_weight_condition() {
        Ok(report) => report,
        Err(Error::RankDeficient { sigma_min }) => ConditionReport {
            satisfied: vec![false; inst.n_rows()],
            verdict: false,
            sigma_min,
        },
        Err(e) => return Err(e),
    };
    if !certificates.verdict {
        return Ok(SolveReport {
            status: SolveStatus::CertificateFailed,
            iterates: Vec::new(),
            final_x: x0.clone(),
            contraction_ratios: Vec::new(),
            certificates,
        });
    }

    let grad_tol = cfg
        .grad_tol
        .unwrap_or(0.5 * inst.margin() * cfg.eps);
    let dist = |x: &DenseVector| x_ref.map(|r| x.dist(r));

    let mut iterates: Vec<IterateRecord> = Vec::new();
    let mut x = x0.clone();
    let status;

    let mut grad = match inst.gradient(&x) {
        Ok(g) => g,
        Err(e) => {
            return Ok(SolveReport {
                status: status_for(&e)?,
                iterates,
                final_x: x,
                contraction_ratios: Vec::new(),
                certificates,
            })
        }
    };
    iterates.push(IterateRecord {
        k: 0,
        x: x.clone(),
        grad_norm: grad.norm(),
        step_norm: 0.0,
        dist_to_ref: dist(&x),
        sketch_nnz: None,
        wall_ms: 0.0,
    });

    let mut last_step_norm = 0.0f64;
    let mut updates = 0usize;
    loop {
        let grad_norm = grad.norm();
        if last_step_norm <= 0.5 * cfg.eps && grad_norm <= grad_tol {
            status = SolveStatus::Converged;
            break;
        }
        if updates >= cfg.max_iters {
            status = SolveStatus::MaxIters;
            break;
        }

        let started = Instant::now();
        let (next, sketch_nnz) = match cfg.mode {
            SolveMode::Exact => match step_from_gradient(inst, &x, &grad, None) {
                Ok(v) => v,
                Err(e) => {
                    status = status_for(&e)?;
                    break;
                }
            },
            SolveMode::Sketched => {
                let budget = cfg.delta / cfg.max_iters.max(1) as f64;
                let params = SketchParams::with_oversample(
                    cfg.eps_h,
                    budget,
                    rng::derive_seed(cfg.seed, updates as u64),
                    SketchParams::DEFAULT_OVERSAMPLE_C,
                )?;
                match step_from_gradient(inst, &x, &grad, Some(&params)) {
                    Ok(v) => v,
                    Err(e) => {
                        status = status_for(&e)?;
                        break;
                    }
                }
            }
        };
        updates += 1;
        last_step_norm = next.dist(&x);
        x = next;

        let (grad_norm_next, overflowed) = match inst.gradient(&x) {
            Ok(g) => {
                grad = g;
                (grad.norm(), false)
            }
            Err(Error::Overflow(_)) | Err(Error::NonFinite(_)) => (f64::INFINITY, true),
            Err(e) => return Err(e),
        };
        iterates.push(IterateRecord {
            k: updates,
            x: x.clone(),
            grad_norm: grad_norm_next,
            step_norm: last_step_norm,
            dist_to_ref: dist(&x),
            sketch_nnz,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        if overflowed {
            status = SolveStatus::Overflow;
            break;
        }
    }

    let contraction_ratios = contraction_ratios(&iterates);
    Ok(SolveReport {
        status,
        iterates,
        final_x: x,
        contraction_ratios,
        certificates,
    })
}

/// Shared step body; reuses the already-computed gradient at `x`.
fn step_from_gradient(
    inst: &ProblemInstance,
    x: &DenseVector,
    grad: &DenseVector,
    sketch_params: Option<&SketchParams>,
) -> Result<(DenseVector, Option<usize>)> {
    match sketch_params {
        None => {
            let h = inst.hessian(x)?;
            let step = solve_spd(&h, grad)?;
            Ok((x.sub(&step)?, None))
        }
        Some(params) => {
            let factor = inst.hessian_factor(x)?;
            let min_entry = factor.min_entry();
            if !(min_entry > 0.0) {
                return Err(Error::PreconditionViolated(format!(
                    "hessian factor not entrywise positive: min entry {min_entry:e}"
                )));
            }
            let sketch = subsample(inst.matrix(), factor.diagonal(), params)?;
            let h = weighted_gram(inst.matrix(), &sketch.to_dense())?;
            let step = solve_spd(&h, grad)?;
            Ok((x.sub(&step)?, Some(sketch.nnz())))
        }
    }
}

/// Maps numerical failures to report statuses; structural errors stay errors.
fn status_for(e: &Error) -> Result<SolveStatus> {
    match e {
        Error::Overflow(_) | Error::NonFinite(_) => Ok(SolveStatus::Overflow),
        Error::NotPositiveDefinite { .. }
        | Error::RankDeficient { .. }
        | Error::PreconditionViolated(_)
        | Error::SolveResidual { .. } => Ok(SolveStatus::CertificateFailed),
        other => Err(other.clone()),
    }
}

fn contraction_ratios(iterates: &[IterateRecord]) -> Vec<f64> {
    let mut ratios = Vec::new();
    for pair in iterates.windows(2) {
        if let (Some(prev), Some(curr)) = (pair[0].dist_to_ref, pair[1].dist_to_ref) {
            if prev > 0.0 {
                ratios.push(curr / prev);
            }
        }
    }
    ratios
}
