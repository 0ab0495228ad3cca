//! The three regression loss families and their regularizer.
//!
//! Every problem this crate solves has the form
//!
//! ```text
//! L(x) = 0.5 * || f(A x) - b ||_2^2  +  0.5 * || diag(w) A x ||_2^2
//! ```
//!
//! with `f` applied element-wise as `exp`, `cosh`, or `sinh`. The module
//! exposes the loss value, its analytic gradient, the diagonal Hessian factor
//! `D(x)` (so the Hessian is `A^T diag(D(x)) A`), the per-family weight
//! condition that certifies `H(x) >= margin * I` everywhere, and the
//! companion Hessian-Lipschitz constant `exp(6 R^2)`.
//!
//! The unregularized losses are generally non-convex; the certificate ties
//! the weights `w` to the targets `b` so that the regularized Hessian factor
//! stays bounded away from zero entrywise, which is what both the Newton
//! analysis and the sketching step consume.

use crate::error::{Error, Result};
use crate::linalg::{
    extreme_singular_values, spmv, spmv_t, weighted_gram, DenseSymmetric, DenseVector,
    SparseMatrix,
};

/// Which element-wise map the residual term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossFamily {
    Exp,
    Cosh,
    Sinh,
}

impl LossFamily {
    pub const ALL: [LossFamily; 3] = [LossFamily::Exp, LossFamily::Cosh, LossFamily::Sinh];

    pub fn name(self) -> &'static str {
        match self {
            LossFamily::Exp => "exp",
            LossFamily::Cosh => "cosh",
            LossFamily::Sinh => "sinh",
        }
    }

    pub fn parse(s: &str) -> Option<LossFamily> {
        match s {
            "exp" => Some(LossFamily::Exp),
            "cosh" => Some(LossFamily::Cosh),
            "sinh" => Some(LossFamily::Sinh),
            _ => None,
        }
    }

    /// `f(t)` and `f'(t)` from a single `exp` call and its reciprocal.
    ///
    /// cosh and sinh are evaluated from their definitions
    /// `0.5 (e^t +- e^-t)`; the cancellation of sinh near zero costs relative
    /// accuracy there but is far below every tolerance this crate works at.
    #[inline]
    pub fn eval_pair(self, t: f64) -> (f64, f64) {
        let e = t.exp();
        match self {
            LossFamily::Exp => (e, e),
            LossFamily::Cosh => {
                let r = 1.0 / e;
                (0.5 * (e + r), 0.5 * (e - r))
            }
            LossFamily::Sinh => {
                let r = 1.0 / e;
                (0.5 * (e - r), 0.5 * (e + r))
            }
        }
    }

    /// Additive constant in the weight condition
    /// `w_i^2 > 0.5 b_i^2 + margin / sigma_min^2 + constant`.
    pub fn weight_condition_constant(self) -> f64 {
        match self {
            LossFamily::Exp => 0.0,
            LossFamily::Cosh => 1.0,
            LossFamily::Sinh => -1.0,
        }
    }
}

/// One regression problem: design matrix, targets, regularizer weights,
/// loss family, and the convexity margin the certificate must establish.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    matrix: SparseMatrix,
    target: DenseVector,
    weights: DenseVector,
    family: LossFamily,
    margin: f64,
}

impl ProblemInstance {
    pub fn new(
        matrix: SparseMatrix,
        target: DenseVector,
        weights: DenseVector,
        family: LossFamily,
        margin: f64,
    ) -> Result<Self> {
        let n = matrix.n_rows();
        if target.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "target length {} vs {} rows",
                target.len(),
                n
            )));
        }
        if weights.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "weight length {} vs {} rows",
                weights.len(),
                n
            )));
        }
        if !(margin > 0.0) || !margin.is_finite() {
            return Err(Error::PreconditionViolated(format!(
                "convexity margin must be positive, got {margin}"
            )));
        }
        Ok(Self {
            matrix,
            target,
            weights,
            family,
            margin,
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &DenseVector {
        &self.target
    }

    pub fn weights(&self) -> &DenseVector {
        &self.weights
    }

    pub fn family(&self) -> LossFamily {
        self.family
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn dim(&self) -> usize {
        self.matrix.n_cols()
    }

    fn project(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point length {} vs dimension {}",
                x.len(),
                self.dim()
            )));
        }
        spmv(&self.matrix, x)
    }

    /// Loss value `0.5 ||f(Ax) - b||^2 + 0.5 ||diag(w) Ax||^2`.
    pub fn eval_loss(&self, x: &DenseVector) -> Result<f64> {
        let u = self.project(x)?;
        let mut acc = 0.0;
        for i in 0..u.len() {
            let (f, _) = self.family.eval_pair(u[i]);
            if !f.is_finite() {
                return Err(overflow(self.family, u[i]));
            }
            let r = f - self.target[i];
            let reg = self.weights[i] * u[i];
            acc += 0.5 * r * r + 0.5 * reg * reg;
        }
        if !acc.is_finite() {
            return Err(Error::Overflow("loss value left the floating range".into()));
        }
        Ok(acc)
    }

    /// Analytic gradient `A^T ( f'(Ax) o (f(Ax) - b) + w o w o Ax )`.
    pub fn gradient(&self, x: &DenseVector) -> Result<DenseVector> {
        let u = self.project(x)?;
        let mut s = vec![0.0; u.len()];
        for i in 0..u.len() {
            let (f, fp) = self.family.eval_pair(u[i]);
            if !f.is_finite() || !fp.is_finite() {
                return Err(overflow(self.family, u[i]));
            }
            let w = self.weights[i];
            s[i] = fp * (f - self.target[i]) + w * w * u[i];
        }
        let s = DenseVector::new(s)
            .map_err(|_| Error::Overflow("gradient weights left the floating range".into()))?;
        spmv_t(&self.matrix, &s)
    }

    /// Diagonal Hessian factor `D(x)`, entrywise:
    ///
    /// ```text
    /// exp:   (2 e_i - b_i) e_i           + w_i^2      with e = exp(Ax)
    /// cosh:  2 c_i^2 - b_i c_i - 1       + w_i^2      with c = cosh(Ax)
    /// sinh:  2 s_i^2 - b_i s_i + 1       + w_i^2      with s = sinh(Ax)
    /// ```
    ///
    /// so that the full Hessian is `weighted_gram(A, D)`.
    pub fn hessian_factor(&self, x: &DenseVector) -> Result<HessianFactor> {
        let u = self.project(x)?;
        let mut d = vec![0.0; u.len()];
        for i in 0..u.len() {
            let (f, _) = self.family.eval_pair(u[i]);
            if !f.is_finite() {
                return Err(overflow(self.family, u[i]));
            }
            let b = self.target[i];
            let w2 = self.weights[i] * self.weights[i];
            d[i] = match self.family {
                LossFamily::Exp => (2.0 * f - b) * f + w2,
                LossFamily::Cosh => 2.0 * f * f - b * f - 1.0 + w2,
                LossFamily::Sinh => 2.0 * f * f - b * f + 1.0 + w2,
            };
            if !d[i].is_finite() {
                return Err(overflow(self.family, u[i]));
            }
        }
        Ok(HessianFactor {
            d: DenseVector::new(d).expect("entries checked finite"),
        })
    }

    /// Full Hessian `A^T diag(D(x)) A`.
    pub fn hessian(&self, x: &DenseVector) -> Result<DenseSymmetric> {
        let factor = self.hessian_factor(x)?;
        weighted_gram(&self.matrix, factor.diagonal())
    }

    /// Checks the per-family weight condition
    /// `w_i^2 > 0.5 b_i^2 + margin / sigma_min(A)^2 + constant` for every row.
    ///
    /// The comparison is strict with zero slack; callers wanting headroom
    /// add it to `w` themselves.
    pub fn check_weight_condition(&self) -> Result<ConditionReport> {
        let (sigma_min, _) = extreme_singular_values(&self.matrix)?;
        if !(sigma_min > 0.0) {
            return Err(Error::RankDeficient { sigma_min });
        }
        let c = self.family.weight_condition_constant();
        let shift = self.margin / (sigma_min * sigma_min);
        let mut satisfied = Vec::with_capacity(self.n_rows());
        for i in 0..self.n_rows() {
            let w2 = self.weights[i] * self.weights[i];
            let b = self.target[i];
            satisfied.push(w2 > 0.5 * b * b + shift + c);
        }
        let verdict = satisfied.iter().all(|&ok| ok);
        Ok(ConditionReport {
            satisfied,
            verdict,
            sigma_min,
        })
    }
}

fn overflow(family: LossFamily, t: f64) -> Error {
    Error::Overflow(format!(
        "{}({t:e}) left the floating range; the radius assumption is violated",
        family.name()
    ))
}

/// Hessian-Lipschitz constant `exp(6 R^2)`; requires `R > 2`.
pub fn lipschitz_bound(radius: f64) -> Result<f64> {
    if !(radius > 2.0) {
        return Err(Error::PreconditionViolated(format!(
            "lipschitz_bound requires radius > 2, got {radius}"
        )));
    }
    Ok((6.0 * radius * radius).exp())
}

/// Radius bound `R` together with the matching Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBundle {
    radius: f64,
    lipschitz: f64,
}

impl RadiusBundle {
    pub fn new(radius: f64) -> Result<Self> {
        let lipschitz = lipschitz_bound(radius)?;
        Ok(Self { radius, lipschitz })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `exp(6 R^2)`; may be infinite for large radii, in which case every
    /// finite starting distance fails the good-start check.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// The length-n diagonal `D(x)` with `H(x) = A^T diag(D) A`.
#[derive(Debug, Clone)]
pub struct HessianFactor {
    d: DenseVector,
}

impl HessianFactor {
    pub fn diagonal(&self) -> &DenseVector {
        &self.d
    }

    pub fn min_entry(&self) -> f64 {
        self.d.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Outcome of the weight-condition certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Per-row verdicts of the strict inequality.
    pub satisfied: Vec<bool>,
    /// True iff every row satisfies the condition.
    pub verdict: bool,
    /// Smallest singular value used for the `margin / sigma_min^2` term.
    pub sigma_min: f64,
}

impl ConditionReport {
    pub fn failing_indices(&self) -> Vec<usize> {
        self.satisfied
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Smallest weight vector that passes the family's condition with `slack`
/// headroom: `w_i = sqrt(max(0.5 b_i^2 + margin / sigma_min^2 + c, 0) + slack)`
/// where the inner expression is clamped at zero before the slack is added
/// (the sinh constant is negative and can push it below zero).
pub fn auto_weight(
    matrix: &SparseMatrix,
    target: &DenseVector,
    family: LossFamily,
    margin: f64,
    slack: f64,
) -> Result<DenseVector> {
    let (sigma_min, _) = extreme_singular_values(matrix)?;
    if !(sigma_min > 0.0) {
        return Err(Error::RankDeficient { sigma_min });
    }
    let c = family.weight_condition_constant();
    let shift = margin / (sigma_min * sigma_min);
    let mut w = Vec::with_capacity(target.len());
    for i in 0..target.len() {
        let b = target[i];
        let inner = (0.5 * b * b + shift + c).max(0.0) + slack;
        w.push(inner.sqrt());
    }
    DenseVector::new(w)
}
