//! Leverage-score subsampling of the Hessian factor.
//!
//! Given a positive diagonal `D`, the sampler returns a sparse diagonal `D~`
//! whose weighted Gram matrix sandwiches the exact one spectrally:
//!
//! ```text
//! (1 - eps_h) A^T D A  <=  A^T D~ A  <=  (1 + eps_h) A^T D A
//! ```
//!
//! Rows are kept independently with probability proportional to their
//! leverage score in `sqrt(D) A`; kept rows are reweighted by `d_i / p_i`, so
//! the sketched Gram matrix is unbiased. Scores are computed exactly through
//! the d x d Gram inverse, which costs `O(nnz(A) d + n d^2)` and is the right
//! trade at the scales this crate targets.
//!
//! Sampling decisions for row `i` come from stream `i` of the counter-based
//! generator in [`crate::rng`], so a sketch is a pure function of
//! `(A, d, params)` regardless of evaluation order.

use crate::error::{Error, Result};
use crate::linalg::{
    inverse_sqrt, spectral_norm, weighted_gram, CholeskyFactor, DenseVector, SparseMatrix,
};
use crate::rng;

/// Sampler configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    /// Spectral sandwich half-width; must lie in (0, 0.5).
    pub eps_h: f64,
    /// Per-sketch failure budget; must lie in (0, 1).
    pub delta: f64,
    /// Seed for the counter-based generator.
    pub seed: u64,
    /// Oversampling constant in the keep probability
    /// `min(1, c * tau_i * ln(n / delta) / eps_h^2)`.
    pub oversample_c: f64,
}

impl SketchParams {
    pub const DEFAULT_EPS_H: f64 = 0.01;
    pub const DEFAULT_OVERSAMPLE_C: f64 = 40.0;

    pub fn new(eps_h: f64, delta: f64, seed: u64) -> Result<Self> {
        Self::with_oversample(eps_h, delta, seed, Self::DEFAULT_OVERSAMPLE_C)
    }

    pub fn with_oversample(eps_h: f64, delta: f64, seed: u64, oversample_c: f64) -> Result<Self> {
        if !(eps_h > 0.0 && eps_h < 0.5) {
            return Err(Error::PreconditionViolated(format!(
                "eps_h must lie in (0, 0.5), got {eps_h}"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::PreconditionViolated(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        if !(oversample_c > 0.0) {
            return Err(Error::PreconditionViolated(format!(
                "oversample constant must be positive, got {oversample_c}"
            )));
        }
        Ok(Self {
            eps_h,
            delta,
            seed,
            oversample_c,
        })
    }
}

/// Sparse diagonal produced by `subsample`: kept rows and their reweighted
/// values, plus the targets the sketch was drawn for.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchedDiagonal {
    entries: Vec<(usize, f64)>,
    n: usize,
    target_eps: f64,
    target_delta: f64,
}

impl SketchedDiagonal {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn target_eps(&self) -> f64 {
        self.target_eps
    }

    pub fn target_delta(&self) -> f64 {
        self.target_delta
    }

    /// Dense length-n diagonal with zeros on dropped rows.
    pub fn to_dense(&self) -> DenseVector {
        let mut d = vec![0.0; self.n];
        for &(i, w) in &self.entries {
            d[i] = w;
        }
        DenseVector::new(d).expect("sketch weights are finite")
    }
}

/// Exact leverage scores of `sqrt(diag(d)) A`:
/// `tau_i = d_i * a_i^T (A^T diag(d) A)^{-1} a_i`.
///
/// Each score lies in [0, 1] and they sum to the column rank, i.e. to
/// `A.n_cols()` for the full-rank matrices accepted here.
pub fn leverage_scores(a: &SparseMatrix, d: &DenseVector) -> Result<DenseVector> {
    if d.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "leverage_scores: diagonal length {} vs {} rows",
            d.len(),
            a.n_rows()
        )));
    }
    if let Some(i) = d.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::PreconditionViolated(format!(
            "leverage scores need a positive diagonal; entry {i} is {}",
            d[i]
        )));
    }
    let gram = weighted_gram(a, d)?;
    let factor = CholeskyFactor::new(&gram).map_err(|_| Error::RankDeficient {
        sigma_min: 0.0,
    })?;

    let dim = a.n_cols();
    let mut scores = Vec::with_capacity(a.n_rows());
    let mut rhs = vec![0.0; dim];
    for i in 0..a.n_rows() {
        rhs.iter_mut().for_each(|v| *v = 0.0);
        let (cols, vals) = a.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            rhs[c] = v;
        }
        // tau_i = d_i * || L^{-1} a_i ||^2 via one forward substitution.
        factor.forward(&mut rhs);
        let q: f64 = rhs.iter().map(|v| v * v).sum();
        scores.push((d[i] * q).clamp(0.0, 1.0));
    }
    DenseVector::new(scores)
}

/// Bernoulli leverage-score subsampling of the diagonal `d`.
///
/// Row `i` is kept with probability
/// `p_i = min(1, c * tau_i * ln(n / delta) / eps_h^2)` and carries weight
/// `d_i / p_i`, so `E[A^T D~ A] = A^T D A`. When every `p_i` saturates at 1
/// the result equals `d` entry for entry. Deterministic given the seed.
pub fn subsample(
    a: &SparseMatrix,
    d: &DenseVector,
    params: &SketchParams,
) -> Result<SketchedDiagonal> {
    let scores = leverage_scores(a, d)?;
    let n = a.n_rows();
    let rate = params.oversample_c * (n as f64 / params.delta).ln() / (params.eps_h * params.eps_h);

    let mut entries = Vec::new();
    for i in 0..n {
        let p = (rate * scores[i]).min(1.0);
        if p <= 0.0 {
            continue;
        }
        let u = rng::draw_f64(params.seed, i as u64, 0);
        if u < p {
            entries.push((i, d[i] / p));
        }
    }
    Ok(SketchedDiagonal {
        entries,
        n,
        target_eps: params.eps_h,
        target_delta: params.delta,
    })
}

/// Measures how far the sketched Gram matrix strays from the exact one:
/// `eps_obs = || H^{-1/2} (H~ - H) H^{-1/2} ||` with `H = A^T diag(d) A`.
///
/// Returns whether `eps_obs <= sketch.target_eps()` together with the
/// observed value.
pub fn spectral_sandwich_check(
    a: &SparseMatrix,
    d: &DenseVector,
    sketch: &SketchedDiagonal,
) -> Result<(bool, f64)> {
    if sketch.n() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "sketch rows {} vs matrix rows {}",
            sketch.n(),
            a.n_rows()
        )));
    }
    let exact = weighted_gram(a, d)?;
    let white = inverse_sqrt(&exact)?;
    let sketched = weighted_gram(a, &sketch.to_dense())?;
    let diff = sketched.sub(&exact)?;

    // W = H^{-1/2} (H~ - H) H^{-1/2}, symmetrized against rounding skew.
    let dim = exact.dim();
    let mut tmp = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0.0;
            for k in 0..dim {
                acc += white.get(i, k) * diff.get(k, j);
            }
            tmp[i * dim + j] = acc;
        }
    }
    let mut wv = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0.0;
            for k in 0..dim {
                acc += tmp[i * dim + k] * white.get(k, j);
            }
            wv[i * dim + j] = acc;
        }
    }
    let w = crate::linalg::DenseSymmetric::symmetrized(dim, &wv)?;
    let eps_obs = spectral_norm(&w);
    Ok((eps_obs <= sketch.target_eps(), eps_obs))
}
