use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// Numerical failures carry the quantity that tripped them so callers can
/// report certificate violations precisely instead of panicking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// A Cholesky pivot came out non-positive. For Hessian solves this means
    /// the convexity certificate was violated at the current iterate.
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// The multiply-back residual of a dense solve exceeded its contract even
    /// after iterative refinement.
    #[error("linear solve residual {residual:e} exceeds bound {bound:e}")]
    SolveResidual { residual: f64, bound: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("matrix is rank deficient (sigma_min = {sigma_min:e})")]
    RankDeficient { sigma_min: f64 },

    /// An element-wise evaluation left the floating range. The radius
    /// assumption of the loss analysis no longer holds, so evaluation aborts
    /// instead of propagating infinities into the solve loop.
    #[error("floating-point overflow: {0}")]
    Overflow(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("reference solve failed: {0}")]
    OracleFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
