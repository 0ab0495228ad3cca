//! Regularized exp/cosh/sinh regression with a certified sketched-Newton
//! solver.
//!
//! The problem solved is
//!
//! ```text
//! minimize over x:  0.5 * || f(A x) - b ||_2^2 + 0.5 * || diag(w) A x ||_2^2
//! ```
//!
//! where `A` is a sparse `n x d` design matrix, `f` is `exp`, `cosh` or
//! `sinh` applied element-wise, and the weights `w` regularize the otherwise
//! non-convex residual term. The crate ships:
//!
//! - [`losses`]: loss values, analytic gradients, diagonal Hessian factors,
//!   the per-family weight condition that certifies strong convexity, and the
//!   Hessian-Lipschitz constant;
//! - [`sketch`]: leverage-score subsampling of the Hessian factor with a
//!   spectral sandwich guarantee, and the matching runtime check;
//! - [`newton`]: exact and sketched Newton drivers with per-iteration
//!   contraction diagnostics and certificate gating;
//! - [`oracle`]: finite-difference and quadrature verification used by tests
//!   and the CLI's verify mode;
//! - [`linalg`]: the minimal sparse/dense kernels everything is built on;
//! - [`rng`]: counter-based deterministic random numbers so every sampling
//!   decision reproduces from a seed, in any language.
//!
//! All operations are pure functions over immutable data with fixed
//! summation order: a solve is bit-for-bit reproducible from its inputs and
//! seed.

// Index loops mirror the kernel arithmetic; `!(x > 0)` is used where NaN
// must fail the check.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod losses;
pub mod newton;
pub mod oracle;
pub mod rng;
pub mod sketch;

pub use error::{Error, Result};
pub use linalg::{DenseSymmetric, DenseVector, SparseMatrix};
pub use losses::{auto_weight, ConditionReport, LossFamily, ProblemInstance, RadiusBundle};
pub use newton::{
    solve, solve_with_reference, SolveMode, SolveReport, SolveStatus, SolverConfig,
};
pub use sketch::{SketchParams, SketchedDiagonal};
