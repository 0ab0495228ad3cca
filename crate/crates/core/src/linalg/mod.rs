//! Minimal sparse/dense linear algebra shared by the whole crate: CSR
//! matrix-vector products, weighted Gram matrices `A^T diag(d) A`, dense SPD
//! solves, and extreme eigen/singular value estimation.
//!
//! All types are immutable after construction and all operations are pure
//! functions with fixed summation order, so results are identical across runs
//! and threads.

mod dense;
mod eigen;
mod solve;
mod sparse;

pub use dense::{DenseSymmetric, DenseVector};
pub use eigen::{
    extreme_singular_values, inverse_sqrt, min_eigenvalue, spectral_norm, sym_eigen, SymEigen,
};
pub use solve::{solve_spd, CholeskyFactor, SOLVE_RESIDUAL_TOL};
pub use sparse::{spmv, spmv_t, weighted_gram, SparseMatrix};
