//! Deterministic instance generators shared by the integration suites.

use hypernewton::linalg::{extreme_singular_values, spmv, DenseVector, SparseMatrix};
use hypernewton::losses::{auto_weight, LossFamily, ProblemInstance};
use hypernewton::rng;

/// Random sparse matrix with `nnz_per_row` entries per row, full column rank.
///
/// Rows `0..d` always include their diagonal column so rank deficiency is a
/// pathological draw; if one happens anyway we retry with a derived seed.
pub fn gen_sparse(n: usize, d: usize, nnz_per_row: usize, scale: f64, seed: u64) -> SparseMatrix {
    assert!(n >= d && d >= 1);
    let per_row = nnz_per_row.min(d).max(1);
    for attempt in 0..32u64 {
        let s = rng::derive_seed(seed, attempt);
        let mut triplets = Vec::with_capacity(n * per_row);
        for i in 0..n {
            let mut cols = Vec::with_capacity(per_row);
            if i < d {
                cols.push(i);
            }
            let mut counter = 0u64;
            while cols.len() < per_row {
                let c = (rng::draw_u64(s, i as u64, counter) % d as u64) as usize;
                counter += 1;
                if !cols.contains(&c) {
                    cols.push(c);
                }
            }
            cols.sort_unstable();
            for (j, &c) in cols.iter().enumerate() {
                let v = rng::draw_symmetric(s, i as u64, 1000 + j as u64, scale);
                triplets.push((i, c, v));
            }
        }
        let a = SparseMatrix::from_triplets(n, d, &triplets).expect("valid triplets");
        let (sigma_min, sigma_max) = extreme_singular_values(&a).expect("tall matrix");
        if sigma_min > 1e-6 * sigma_max.max(1.0) {
            return a;
        }
    }
    panic!("could not draw a full-rank matrix");
}

/// Random point with `||A x||_inf` scaled to exactly `target_inf` (or zero).
pub fn gen_point_with_row_bound(
    a: &SparseMatrix,
    target_inf: f64,
    seed: u64,
) -> DenseVector {
    let d = a.n_cols();
    let raw: Vec<f64> = (0..d)
        .map(|j| rng::draw_symmetric(seed, j as u64, 42, 1.0))
        .collect();
    let raw = DenseVector::new(raw).unwrap();
    let reach = spmv(a, &raw).unwrap().inf_norm();
    if reach == 0.0 || target_inf == 0.0 {
        return DenseVector::zeros(d);
    }
    let scale = target_inf / reach;
    DenseVector::new(raw.iter().map(|v| v * scale).collect()).unwrap()
}

/// How the synthetic target vector is constructed.
#[derive(Clone, Copy)]
#[allow(dead_code)] // not every test target uses both modes
pub enum OptimumMode {
    /// `b = f(0)`, so the unregularized residual vanishes at the origin.
    Zero,
    /// `b = f(A x_star)` for a random `x_star` with `||A x_star||_inf` equal
    /// to the given bound.
    Random(f64),
}

pub struct InstanceSpec {
    pub family: LossFamily,
    pub n: usize,
    pub d: usize,
    pub nnz_per_row: usize,
    pub scale: f64,
    pub margin: f64,
    pub slack: f64,
    pub optimum: OptimumMode,
    pub seed: u64,
}

/// Certified synthetic instance: targets from a planted point, weights from
/// `auto_weight` so the convexity certificate passes with `slack` headroom.
pub fn gen_instance(spec: &InstanceSpec) -> ProblemInstance {
    let a = gen_sparse(spec.n, spec.d, spec.nnz_per_row, spec.scale, spec.seed);
    let x_star = match spec.optimum {
        OptimumMode::Zero => DenseVector::zeros(spec.d),
        OptimumMode::Random(bound) => {
            gen_point_with_row_bound(&a, bound, rng::derive_seed(spec.seed, 7))
        }
    };
    let u = spmv(&a, &x_star).unwrap();
    let b = DenseVector::new(
        (0..u.len())
            .map(|i| spec.family.eval_pair(u[i]).0)
            .collect(),
    )
    .unwrap();
    let w = auto_weight(&a, &b, spec.family, spec.margin, spec.slack).unwrap();
    ProblemInstance::new(a, b, w, spec.family, spec.margin).unwrap()
}

/// Uncertified random instance for derivative checks: arbitrary targets and
/// weights, no planted optimum.
pub fn gen_uncertified(
    family: LossFamily,
    n: usize,
    d: usize,
    scale: f64,
    seed: u64,
) -> ProblemInstance {
    let a = gen_sparse(n, d, 3, scale, seed);
    let b = DenseVector::new(
        (0..n)
            .map(|i| rng::draw_symmetric(rng::derive_seed(seed, 1), i as u64, 0, 2.0))
            .collect(),
    )
    .unwrap();
    let w = DenseVector::new(
        (0..n)
            .map(|i| rng::draw_f64(rng::derive_seed(seed, 2), i as u64, 0) * 2.0)
            .collect(),
    )
    .unwrap();
    ProblemInstance::new(a, b, w, family, 1.0).unwrap()
}

/// Unit direction derived from a seed.
pub fn gen_unit_direction(d: usize, seed: u64) -> DenseVector {
    let raw: Vec<f64> = (0..d)
        .map(|j| rng::draw_symmetric(seed, j as u64, 5, 1.0))
        .collect();
    let v = DenseVector::new(raw).unwrap();
    let norm = v.norm();
    assert!(norm > 0.0);
    DenseVector::new(v.iter().map(|x| x / norm).collect()).unwrap()
}
