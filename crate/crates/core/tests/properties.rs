//! Cross-module invariants and oracle comparisons.
//!
//! The linear-algebra kernels are checked against nalgebra's dense routines,
//! derivatives against finite differences, and the sampler against its
//! statistical contract. Oracles are always computed through an independent
//! route from the code under test.

mod common;

use common::{
    gen_instance, gen_point_with_row_bound, gen_sparse, gen_uncertified, gen_unit_direction,
    InstanceSpec, OptimumMode,
};
use hypernewton::linalg::{
    extreme_singular_values, min_eigenvalue, spectral_norm, spmv, spmv_t, weighted_gram,
    DenseVector, SparseMatrix,
};
use hypernewton::losses::{lipschitz_bound, LossFamily, ProblemInstance, RadiusBundle};
use hypernewton::newton::{
    approx_step, exact_step, good_start_check, solve_with_reference, SolveMode, SolverConfig,
    SolveStatus,
};
use hypernewton::oracle::{fd_gradient, integral_identity_check, reference_optimum};
use hypernewton::rng;
use hypernewton::sketch::{leverage_scores, subsample, SketchParams};
use proptest::prelude::*;

fn to_na(a: &SparseMatrix) -> nalgebra::DMatrix<f64> {
    let dense = a.to_dense();
    nalgebra::DMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| dense[i][j])
}

fn rand_vec(n: usize, scale: f64, seed: u64) -> DenseVector {
    DenseVector::new(
        (0..n)
            .map(|i| rng::draw_symmetric(seed, i as u64, 3, scale))
            .collect(),
    )
    .unwrap()
}

// --- sparse kernels vs dense oracles -------------------------------------

#[test]
fn spmv_matches_dense_oracle() {
    for seed in 0..20u64 {
        let a = gen_sparse(5, 3, 2, 1.5, seed);
        let x = rand_vec(3, 2.0, seed ^ 0xABCD);
        let mine = spmv(&a, &x).unwrap();
        let oracle = to_na(&a) * nalgebra::DVector::from_column_slice(x.as_slice());
        for i in 0..5 {
            assert!((mine[i] - oracle[i]).abs() <= 1e-14 * (1.0 + oracle[i].abs()));
        }
    }
}

#[test]
fn spmv_t_matches_dense_oracle() {
    for seed in 0..20u64 {
        let a = gen_sparse(5, 3, 2, 1.5, seed);
        let y = rand_vec(5, 2.0, seed ^ 0x1234);
        let mine = spmv_t(&a, &y).unwrap();
        let oracle = to_na(&a).transpose() * nalgebra::DVector::from_column_slice(y.as_slice());
        for i in 0..3 {
            assert!((mine[i] - oracle[i]).abs() <= 1e-14 * (1.0 + oracle[i].abs()));
        }
    }
}

#[test]
fn weighted_gram_matches_dense_triple_product() {
    for seed in 0..20u64 {
        let a = gen_sparse(6, 2, 2, 1.5, seed);
        let d = DenseVector::new(
            (0..6)
                .map(|i| 0.1 + rng::draw_f64(seed, i as u64, 77) * 3.0)
                .collect(),
        )
        .unwrap();
        let mine = weighted_gram(&a, &d).unwrap();
        let na = to_na(&a);
        let diag = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            d.as_slice(),
        ));
        let oracle = na.transpose() * diag * na;
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (mine.get(i, j) - oracle[(i, j)]).abs()
                        <= 1e-13 * (1.0 + oracle[(i, j)].abs())
                );
            }
        }
    }
}

#[test]
fn extreme_singular_values_match_svd_oracle() {
    for seed in 0..10u64 {
        let a = gen_sparse(20, 4, 3, 1.2, seed);
        let (lo, hi) = extreme_singular_values(&a).unwrap();
        let svd = to_na(&a).svd(false, false);
        let sv = svd.singular_values;
        let oracle_hi = sv.iter().cloned().fold(0.0f64, f64::max);
        let oracle_lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((hi - oracle_hi).abs() <= 1e-8 * oracle_hi);
        assert!((lo - oracle_lo).abs() <= 1e-8 * oracle_lo.max(1e-30));
    }
}

#[test]
fn min_eigenvalue_matches_eigen_oracle() {
    for seed in 0..10u64 {
        let a = gen_sparse(10, 10, 4, 1.0, seed);
        let na = to_na(&a);
        let sym = nalgebra::DMatrix::from_fn(10, 10, |i, j| 0.5 * (na[(i, j)] + na[(j, i)]));
        let mut vals = vec![0.0; 100];
        for i in 0..10 {
            for j in 0..10 {
                vals[i * 10 + j] = sym[(i, j)];
            }
        }
        let h = hypernewton::linalg::DenseSymmetric::new(10, vals).unwrap();
        let mine = min_eigenvalue(&h);
        let oracle = nalgebra::SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!((mine - oracle).abs() <= 1e-8 * (1.0 + oracle.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // A^T (A x) through the sparse kernels vs the dense product.
    #[test]
    fn gram_vector_identity(seed in any::<u64>(), n in 4usize..50, d in 1usize..8) {
        let d = d.min(n);
        let a = gen_sparse(n, d, 3, 1.0, seed);
        let x = rand_vec(d, 1.0, seed ^ 0x55);
        let mine = spmv_t(&a, &spmv(&a, &x).unwrap()).unwrap();
        let na = to_na(&a);
        let oracle = na.transpose() * (na * nalgebra::DVector::from_column_slice(x.as_slice()));
        let scale = oracle.norm().max(1e-30);
        let mut diff = 0.0f64;
        for i in 0..d {
            diff += (mine[i] - oracle[i]) * (mine[i] - oracle[i]);
        }
        prop_assert!(diff.sqrt() <= 1e-12 * scale.max(1.0));
    }

    // A^T diag(d) A with positive d dominates sigma_min^2 * min(d) * I.
    #[test]
    fn gram_lower_bound(seed in any::<u64>(), n in 2usize..30, d in 1usize..6) {
        let d_cols = d.min(n);
        let a = gen_sparse(n, d_cols, 2, 1.0, seed);
        let diag = DenseVector::new(
            (0..n).map(|i| 0.05 + rng::draw_f64(seed, i as u64, 9) * 2.0).collect(),
        ).unwrap();
        let gram = weighted_gram(&a, &diag).unwrap();
        let (sigma_min, _) = extreme_singular_values(&a).unwrap();
        let min_d = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(min_eigenvalue(&gram) >= sigma_min * sigma_min * min_d - 1e-9);
    }

    // cosh^2 - sinh^2 = 1 for the shared element-wise kernel.
    #[test]
    fn hyperbolic_identity(t in -3.0f64..3.0) {
        let (c, s) = LossFamily::Cosh.eval_pair(t);
        prop_assert!((c * c - s * s - 1.0).abs() <= 1e-10);
        // eval_pair returns (sinh, cosh) for the sinh family; same identity.
        let (s2, c2) = LossFamily::Sinh.eval_pair(t);
        prop_assert!((c2 * c2 - s2 * s2 - 1.0).abs() <= 1e-10);
    }

    // sinh is odd: with w = 0, L(A, b, x) = L(A, -b, -x).
    #[test]
    fn sinh_parity(seed in any::<u64>()) {
        let a = gen_sparse(8, 3, 2, 0.8, seed);
        let b = rand_vec(8, 1.5, seed ^ 0x77);
        let neg_b = DenseVector::new(b.iter().map(|v| -v).collect()).unwrap();
        let w = DenseVector::zeros(8);
        let inst = ProblemInstance::new(a.clone(), b, w.clone(), LossFamily::Sinh, 1.0).unwrap();
        let inst_neg = ProblemInstance::new(a, neg_b, w, LossFamily::Sinh, 1.0).unwrap();
        let x = rand_vec(3, 1.0, seed ^ 0x99);
        let neg_x = DenseVector::new(x.iter().map(|v| -v).collect()).unwrap();
        let l1 = inst.eval_loss(&x).unwrap();
        let l2 = inst_neg.eval_loss(&neg_x).unwrap();
        prop_assert!((l1 - l2).abs() <= 1e-12 * (1.0 + l1.abs()));
    }
}

// --- loss analysis invariants ---------------------------------------------

#[test]
fn eval_loss_matches_stdlib_scalar_reference() {
    // Independent route: std's exp/cosh/sinh per element instead of the
    // shared single-exp kernel.
    for seed in 0..15u64 {
        let family = LossFamily::ALL[(seed % 3) as usize];
        let inst = gen_uncertified(family, 6, 2, 0.8, seed);
        let x = gen_point_with_row_bound(inst.matrix(), 2.0, seed ^ 0xE1);
        let u = spmv(inst.matrix(), &x).unwrap();
        let mut reference = 0.0;
        for i in 0..6 {
            let f = match family {
                LossFamily::Exp => u[i].exp(),
                LossFamily::Cosh => u[i].cosh(),
                LossFamily::Sinh => u[i].sinh(),
            };
            let r = f - inst.target()[i];
            let reg = inst.weights()[i] * u[i];
            reference += 0.5 * r * r + 0.5 * reg * reg;
        }
        let mine = inst.eval_loss(&x).unwrap();
        assert!(
            (mine - reference).abs() <= 1e-12 * (1.0 + reference.abs()),
            "seed {seed}: {mine} vs {reference}"
        );
    }
}

#[test]
fn certified_hessian_factor_stays_above_margin_floor() {
    // Under the weight condition, every diagonal entry of the Hessian
    // factor exceeds margin / sigma_min^2.
    for (i, family) in LossFamily::ALL.iter().enumerate() {
        let spec = InstanceSpec {
            family: *family,
            n: 30,
            d: 4,
            nnz_per_row: 3,
            scale: 0.7,
            margin: 0.9,
            slack: 0.02,
            optimum: OptimumMode::Random(0.5),
            seed: 600 + i as u64,
        };
        let inst = gen_instance(&spec);
        let report = inst.check_weight_condition().unwrap();
        assert!(report.verdict);
        let floor = inst.margin() / (report.sigma_min * report.sigma_min);
        for point in 0..8u64 {
            let x = gen_point_with_row_bound(inst.matrix(), 2.0, rng::derive_seed(point, 61));
            let factor = inst.hessian_factor(&x).unwrap();
            assert!(
                factor.min_entry() > floor,
                "{}: min entry {:e} at floor {floor:e}",
                family.name(),
                factor.min_entry()
            );
        }
    }
}

#[test]
fn hessian_lipschitz_bound_never_violated() {
    // Pairs restricted to the bound's hypotheses: ||x||, ||y|| <= R,
    // ||A|| <= R, ||b||_2 <= R, ||A(x - y)||_inf < 0.01.
    let mut checked = 0;
    for seed in 0..50u64 {
        let a = gen_sparse(6, 2, 2, 0.5, seed);
        let (_, sigma_max) = extreme_singular_values(&a).unwrap();
        let b = rand_vec(6, 0.5, seed ^ 0xB);
        let radius = 2.1f64.max(sigma_max).max(b.norm());
        let m = lipschitz_bound(radius).unwrap();
        let inst = ProblemInstance::new(
            a.clone(),
            b,
            DenseVector::zeros(6),
            LossFamily::ALL[(seed % 3) as usize],
            1.0,
        )
        .unwrap();

        let x = rand_vec(2, 0.5, seed ^ 0xC);
        let step = gen_unit_direction(2, seed ^ 0xD);
        let delta = 0.009 / sigma_max.max(1e-9);
        let y = x.add_scaled(delta, &step).unwrap();
        if spmv(&a, &x.sub(&y).unwrap()).unwrap().inf_norm() >= 0.01 {
            continue;
        }
        let hx = inst.hessian(&x).unwrap();
        let hy = inst.hessian(&y).unwrap();
        let observed = spectral_norm(&hx.sub(&hy).unwrap());
        assert!(
            observed <= m * x.dist(&y),
            "seed {seed}: ratio {:e} above bound {m:e}",
            observed / x.dist(&y)
        );
        checked += 1;
    }
    assert!(checked >= 40, "only {checked} admissible pairs drawn");
}

// --- sketch statistics ------------------------------------------------------

#[test]
fn leverage_scores_match_explicit_gram_inverse() {
    for seed in 0..10u64 {
        let a = gen_sparse(20, 3, 2, 1.0, seed);
        let d = DenseVector::new(
            (0..20)
                .map(|i| 0.2 + rng::draw_f64(seed, i as u64, 13) * 2.0)
                .collect(),
        )
        .unwrap();
        let tau = leverage_scores(&a, &d).unwrap();
        let total: f64 = tau.iter().sum();
        assert!((total - 3.0).abs() <= 1e-9, "score sum {total}");

        // Oracle: explicit inverse of the weighted Gram matrix.
        let na = to_na(&a);
        let diag = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            d.as_slice(),
        ));
        let gram = na.transpose() * diag * na.clone();
        let inv = gram.try_inverse().unwrap();
        for i in 0..20 {
            let row = na.row(i).transpose();
            let oracle = d[i] * (row.transpose() * &inv * row)[(0, 0)];
            assert!((tau[i] - oracle).abs() <= 1e-9, "row {i}");
            assert!((0.0..=1.0).contains(&tau[i]));
        }
    }
}

#[test]
fn sketch_unbiased_over_seeds() {
    // Interior keep probabilities so the estimator actually randomizes.
    let a = gen_sparse(50, 3, 2, 1.0, 424242);
    let d = DenseVector::new(
        (0..50)
            .map(|i| 0.5 + rng::draw_f64(99, i as u64, 1) * 1.5)
            .collect(),
    )
    .unwrap();
    let exact = weighted_gram(&a, &d).unwrap();

    let trials = 2000u64;
    let mut sum = [0.0f64; 9];
    let mut sq_sum = [0.0f64; 9];
    for t in 0..trials {
        let params = SketchParams::with_oversample(0.45, 0.5, t, 0.2).unwrap();
        let sketch = subsample(&a, &d, &params).unwrap();
        let gram = weighted_gram(&a, &sketch.to_dense()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v = gram.get(i, j);
                sum[i * 3 + j] += v;
                sq_sum[i * 3 + j] += v * v;
            }
        }
    }
    let nf = trials as f64;
    for i in 0..3 {
        for j in 0..3 {
            let mean = sum[i * 3 + j] / nf;
            let var = (sq_sum[i * 3 + j] / nf - mean * mean).max(0.0);
            let se = (var / nf).sqrt();
            let target = exact.get(i, j);
            assert!(
                (mean - target).abs() <= 3.0 * se + 1e-12 * (1.0 + target.abs()),
                "entry ({i}, {j}): mean {mean}, target {target}, se {se}"
            );
        }
    }
}

#[test]
fn sketch_sparsity_bound_every_seed() {
    let a = gen_sparse(400, 4, 3, 1.0, 7);
    let d = DenseVector::new(
        (0..400)
            .map(|i| 0.3 + rng::draw_f64(5, i as u64, 2) * 1.2)
            .collect(),
    )
    .unwrap();
    // Small oversampling constant to force genuine sampling.
    let c = 0.5;
    let (eps_h, delta) = (0.3, 0.1);
    let bound = c * 4.0 * (400.0f64 / delta).ln() / (eps_h * eps_h);
    for seed in 0..100u64 {
        let params = SketchParams::with_oversample(eps_h, delta, seed, c).unwrap();
        let sketch = subsample(&a, &d, &params).unwrap();
        assert!(
            (sketch.nnz() as f64) <= bound + 6.0 * bound.sqrt(),
            "seed {seed}: nnz {} vs bound {bound}",
            sketch.nnz()
        );
    }
}

#[test]
fn sketch_sandwich_success_rate_with_genuine_sampling() {
    // Keep probabilities are interior here, so the sandwich actually risks
    // failing; the empirical success rate must stay above the binomial
    // lower bound for probability 1 - delta at 99% confidence.
    let a = gen_sparse(2000, 3, 2, 1.0, 31);
    let d = DenseVector::new(
        (0..2000)
            .map(|i| 0.4 + rng::draw_f64(17, i as u64, 4) * 1.4)
            .collect(),
    )
    .unwrap();
    let (eps_h, delta, c) = (0.25, 0.05, 1.5);
    let trials = 200u64;
    let mut successes = 0u64;
    let mut sampled = false;
    for seed in 0..trials {
        let params = SketchParams::with_oversample(eps_h, delta, seed, c).unwrap();
        let sketch = subsample(&a, &d, &params).unwrap();
        sampled |= sketch.nnz() < 2000;
        let (holds, _) = hypernewton::sketch::spectral_sandwich_check(&a, &d, &sketch).unwrap();
        if holds {
            successes += 1;
        }
    }
    assert!(sampled, "parameters failed to trigger real subsampling");
    // 200 * 0.95 - 2.33 * sqrt(200 * 0.05 * 0.95) ~ 182.8
    assert!(
        successes >= 183,
        "only {successes}/200 sandwiches held"
    );
}

#[test]
fn approx_step_close_to_exact_step() {
    let spec = InstanceSpec {
        family: LossFamily::Exp,
        n: 60,
        d: 4,
        nnz_per_row: 3,
        scale: 0.6,
        margin: 1.0,
        slack: 0.05,
        optimum: OptimumMode::Random(0.5),
        seed: 2024,
    };
    let inst = gen_instance(&spec);
    let x = gen_point_with_row_bound(inst.matrix(), 0.4, 5150);
    let exact = exact_step(&inst, &x).unwrap();
    let exact_step_norm = exact.dist(&x);

    // Spec'd configuration: eps_h = 0.01 saturates every keep probability at
    // this size, so the sketched step reproduces the exact one.
    let mut diffs = Vec::new();
    for seed in 0..20u64 {
        let params = SketchParams::new(0.01, 0.05, seed).unwrap();
        let (next, _) = approx_step(&inst, &x, &params).unwrap();
        diffs.push(next.dist(&exact));
    }
    diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(diffs[10] <= 0.05 * exact_step_norm);

    // Genuine sampling needs a larger instance before keep probabilities
    // leave saturation; the sandwich then still keeps the sketched step
    // within a small multiple of the exact one at the median over seeds.
    let wide_spec = InstanceSpec {
        n: 600,
        seed: 2025,
        ..spec
    };
    let wide = gen_instance(&wide_spec);
    let xw = gen_point_with_row_bound(wide.matrix(), 0.4, 5151);
    let exact_w = exact_step(&wide, &xw).unwrap();
    let exact_w_norm = exact_w.dist(&xw);
    let mut real_diffs = Vec::new();
    for seed in 0..20u64 {
        let params = SketchParams::with_oversample(0.25, 0.05, seed, 0.5).unwrap();
        let (next, sketch) = approx_step(&wide, &xw, &params).unwrap();
        assert!(sketch.nnz() < 600, "seed {seed} did not subsample");
        real_diffs.push(next.dist(&exact_w));
    }
    real_diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(
        real_diffs[10] <= 0.75 * exact_w_norm,
        "median {:e} vs step {:e}",
        real_diffs[10],
        exact_w_norm
    );
}

#[test]
fn exact_step_decreases_loss_inside_basin() {
    for seed in 0..10u64 {
        let spec = InstanceSpec {
            family: LossFamily::ALL[(seed % 3) as usize],
            n: 50,
            d: 3,
            nnz_per_row: 2,
            scale: 0.6,
            margin: 1.0,
            slack: 0.05,
            optimum: OptimumMode::Random(0.5),
            seed: 700 + seed,
        };
        let inst = gen_instance(&spec);
        let x_ref = reference_optimum(&inst, &DenseVector::zeros(3)).unwrap();
        let x = x_ref
            .add_scaled(0.05, &gen_unit_direction(3, seed ^ 0x5D))
            .unwrap();
        let next = exact_step(&inst, &x).unwrap();
        assert!(
            inst.eval_loss(&next).unwrap() < inst.eval_loss(&x).unwrap(),
            "seed {seed}: step did not decrease the loss"
        );
    }
}

// --- oracle self-checks -----------------------------------------------------

#[test]
fn fd_hessian_approaches_regularizer_gram_for_huge_weights() {
    let a = gen_sparse(10, 3, 2, 0.8, 808);
    let b = rand_vec(10, 1.0, 809);
    let w = DenseVector::new(vec![1e4; 10]).unwrap();
    let w_sq = DenseVector::new(w.iter().map(|v| v * v).collect()).unwrap();
    let inst = ProblemInstance::new(a.clone(), b, w, LossFamily::Exp, 1.0).unwrap();
    let x = gen_point_with_row_bound(&a, 0.5, 810);
    let fd = hypernewton::oracle::fd_hessian(&inst, &x, 1e-4).unwrap();
    let reg = weighted_gram(&a, &w_sq).unwrap();
    let rel = fd.sub(&reg).unwrap().frobenius_norm() / reg.frobenius_norm();
    assert!(rel <= 1e-6, "relative deviation {rel:e}");
}

#[test]
fn fd_error_decays_quadratically() {
    let inst = gen_uncertified(LossFamily::Exp, 12, 3, 0.7, 99);
    let x = gen_point_with_row_bound(inst.matrix(), 1.0, 1234);
    let analytic = inst.gradient(&x).unwrap();
    let err = |h: f64| {
        fd_gradient(&inst, &x, h)
            .unwrap()
            .sub(&analytic)
            .unwrap()
            .norm()
    };
    let ratio = err(1e-3) / err(5e-4);
    assert!(
        (3.5..=4.5).contains(&ratio),
        "O(h^2) decay ratio {ratio} out of range"
    );
}

#[test]
fn reference_optimum_is_fixed_point_and_basin_unique() {
    let spec = InstanceSpec {
        family: LossFamily::Cosh,
        n: 40,
        d: 3,
        nnz_per_row: 2,
        scale: 0.6,
        margin: 1.0,
        slack: 0.05,
        optimum: OptimumMode::Random(0.4),
        seed: 77,
    };
    let inst = gen_instance(&spec);
    let x_ref = reference_optimum(&inst, &DenseVector::zeros(3)).unwrap();

    let next = exact_step(&inst, &x_ref).unwrap();
    assert!(next.dist(&x_ref) <= 1e-10);

    let other_start = gen_point_with_row_bound(inst.matrix(), 0.3, 31337);
    let again = reference_optimum(&inst, &other_start).unwrap();
    assert!(again.dist(&x_ref) <= 1e-9);
}

#[test]
fn integral_identity_on_random_segments() {
    for seed in 0..10u64 {
        let inst = gen_uncertified(LossFamily::ALL[(seed % 3) as usize], 15, 3, 0.6, seed);
        let x = gen_point_with_row_bound(inst.matrix(), 1.0, seed ^ 0xF0);
        let y = gen_point_with_row_bound(inst.matrix(), 1.5, seed ^ 0x0F);
        let err = integral_identity_check(&inst, &x, &y, 64).unwrap();
        assert!(err <= 1e-6, "seed {seed}: relative error {err:e}");
    }
}

// --- exact-mode contraction ---------------------------------------------

#[test]
fn exact_mode_contraction_tighter_than_sketched_bound() {
    // Inside a certified basin the exact update contracts at
    // 2 M r / (margin - M r); measured distances sit on top of solver
    // arithmetic, so the bound is checked above a 1e-14 floor.
    let spec = InstanceSpec {
        family: LossFamily::Exp,
        n: 120,
        d: 4,
        nnz_per_row: 3,
        scale: 0.5,
        margin: 1e10,
        slack: 1.0,
        optimum: OptimumMode::Random(0.5),
        seed: 4242,
    };
    let inst = gen_instance(&spec);
    let x_ref = reference_optimum(&inst, &DenseVector::zeros(4)).unwrap();
    let bundle = RadiusBundle::new(2.000001).unwrap();

    let dir = gen_unit_direction(4, 888);
    let x0 = x_ref.add_scaled(6e-4, &dir).unwrap();
    assert!(good_start_check(&inst, &x0, &bundle, &x_ref));

    let mut cfg = SolverConfig::new(1e-6, 0.01).unwrap();
    cfg.mode = SolveMode::Exact;
    let report = solve_with_reference(&inst, &x0, &cfg, Some(&x_ref)).unwrap();
    assert_eq!(report.status, SolveStatus::Converged);
    assert!(report.updates() >= 1);

    let dists: Vec<f64> = report
        .iterates
        .iter()
        .map(|it| it.dist_to_ref.unwrap())
        .collect();
    for k in 0..dists.len() - 1 {
        let mr = bundle.lipschitz() * dists[k];
        assert!(mr < inst.margin(), "basin left at step {k}");
        let bound = 2.0 * mr / (inst.margin() - mr) * dists[k];
        assert!(
            dists[k + 1] <= bound.max(1e-14),
            "step {k}: {} vs bound {bound:e}",
            dists[k + 1]
        );
    }
}
