//! Command-line front end: instance ingestion, solver configuration,
//! certificate reporting, and the JSON run report.

use std::fs;
use std::path::PathBuf;

use clap::Parser;

use hypernewton::linalg::extreme_singular_values;
use hypernewton::losses::auto_weight;
use hypernewton::newton::{solve_with_reference, SolveMode, SolveStatus, SolverConfig};
use hypernewton::oracle::{
    fd_gradient, fd_hessian, integral_identity_check, reference_optimum, DEFAULT_GRADIENT_STEP,
    DEFAULT_HESSIAN_STEP,
};
use hypernewton::rng;
use hypernewton::{DenseVector, LossFamily, ProblemInstance};

use crate::error::{CliError, Result};
use crate::mtx::read_matrix_market;
use crate::report::{
    iteration_rows, to_json, CertificateBlock, ConfigEcho, ReportDoc, VerifyBlock,
    WeightConditionDetail,
};
use crate::synth::SynthSpec;
use crate::vectxt::read_vector;

/// Slack applied when `--synth` runs without an explicit weight source.
const DEFAULT_SYNTH_SLACK: f64 = 0.1;
/// Floor for the post-hoc radius estimate; the Lipschitz certificate is only
/// defined for radii above 2.
const RADIUS_FLOOR: f64 = 2.000001;

/// Solves regularized exp/cosh/sinh regression with certified Newton steps.
#[derive(Debug, Parser)]
#[command(name = "hypernewton", version, about)]
pub struct Cli {
    /// Design matrix in Matrix Market coordinate real general format.
    #[arg(long, conflicts_with = "synth", requires = "b")]
    pub matrix: Option<PathBuf>,

    /// Synthetic instance spec: n,d,nnz,scale,mode (mode: zero|random).
    #[arg(long)]
    pub synth: Option<String>,

    /// Target vector file, one value per line ('#' comments allowed).
    #[arg(long, conflicts_with = "synth")]
    pub b: Option<PathBuf>,

    /// Regularizer weight vector file.
    #[arg(long, conflicts_with = "auto_weight")]
    pub w: Option<PathBuf>,

    /// Derive weights that pass the convexity certificate with this slack.
    #[arg(long, value_name = "SLACK")]
    pub auto_weight: Option<f64>,

    /// Loss family: exp, cosh, or sinh.
    #[arg(long, default_value = "exp")]
    pub family: String,

    /// Convexity margin the certificate must establish.
    #[arg(long, default_value_t = 1.0)]
    pub l: f64,

    /// Target accuracy on the distance to the optimum, in (0, 0.1).
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,

    /// Failure probability budget for the sketched mode, in (0, 0.1).
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,

    /// Spectral half-width of the sketched Hessian, in (0, 0.5).
    #[arg(long, default_value_t = 0.01)]
    pub eps_h: f64,

    /// Update rule: exact or sketched.
    #[arg(long, default_value = "sketched")]
    pub mode: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,

    /// Gradient-norm stopping tolerance; defaults to l * eps / 2.
    #[arg(long)]
    pub grad_tol: Option<f64>,

    /// Override the radius used for the Lipschitz certificate (must be > 2).
    #[arg(long)]
    pub radius: Option<f64>,

    /// Also run finite-difference and quadrature spot checks.
    #[arg(long)]
    pub verify: bool,

    /// Report path; stdout when omitted. Writes are atomic.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged => 0,
        SolveStatus::CertificateFailed => 2,
        SolveStatus::MaxIters => 3,
        SolveStatus::Overflow => 4,
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let family = LossFamily::parse(&cli.family)
        .ok_or_else(|| CliError::Usage(format!("unknown family \"{}\"", cli.family)))?;
    let mode = SolveMode::parse(&cli.mode)
        .ok_or_else(|| CliError::Usage(format!("unknown mode \"{}\"", cli.mode)))?;
    if let Some(r) = cli.radius {
        if !(r > 2.0) {
            return Err(CliError::Usage(format!(
                "--radius must be greater than 2, got {r}"
            )));
        }
    }

    // Instance ingestion.
    let (matrix, target, input_desc) = if let Some(spec_text) = &cli.synth {
        let spec = SynthSpec::parse(spec_text, cli.seed)?;
        let (a, b) = spec.generate(family)?;
        (a, b, format!("synth:{spec_text}"))
    } else if let Some(mpath) = &cli.matrix {
        let a = read_matrix_market(mpath)?;
        let bpath = cli
            .b
            .as_ref()
            .ok_or_else(|| CliError::Usage("--matrix requires --b".into()))?;
        let b = read_vector(bpath)?;
        if b.len() != a.n_rows() {
            return Err(CliError::File {
                path: bpath.clone(),
                message: format!(
                    "target has {} entries but the matrix has {} rows",
                    b.len(),
                    a.n_rows()
                ),
            });
        }
        (a, b, format!("matrix:{}", mpath.display()))
    } else {
        return Err(CliError::Usage(
            "provide an instance with --matrix/--b or --synth".into(),
        ));
    };

    // Weight source.
    let (weights, slack_used) = if let Some(wpath) = &cli.w {
        let w = read_vector(wpath)?;
        if w.len() != matrix.n_rows() {
            return Err(CliError::File {
                path: wpath.clone(),
                message: format!(
                    "weights have {} entries but the matrix has {} rows",
                    w.len(),
                    matrix.n_rows()
                ),
            });
        }
        (w, None)
    } else {
        let slack = match cli.auto_weight {
            Some(s) if s >= 0.0 => s,
            Some(s) => {
                return Err(CliError::Usage(format!(
                    "--auto-weight slack must be non-negative, got {s}"
                )))
            }
            None if cli.synth.is_some() => DEFAULT_SYNTH_SLACK,
            None => {
                return Err(CliError::Usage(
                    "provide weights with --w or --auto-weight".into(),
                ))
            }
        };
        let w = auto_weight(&matrix, &target, family, cli.l, slack)?;
        (w, Some(slack))
    };

    let inst = ProblemInstance::new(matrix, target, weights, family, cli.l)?;

    let cfg = SolverConfig {
        eps: cli.eps,
        delta: cli.delta,
        eps_h: cli.eps_h,
        max_iters: cli.max_iters,
        grad_tol: cli.grad_tol,
        seed: cli.seed,
        mode,
    };
    cfg.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    // Reference optimum for distance diagnostics, when the certificate
    // allows a solve at all. Failure here only disables the diagnostics.
    let x0 = DenseVector::zeros(inst.dim());
    let certified = inst
        .check_weight_condition()
        .map(|r| r.verdict)
        .unwrap_or(false);
    let x_ref = if certified {
        reference_optimum(&inst, &x0).ok()
    } else {
        None
    };

    let report = solve_with_reference(&inst, &x0, &cfg, x_ref.as_ref())?;

    // Post-hoc radius for the Lipschitz certificate.
    let r_used = cli.radius.unwrap_or_else(|| {
        let sigma_max = extreme_singular_values(inst.matrix())
            .map(|(_, hi)| hi)
            .unwrap_or(0.0);
        let path_max = report
            .iterates
            .iter()
            .map(|it| it.x.norm())
            .fold(0.0f64, f64::max);
        RADIUS_FLOOR
            .max(sigma_max)
            .max(inst.target().norm())
            .max(path_max)
    });
    let lipschitz_m = (6.0 * r_used * r_used).exp();

    let verify = if cli.verify && report.status == SolveStatus::Converged {
        Some(run_verification(&inst, &report.final_x, cli.seed)?)
    } else {
        None
    };

    let doc = ReportDoc {
        status: report.status.name().into(),
        config: ConfigEcho {
            input: input_desc,
            family: family.name().into(),
            l: cli.l,
            eps: cli.eps,
            delta: cli.delta,
            eps_h: cli.eps_h,
            mode: mode.name().into(),
            seed: cli.seed,
            max_iters: cli.max_iters,
            grad_tol: cli.grad_tol.unwrap_or(0.5 * cli.l * cli.eps),
            auto_weight_slack: slack_used,
            x0: "zeros".into(),
        },
        certificate: CertificateBlock {
            weight_condition: WeightConditionDetail {
                family: family.name().into(),
                l: cli.l,
                verdict: report.certificates.verdict,
                n_failing: report.certificates.failing_indices().len(),
                failing_indices: report.certificates.failing_indices(),
            },
            sigma_min: report.certificates.sigma_min,
            lipschitz_m,
            r_used,
        },
        iterations: iteration_rows(&report),
        final_x: report.final_x.as_slice().to_vec(),
        contraction_ratios: report.contraction_ratios.clone(),
        verify,
    };
    let json = to_json(&doc);

    match &cli.out {
        Some(path) => {
            let mut tmp = path.clone();
            tmp.set_extension("tmp");
            fs::write(&tmp, &json)?;
            fs::rename(&tmp, path)?;
        }
        None => print!("{json}"),
    }

    Ok(exit_code(report.status))
}

/// Finite-difference and quadrature spot checks around the solution.
fn run_verification(
    inst: &ProblemInstance,
    final_x: &DenseVector,
    seed: u64,
) -> Result<VerifyBlock> {
    // Probe a generic nearby point; at the optimum itself the gradient is
    // zero and relative errors are meaningless.
    let d = inst.dim();
    let raw: Vec<f64> = (0..d)
        .map(|j| rng::draw_symmetric(rng::derive_seed(seed, 0xEF), j as u64, 0, 1.0))
        .collect();
    let dir = DenseVector::new(raw)?;
    let norm = dir.norm().max(1e-300);
    let probe = final_x.add_scaled(0.05 / norm, &dir)?;

    let analytic = inst.gradient(&probe)?;
    let fd = fd_gradient(inst, &probe, DEFAULT_GRADIENT_STEP)?;
    let fd_gradient_rel_err =
        fd.sub(&analytic)?.norm() / analytic.norm().max(1e-30);

    let hessian = inst.hessian(&probe)?;
    let fd_h = fd_hessian(inst, &probe, DEFAULT_HESSIAN_STEP)?;
    let fd_hessian_rel_err =
        fd_h.sub(&hessian)?.frobenius_norm() / hessian.frobenius_norm().max(1e-30);

    let integral_identity_rel_err = integral_identity_check(inst, final_x, &probe, 64)?;

    Ok(VerifyBlock {
        fd_gradient_rel_err,
        fd_hessian_rel_err,
        integral_identity_rel_err,
    })
}
