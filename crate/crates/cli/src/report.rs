//! The machine-readable run report.
//!
//! Floats are serialized in scientific notation with 17 significant digits,
//! enough for bit-exact round trips; non-finite values (an overflowed
//! gradient norm, a Lipschitz constant past the floating range) become JSON
//! `null`.

use std::io;

use serde::Serialize;

use hypernewton::newton::SolveReport;

#[derive(Debug, Serialize)]
pub struct ReportDoc {
    pub status: String,
    pub config: ConfigEcho,
    pub certificate: CertificateBlock,
    pub iterations: Vec<IterationRow>,
    pub final_x: Vec<f64>,
    pub contraction_ratios: Vec<f64>,
    pub verify: Option<VerifyBlock>,
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    /// Where the instance came from: a file set or a synth spec.
    pub input: String,
    pub family: String,
    pub l: f64,
    pub eps: f64,
    pub delta: f64,
    pub eps_h: f64,
    pub mode: String,
    pub seed: u64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub auto_weight_slack: Option<f64>,
    /// Starting point policy; always the origin for this tool.
    pub x0: String,
}

#[derive(Debug, Serialize)]
pub struct CertificateBlock {
    pub weight_condition: WeightConditionDetail,
    pub sigma_min: f64,
    /// `exp(6 R^2)`; null when it exceeds the floating range.
    pub lipschitz_m: f64,
    pub r_used: f64,
}

#[derive(Debug, Serialize)]
pub struct WeightConditionDetail {
    pub family: String,
    pub l: f64,
    pub verdict: bool,
    pub n_failing: usize,
    pub failing_indices: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct IterationRow {
    pub k: usize,
    pub grad_norm: f64,
    pub step_norm: f64,
    pub dist_to_ref: Option<f64>,
    pub sketch_nnz: Option<usize>,
    pub wall_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyBlock {
    pub fd_gradient_rel_err: f64,
    pub fd_hessian_rel_err: f64,
    pub integral_identity_rel_err: f64,
}

pub fn iteration_rows(report: &SolveReport) -> Vec<IterationRow> {
    report
        .iterates
        .iter()
        .map(|it| IterationRow {
            k: it.k,
            grad_norm: it.grad_norm,
            step_norm: it.step_norm,
            dist_to_ref: it.dist_to_ref,
            sketch_nnz: it.sketch_nnz,
            wall_ms: it.wall_ms,
        })
        .collect()
}

/// serde_json formatter writing every finite float as `{:.16e}`.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:e}")
    }
}

pub fn to_json(doc: &ReportDoc) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    doc.serialize(&mut ser).expect("report serialization");
    let mut text = String::from_utf8(buf).expect("json is utf-8");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_doc(value: f64) -> ReportDoc {
        ReportDoc {
            status: "converged".into(),
            config: ConfigEcho {
                input: "test".into(),
                family: "exp".into(),
                l: value,
                eps: 1e-6,
                delta: 0.01,
                eps_h: 0.01,
                mode: "sketched".into(),
                seed: u64::MAX,
                max_iters: 50,
                grad_tol: 5e-7,
                auto_weight_slack: None,
                x0: "zeros".into(),
            },
            certificate: CertificateBlock {
                weight_condition: WeightConditionDetail {
                    family: "exp".into(),
                    l: value,
                    verdict: true,
                    n_failing: 0,
                    failing_indices: vec![],
                },
                sigma_min: 1.0,
                lipschitz_m: f64::INFINITY,
                r_used: 2.5,
            },
            iterations: vec![],
            final_x: vec![value],
            contraction_ratios: vec![],
            verify: None,
        }
    }

    #[test]
    fn floats_carry_17_significant_digits() {
        let text = to_json(&tiny_doc(1.0 / 3.0));
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
    }

    #[test]
    fn non_finite_becomes_null() {
        let text = to_json(&tiny_doc(0.5));
        assert!(text.contains("\"lipschitz_m\":null"), "{text}");
    }

    #[test]
    fn large_seed_survives() {
        let text = to_json(&tiny_doc(0.5));
        assert!(text.contains(&u64::MAX.to_string()), "{text}");
    }

    #[test]
    fn output_parses_back() {
        let text = to_json(&tiny_doc(1.0 / 7.0));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let x = value["final_x"][0].as_f64().unwrap();
        assert_eq!(x, 1.0 / 7.0);
    }
}
