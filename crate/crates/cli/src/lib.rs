//! Library surface of the CLI so integration tests can drive ingestion,
//! synthesis and report assembly directly.

// `!(x > 0)` is used where NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod error;
pub mod mtx;
pub mod report;
pub mod synth;
pub mod vectxt;

pub use app::{execute, exit_code, Cli};
pub use error::{CliError, Result};
