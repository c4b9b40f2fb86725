//! Library side of the `wfa` command: the automaton file format and the
//! `approximate` / `verify` commands as functions returning reports.

pub mod approximate;
pub mod document;
pub mod verify;

pub use approximate::{approximate, block_error, ApproximationReport, Certificate, Mode};
pub use document::{Transition, WfaDocument};
pub use verify::{render_report, run_suites, Suite, SuiteResult, VerifyOptions};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] wfa_aak::Error),
}

impl CliError {
    /// Every error is a usage, input or environment problem; assertion
    /// failures are reported through results, not errors.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
