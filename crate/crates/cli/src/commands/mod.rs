//! The four subcommands. Each resolves its output directory, executes, and
//! reports an exit code; failures carry the code mandated by the contract.

pub mod diagnose;
pub mod reproduce;
pub mod run;
pub mod sweep;

use crate::Failure;
use kaczmarz_core::Error;

/// Classifies a core error for the exit-code contract: shape and extension
/// complaints mean the input asked for something it cannot, everything else
/// is a breakdown of the computation itself.
pub fn core_failure(err: Error) -> Failure {
    match err {
        Error::TermOutOfRange { .. }
        | Error::MismatchedPair { .. }
        | Error::NotPeriodic
        | Error::FailsValidation { .. } => Failure::invalid(err.to_string()),
        other => Failure::numerical(other.to_string()),
    }
}
