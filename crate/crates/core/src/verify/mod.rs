//! The verification battery and its report.

mod checks;
mod report;

pub use checks::{
    check_seed, random_connected_multigraph, random_conservative_flow, run_verification, VerifyConfig, CHECK_NAMES,
};
pub use report::{CheckResult, VerificationReport};
