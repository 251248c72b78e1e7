//! Report types and verification pipelines behind the `atomicity` binary.
//!
//! The binary itself is a thin argument parser; everything it does is
//! callable from here, which is also how the acceptance suite drives the
//! same code paths the CLI exposes.

pub mod pipeline;
pub mod report;

pub use pipeline::{
    action_checks, group_checks, hom_checks, run_command, solve_checks, CliCommand,
    PipelineError, PipelineOptions,
};
pub use report::{
    AggregateReport, Check, CheckStatus, Subject, Summary, VerificationReport, REPORT_VERSION,
};
