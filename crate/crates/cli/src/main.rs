//! `atomicity`: verify that kernels partition domains, from the command
//! line.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed (the report
//! is still emitted), 2 spec parse error, 3 a configured cap was exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use atomicity_cli::{
    run_command, AggregateReport, CliCommand, PipelineError, PipelineOptions,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "atomicity",
    version,
    about = "Verify kernel-sized fiber partitions: homomorphisms, group actions, and exact linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Output format for the report.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on group order during construction and enumeration.
    #[arg(long, default_value_t = 10_000)]
    max_order: usize,
    /// Cap on exhaustive homomorphism validation (domain order).
    #[arg(long, default_value_t = 2048)]
    max_validate: usize,
    /// Seed for sampled associativity and sampled map validation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run theorem checks even when axioms were only sampled.
    #[arg(long, default_value_t = false)]
    allow_sampled: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Stable line-oriented text.
    Text,
    /// Versioned JSON mirroring the report fields.
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the group axioms of a group spec file.
    VerifyGroup {
        spec: PathBuf,
        /// Also attempt a quotient by the subgroup generated by these
        /// comma-separated element indices (verifies normality).
        #[arg(long, value_delimiter = ',')]
        quotient_by: Option<Vec<usize>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a homomorphism spec: kernel, fibers, atomicity, first
    /// isomorphism witness, injectivity.
    VerifyHom {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify a group action spec: orbits, stabilizers, fiber-coset
    /// structure.
    VerifyAction {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve an exact linear system and verify its solution family.
    Solve {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every spec file through the pipeline its kind selects and emit
    /// one aggregate document.
    Report {
        specs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn options(common: &CommonArgs) -> PipelineOptions {
    PipelineOptions {
        max_order: common.max_order,
        max_validate: common.max_validate,
        allow_sampled: common.allow_sampled,
        seed: common.seed,
    }
}

fn emit_single(report: &VerificationReport, format: Format) -> ExitCode {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => println!("{}", report.to_json()),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(err: &PipelineError) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        PipelineError::Parse(_)
        | PipelineError::InvalidSpec(_)
        | PipelineError::CommandMismatch { .. } => ExitCode::from(2),
        PipelineError::CapExceeded(_) => ExitCode::from(3),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyGroup { spec, quotient_by, common } => {
            let opts = options(&common);
            let command = CliCommand::VerifyGroup { quotient_by: quotient_by.as_deref() };
            match run_command(command, &spec, &opts) {
                Ok(report) => emit_single(&report, common.format),
                Err(e) => fail(&e),
            }
        }
        Command::VerifyHom { spec, common } => {
            match run_command(CliCommand::VerifyHom, &spec, &options(&common)) {
                Ok(report) => emit_single(&report, common.format),
                Err(e) => fail(&e),
            }
        }
        Command::VerifyAction { spec, common } => {
            match run_command(CliCommand::VerifyAction, &spec, &options(&common)) {
                Ok(report) => emit_single(&report, common.format),
                Err(e) => fail(&e),
            }
        }
        Command::Solve { spec, common } => {
            match run_command(CliCommand::Solve, &spec, &options(&common)) {
                Ok(report) => emit_single(&report, common.format),
                Err(e) => fail(&e),
            }
        }
        Command::Report { specs, common } => {
            if specs.is_empty() {
                eprintln!("error: report needs at least one spec file");
                return ExitCode::from(2);
            }
            let opts = options(&common);
            let mut reports = Vec::with_capacity(specs.len());
            for path in &specs {
                match run_command(CliCommand::Auto, path, &opts) {
                    Ok(report) => reports.push(report),
                    Err(e) => return fail(&e),
                }
            }
            let aggregate = AggregateReport::new(reports);
            match common.format {
                Format::Text => print!("{}", aggregate.to_text()),
                Format::Structured => println!("{}", aggregate.to_json()),
            }
            if aggregate.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
