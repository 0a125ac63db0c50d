mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use job::{AlgebraKind, Command, Format, Input, JobSpec, Options, RefuteMethod};

/// Build finite-dimensional Hopf algebras and decide whether they are
/// quantum permutation algebras.
///
/// Exit codes: 0 certified, refuted or verified; 2 undecided; 1 error or
/// failed verification.
#[derive(Parser)]
#[command(name = "qpa", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
    /// Largest group order to enumerate
    #[arg(long, global = true, default_value_t = qpa_core::permgrp::DEFAULT_ORDER_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    order_cap: u64,
    /// Cyclotomic order used to split commutative coideal subalgebras
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    conductor: Option<u32>,
    /// Load Hopf algebra JSON without re-checking the axioms
    #[arg(long, global = true)]
    trust: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    /// k^G
    Function,
    /// kG
    Group,
    /// D(G)
    Double,
    /// D(G)^*
    DualDouble,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Prime,
    C4S3,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Factorization file (TOML)
    #[arg(long)]
    factorization: Option<PathBuf>,
    /// Group file (TOML), used with --algebra
    #[arg(long)]
    group: Option<PathBuf>,
    /// Hopf algebra (JSON)
    #[arg(long)]
    hopf: Option<PathBuf>,
}

#[derive(Args)]
struct AlgebraOpt {
    /// Which algebra to build from --group
    #[arg(long, value_enum, default_value_t = AlgebraArg::Function)]
    algebra: AlgebraArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an algebra and print it as JSON
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        algebra: AlgebraOpt,
        /// Also write the algebra to this file
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Check the Hopf axioms, and optionally a certificate
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        algebra: AlgebraOpt,
        /// Certificate or verdict JSON to re-verify
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Run the certification pipeline
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        algebra: AlgebraOpt,
    },
    /// Run a refutation
    Refute {
        #[arg(long)]
        factorization: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Compute the quantum permutation envelope
    Envelope {
        #[arg(long)]
        factorization: PathBuf,
    },
    /// Twisted group algebra and lifted Doi twist from a bicharacter file
    Twist {
        #[arg(long)]
        bicharacter: PathBuf,
        /// Write the twisted Hopf algebra to this file
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Orbits, actions, axioms and verdict for a factorization
    Report {
        #[arg(long)]
        factorization: PathBuf,
    },
}

fn input(i: InputArgs, a: AlgebraOpt) -> Input {
    let kind = match a.algebra {
        AlgebraArg::Function => AlgebraKind::Function,
        AlgebraArg::Group => AlgebraKind::Group,
        AlgebraArg::Double => AlgebraKind::Double,
        AlgebraArg::DualDouble => AlgebraKind::DualDouble,
    };
    match (i.factorization, i.group, i.hopf) {
        (Some(p), _, _) => Input::Factorization(p),
        (_, Some(p), _) => Input::Group(p, kind),
        (_, _, Some(p)) => Input::Hopf(p),
        _ => unreachable!("clap requires one input"),
    }
}

impl From<Cli> for JobSpec {
    fn from(c: Cli) -> Self {
        let command = match c.command {
            Cmd::Build { input: i, algebra, save } => Command::Build { input: input(i, algebra), save },
            Cmd::Verify { input: i, algebra, certificate } => Command::Verify { input: input(i, algebra), certificate },
            Cmd::Certify { input: i, algebra } => Command::Certify { input: input(i, algebra) },
            Cmd::Refute { factorization, method } => Command::Refute {
                factorization,
                method: match method {
                    MethodArg::Auto => RefuteMethod::Auto,
                    MethodArg::Prime => RefuteMethod::Prime,
                    MethodArg::C4S3 => RefuteMethod::C4S3,
                },
            },
            Cmd::Envelope { factorization } => Command::Envelope { factorization },
            Cmd::Twist { bicharacter, save } => Command::Twist { bicharacter, save },
            Cmd::Report { factorization } => Command::Report { factorization },
        };
        let output = match c.output {
            OutputArg::Json => Format::Json,
            OutputArg::Text => Format::Text,
        };
        JobSpec {
            command,
            options: Options { output, order_cap: c.order_cap as usize, conductor: c.conductor, trust: c.trust },
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit 1; 2 is reserved for undecided
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let job = JobSpec::from(cli);
    match job::run(&job) {
        Ok(r) => {
            print!("{}", r.render(job.options.output));
            ExitCode::from(r.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
