//! `fibergroup`: batch front end emitting JSON reports on stdout.

mod commands;
mod report;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Usage errors exit with 64, unreadable or malformed input files with 66.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    File { path: PathBuf, msg: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::File { .. } => 66,
        }
    }
}

impl From<fibergroup::Error> for CliError {
    fn from(e: fibergroup::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fibergroup",
    version,
    about = "Group-theoretic computations for fibered surfaces"
)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Omit runtimes so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
struct OrbitArgs {
    #[arg(long, default_value_t = 10_000)]
    max_relators: usize,
    #[arg(long, default_value_t = 512)]
    max_length: usize,
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    #[arg(long, default_value_t = 100_000)]
    max_cosets: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Todd-Coxeter coset enumeration of a presentation file.
    Enum {
        file: PathBuf,
        /// Subgroup generators, e.g. "a, b".
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        max_cosets: usize,
    },
    /// Normal forms in the Burnside group B(n, 3).
    Burnside {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: bool,
        /// Word to collect, e.g. "((a,b),c)".
        #[arg(long)]
        eval: Option<String>,
        /// Compare with the coset table of the exponent-3 presentation (n <= 3).
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// The class-2 quotient UC_g^N.
    Nilpotent {
        #[arg(long)]
        g: usize,
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        image: Option<String>,
        /// Count the group by closure of the generators.
        #[arg(long)]
        closure: bool,
    },
    /// Homology monodromy of a product of transvections along disjoint cycles.
    Monodromy {
        #[arg(long)]
        g: usize,
        /// Cycles separated by ';'.
        #[arg(long)]
        cycles: String,
        #[arg(long)]
        check_unipotent: bool,
        #[arg(long = "N")]
        modulus: Option<u64>,
    },
    /// Finite-quotient analysis of a fiber data file.
    Fiberquot {
        file: PathBuf,
        #[arg(long, default_value = "abelian,uc,enum")]
        oracles: String,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Finiteness/infiniteness evidence for a split of the dual graph.
    Scan {
        file: PathBuf,
        /// Component split "K1|K2", e.g. "0|1"; defaults to the file's `split:`.
        #[arg(long)]
        split: Option<String>,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Exact affine witnesses of infiniteness.
    Witness {
        #[arg(long)]
        quaternion: bool,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long)]
        eisenstein: bool,
        #[arg(long, default_value_t = 1000)]
        power_check: usize,
    },
    /// Regression suite for the exponent-3 computations and witnesses.
    VerifyAppendixB,
}

enum Output {
    Report(report::Report),
    /// The command printed its own JSON.
    Printed(report::Status),
}

fn run(cli: Cli, command_line: String) -> Result<Output, CliError> {
    let mut report = report::Report::new(command_line, !cli.no_timing);
    match cli.command {
        Command::Enum {
            file,
            subgroup,
            max_cosets,
        } => {
            let status =
                commands::enumerate(&file, subgroup.as_deref(), max_cosets, !cli.no_timing)?;
            return Ok(Output::Printed(status));
        }
        Command::Burnside {
            n,
            order,
            eval,
            check_oracle,
            samples,
        } => commands::burnside(
            &mut report,
            n,
            order,
            eval.as_deref(),
            check_oracle,
            samples,
            cli.seed,
        )?,
        Command::Nilpotent {
            g,
            modulus,
            image,
            closure,
        } => commands::nilpotent(&mut report, g, modulus, image.as_deref(), closure)?,
        Command::Monodromy {
            g,
            cycles,
            check_unipotent,
            modulus,
        } => commands::monodromy(&mut report, g, &cycles, check_unipotent, modulus)?,
        Command::Fiberquot {
            file,
            oracles,
            orbit,
        } => commands::fiberquot(&mut report, &file, &oracles, orbit)?,
        Command::Scan { file, split, orbit } => {
            commands::scan(&mut report, &file, split.as_deref(), orbit)?
        }
        Command::Witness {
            quaternion,
            radius,
            eisenstein,
            power_check,
        } => {
            if !quaternion && !eisenstein {
                return Err(CliError::Usage(
                    "witness needs --quaternion or --eisenstein".into(),
                ));
            }
            if quaternion {
                suite::quaternion_checks(&mut report, radius);
            }
            if eisenstein {
                suite::eisenstein_checks(&mut report, power_check);
            }
        }
        Command::VerifyAppendixB => suite::regression_suite(&mut report, cli.seed)?,
    }
    Ok(Output::Report(report))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(64);
        }
    };
    let command_line = args[1..].join(" ");
    match run(cli, command_line) {
        Ok(Output::Report(report)) => {
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("{}", report.summary());
            ExitCode::from(report.status.exit_code() as u8)
        }
        Ok(Output::Printed(status)) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
