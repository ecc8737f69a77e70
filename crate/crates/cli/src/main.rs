//! `dkp-qes`: spectra, wavefunctions, determinant constraints, parameter
//! scans, verification and Heun classification from a JSON config.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 inadmissible
//! parameters, 3 no root or no case, 4 verification failure.

mod commands;
mod config;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Inadmissible(String),
    NoRoot(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Inadmissible(_) => 2,
            Failure::NoRoot(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Inadmissible(m)
            | Failure::NoRoot(m)
            | Failure::Verification(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dkp-qes",
    version,
    about = "Quasi-exactly-solvable DKP spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; `-` or omitted reads standard input.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized verification sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Closed-form energies for each sector and level.
    Spectrum,
    /// Polynomial eigenfunctions on a radial grid.
    Wavefunction,
    /// Roots of the quantization determinant in a freed parameter.
    Constraint,
    /// CSV scan of the spectrum over one parameter.
    Scan,
    /// Algebraic and numerical self-checks.
    Verify,
    /// Heun class of a rational potential or of the sector potentials.
    Classify,
}

fn read_config(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let text = read_config(cli.config.as_ref())?;
    let cfg = config::parse(&text)?;
    let mut buf = Vec::new();
    let outcome = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg, &mut buf),
        Command::Wavefunction => commands::wavefunction(&cfg, &mut buf),
        Command::Constraint => commands::constraint(&cfg, &mut buf),
        Command::Scan => commands::scan(&cfg, &mut buf),
        Command::Verify => commands::verify(&cfg, cli.seed, &mut buf),
        Command::Classify => commands::classify(&cfg, &mut buf),
    };
    if outcome.is_ok() || !buf.is_empty() {
        match &cli.out {
            Some(path) => fs::write(path, &buf)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => io::stdout().write_all(&buf)?,
        }
    }
    outcome
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dkp-qes: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
