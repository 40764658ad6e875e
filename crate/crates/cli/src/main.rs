//! `dshift`: tabulates d-shift experiments as JSON or CSV.
//!
//! Exit status is 0 when every checked relation holds, 1 when any row
//! records a violation and 2 on usage or input errors.

mod commands;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};

use crate::table::{write_atomically, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "dshift", version, about = "Truncated d-shift experiments")]
struct Cli {
    /// Absolute tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cross-check the exact symmetrization oracle before running.
    #[arg(long, global = true)]
    selfcheck: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Residuals of the shift commutation relations.
    Relations {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        max_degree: usize,
    },
    /// Growth of the multiplier-to-function norm ratio of (z_1...z_d)^n.
    Extremal {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Dilation map of a tuple read from a JSON file.
    Dilate {
        tuple: PathBuf,
        #[arg(long = "N")]
        max_degree: usize,
        /// Dilate r*T instead of T; defaults to 0.999 for tuples that are not null.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Compare ||f(T)|| with the truncated multiplier norm of f.
    Vn {
        tuple: PathBuf,
        /// Polynomial JSON file.
        #[arg(long)]
        f: PathBuf,
        #[arg(long = "N")]
        max_degree: usize,
    },
    /// Energy of the d-shift against its closed form.
    Energy {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Partial traces of (1+N)^-p and the convergence verdict.
    Zeta {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long = "M", default_value_t = 1_000_000)]
        cutoff: usize,
    },
    /// Kernel Gram matrix of points read from a JSON file.
    Gram {
        points: PathBuf,
        #[arg(long = "N")]
        max_degree: usize,
    },
}

fn usage_error(kind: ErrorKind, message: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, message).exit()
}

fn validate(cli: &Cli) {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        usage_error(ErrorKind::InvalidValue, "--tol must be positive");
    }
    match &cli.command {
        Command::Relations { max_degree, .. } if *max_degree < 2 => usage_error(
            ErrorKind::InvalidValue,
            "--N must be at least 2 so that degrees up to N-1 form a nonempty interior",
        ),
        Command::Relations { d: 0, .. }
        | Command::Extremal { d: 0, .. }
        | Command::Energy { d: 0, .. }
        | Command::Zeta { d: 0, .. } => usage_error(ErrorKind::InvalidValue, "--d must be at least 1"),
        Command::Dilate { r: Some(r), .. } if !(0.0..=1.0).contains(r) => {
            usage_error(ErrorKind::InvalidValue, "--r must lie in [0, 1]")
        }
        Command::Zeta { p, .. } if !(p.is_finite() && *p > 0.0) => {
            usage_error(ErrorKind::InvalidValue, "--p must be positive")
        }
        _ => {}
    }
}

fn run(cli: &Cli) -> Result<Table> {
    match &cli.command {
        Command::Relations { d, max_degree } => commands::relations(*d, *max_degree, cli.tol),
        Command::Extremal { d, n_max } => commands::extremal(*d, *n_max),
        Command::Dilate { tuple, max_degree, r } => commands::dilate(tuple, *max_degree, *r, cli.tol),
        Command::Vn { tuple, f, max_degree } => commands::vn(tuple, f, *max_degree),
        Command::Energy { d, n_max } => commands::energy(*d, *n_max, cli.tol),
        Command::Zeta { d, p, cutoff } => commands::zeta(*d, *p, *cutoff),
        Command::Gram { points, max_degree } => commands::gram(points, *max_degree, cli.tol),
    }
}

fn emit(cli: &Cli, table: &Table) -> Result<()> {
    let bytes = table.render(cli.format)?;
    match &cli.out {
        Some(path) => write_atomically(path, &bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn report_violations(table: &Table) -> bool {
    for v in &table.violations {
        eprintln!("violation: {v}");
    }
    table.violations.is_empty()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    validate(&cli);
    if cli.selfcheck {
        match commands::selfcheck() {
            Ok(t) if report_violations(&t) => eprintln!("selfcheck: symmetrization oracle agrees"),
            Ok(_) => return ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
    }
    let table = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &table) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report_violations(&table) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
