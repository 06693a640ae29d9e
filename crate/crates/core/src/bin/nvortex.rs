use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nvortex::campaign::{run_checks, sample_fields};
use nvortex::{CaseConfig, CheckKind, Error, Report};

/// Verification campaigns for exact n-vortex solutions.
#[derive(Parser)]
#[command(name = "nvortex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check named in the config and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the fields on the config grid into a CSV file.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the winding number only.
    Winding {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the group-lift checks only.
    LiftCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Dirac-mode checks only.
    DiracCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_FAIL,
            })
        }
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Verify { config, out } => {
            let cfg = CaseConfig::from_path(&config)?;
            report(&cfg, &cfg.checks.clone(), out.as_deref())
        }
        Command::LiftCheck { config, out } => {
            let cfg = CaseConfig::from_path(&config)?;
            report(&cfg, &[CheckKind::Lift], out.as_deref())
        }
        Command::DiracCheck { config, out } => {
            let cfg = CaseConfig::from_path(&config)?;
            report(&cfg, &[CheckKind::Dirac], out.as_deref())
        }
        Command::Winding { config } => {
            let cfg = CaseConfig::from_path(&config)?;
            let r = run_checks(&cfg, &[CheckKind::Winding])?;
            let w = r.winding.as_ref().expect("winding check produces a summary");
            println!("{}", serde_json::to_string_pretty(w)?);
            Ok(if r.pass { 0 } else { EXIT_FAIL })
        }
        Command::Sample { config, out } => {
            let cfg = CaseConfig::from_path(&config)?;
            let s = sample_fields(&cfg, &out)?;
            eprintln!(
                "{}: {} rows, {} excluded of {} grid points",
                out.display(),
                s.rows,
                s.excluded,
                s.grid_points
            );
            Ok(0)
        }
    }
}

fn report(cfg: &CaseConfig, kinds: &[CheckKind], out: Option<&Path>) -> Result<u8, Error> {
    let r: Report = run_checks(cfg, kinds)?;
    let json = r.to_json()?;
    match out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    for c in &r.checks {
        eprintln!(
            "{:<28} {} max {:.3e} (tol {:.0e}, {} pts, {} excluded)",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.max_residual,
            c.tolerance,
            c.points_evaluated,
            c.excluded_points
        );
    }
    Ok(if r.pass { 0 } else { EXIT_FAIL })
}
