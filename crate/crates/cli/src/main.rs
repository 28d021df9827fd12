use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wbroadcast_cli::{
    cmd_fixtures, cmd_run, cmd_sweep, cmd_verify, to_json_text, CliError, ProtocolConfig, Result, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "wbroadcast",
    version,
    about = "Secret broadcasting of W-type states with local cloners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// JSON config file; `-` or absent reads standard input.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Overrides the config's tolerance.
    #[arg(long, value_name = "FLOAT")]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol instance and report every branch.
    Run {
        #[command(flatten)]
        io: Io,
        /// Only analyse this branch, e.g. `UUD`.
        #[arg(long, value_name = "STRING")]
        outcome: Option<String>,
    },
    /// Compare the printed fixtures against the simulation.
    Verify {
        #[command(flatten)]
        io: Io,
    },
    /// Evaluate metrics over a parameter grid and write CSV.
    Sweep {
        #[command(flatten)]
        io: Io,
    },
    /// Dump the printed-formula fixtures.
    Fixtures {
        /// Config to evaluate at; the uniform-symmetric config when absent.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn load_config(io: &Io, outcome: Option<String>) -> Result<wbroadcast_cli::Validated> {
    let mut cfg = ProtocolConfig::from_json(&read_input(io.config.as_ref())?)?;
    if let Some(t) = io.tol {
        cfg.tol = t;
    }
    if outcome.is_some() {
        cfg.outcome = outcome;
    }
    cfg.validate()
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { io, outcome } => {
            let cfg = load_config(&io, outcome)?;
            write_output(io.out.as_ref(), &to_json_text(&cmd_run(&cfg)?))
        }
        Command::Verify { io } => {
            let cfg = load_config(&io, None)?;
            write_output(io.out.as_ref(), &to_json_text(&cmd_verify(&cfg)?))
        }
        Command::Sweep { io } => {
            let mut spec = SweepSpec::from_json(&read_input(io.config.as_ref())?)?;
            if let Some(t) = io.tol {
                spec.tol = t;
            }
            let mut buf = Vec::new();
            let summary = cmd_sweep(&spec, &mut buf)?;
            write_output(io.out.as_ref(), std::str::from_utf8(&buf).expect("csv is utf-8"))?;
            eprintln!("sweep: {} rows, {} grid points skipped", summary.rows, summary.skipped);
            Ok(())
        }
        Command::Fixtures { config, out } => {
            let cfg = match config {
                Some(p) => Some(ProtocolConfig::from_json(&read_input(Some(&p))?)?.validate()?),
                None => None,
            };
            write_output(out.as_ref(), &to_json_text(&cmd_fixtures(cfg.as_ref())?))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wbroadcast: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
