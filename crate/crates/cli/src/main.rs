//! `wakimoto`: relation checks, characters, Kac–Kazhdan scans and singular
//! vector searches for the twisted Wakimoto modules of A₂⁽²⁾.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, Output, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "wakimoto", version, about = "Exact checks for twisted Wakimoto modules of A2(2)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check every current commutator on a truncated module (default depth 1).
    Verify,
    /// Compare the Fock character with the Verma (or real-root) product (default depth 0).
    Char,
    /// Kac–Kazhdan genericity scan of χ; optionally solve for χ.
    Kk {
        /// Affine root `finite,delta`, e.g. `-1,1/2` for −α + δ/2.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Kernel scan of the raising operators on weight blocks (default depth 2).
    Singular,
    /// Print the currents.
    DumpCurrents,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(wakimoto_core::Error),
}

impl From<wakimoto_core::Error> for CliError {
    fn from(e: wakimoto_core::Error) -> Self {
        match e {
            wakimoto_core::Error::Parse(_) | wakimoto_core::Error::Validation(_) | wakimoto_core::Error::Truncation(_) | wakimoto_core::Error::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Math(e),
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (name, depth) = match cli.cmd {
        Cmd::Verify => ("verify", 1),
        Cmd::Char => ("char", 0),
        Cmd::Kk { .. } => ("kk", 0),
        Cmd::Singular => ("singular", 2),
        Cmd::DumpCurrents => ("dump-currents", 0),
    };
    let cfg = RunConfig::resolve(&cli.flags, depth)?;
    let outcome = match &cli.cmd {
        Cmd::Verify => commands::verify(&cfg)?,
        Cmd::Char => commands::character(&cfg)?,
        Cmd::Kk { root, n } => commands::kk(&cfg, root.as_deref(), *n)?,
        Cmd::Singular => commands::singular(&cfg)?,
        Cmd::DumpCurrents => commands::dump_currents()?,
    };
    let body = match cfg.output {
        Output::Text => outcome.text,
        Output::Json => {
            let doc = serde_json::json!({
                "schema": 1,
                "command": name,
                "config": cfg,
                "success": outcome.success,
                "result": outcome.result,
            });
            serde_json::to_string_pretty(&doc).expect("json")
        }
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, body + "\n").map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => println!("{body}"),
    }
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
