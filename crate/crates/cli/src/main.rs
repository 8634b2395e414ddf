mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "gpade", version, about = "Pade type approximants to G-functions and certified Diophantine checks")]
struct Cli {
    /// working precision in decimal digits
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// cap for precision escalation, in decimal digits
    #[arg(long, global = true)]
    max_precision: Option<u32>,
    /// config file (TOML); defaults to $GPADE_CONFIG
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: commands::Command,
}

fn run(cli: Cli) -> Result<gpade_core::report::RunReport, CliError> {
    let cfg = config::load(cli.config.as_deref(), cli.precision, cli.max_precision)?;
    commands::dispatch(&cli.cmd, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("gpade: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = report.to_string();
    let written = match &out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("gpade: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(report.exit_code() as u8)
}
