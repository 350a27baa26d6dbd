use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use omit_core::commands::{execute, Command};
use omit_core::config::load_config;
use omit_core::table::{write_atomic, OutputFormat};
use omit_core::{ErrorKind, OmitError};

/// Charge sensing through optomechanically induced transparency.
#[derive(Debug, Parser)]
#[command(name = "omit", version)]
struct Cli {
    /// derive, steady, spectrum, sweep-n, tuning, invert, oracle, metrics, fig2, fig3 or fig4
    #[arg(value_parser = parse_command)]
    command: Command,

    /// JSON configuration document.
    #[arg(long)]
    config: PathBuf,

    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,

    /// Replace a config value, e.g. `u_bias_v=0.1` or `fig3.points=501`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse().map_err(|e: OmitError| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: OmitError| e.to_string())
}

fn run(cli: &Cli) -> omit_core::Result<()> {
    let cfg = load_config(&cli.config, &cli.overrides)?;
    let text = execute(&cfg, cli.command, cli.format)?;
    match &cli.out {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn report(kind: ErrorKind, message: &str) -> ExitCode {
    let record = serde_json::json!({
        "error": kind.as_str(),
        "exit_code": kind.exit_code(),
        "message": message,
    });
    eprintln!("{record}");
    ExitCode::from(kind.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            return report(ErrorKind::Config, first.trim_start_matches("error: "));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e.kind(), &e.to_string()),
    }
}
