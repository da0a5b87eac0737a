mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Command, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Time-dependent coined quantum walks on the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON file with the same keys as the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the merged configuration as JSON and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Position distribution after `t` steps.
    Simulate,
    /// Limit density of `X_t / t` on a grid.
    Density,
    /// Eigenvalues and group velocities of a two-period walk.
    Spectrum,
    /// Rescaled moments at time `t` against the limit.
    Moments,
    /// Run one of the built-in checks and emit a JSON report.
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Density => Command::Density,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Moments => Command::Moments,
            Cmd::Verify => Command::Verify,
        }
    }
}

fn load(cli: Cli) -> Result<(RunConfig, bool), CliError> {
    let mut cfg = cli.run;
    cfg.command = Some(cli.command.into());
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage("config", format!("{}: {e}", path.display())))?;
        let file: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::usage("config", e))?;
        if file.command.is_some_and(|c| Some(c) != cfg.command) {
            return Err(CliError::usage(
                "config",
                "command in file disagrees with the subcommand",
            ));
        }
        cfg = cfg.merge(file);
    }
    Ok((cfg, cli.print_config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(cli).and_then(|(cfg, print)| {
        if print {
            println!("{}", serde_json::to_string_pretty(&cfg)?);
            Ok(())
        } else {
            commands::run(&cfg)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // Downstream reader closed early, as with `| head`.
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
