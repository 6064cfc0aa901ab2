use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dampjc_cli::{as_error_study, execute, read_config, run::thread_count, CliError};

#[derive(Parser)]
#[command(
    name = "dampjc",
    version,
    about = "Damped Jaynes-Cummings propagation from a JSON run config"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured method and write the diagnostics table.
    Simulate {
        config: PathBuf,
        /// Override a config key, e.g. `--set tMax=2` or `--set initial.cavity=fock:1`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Parse and check a config without running it.
    Validate {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Simulate with the oracle comparison on and an error-order fit appended.
    ErrorStudy {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate { config, overrides } => {
            execute(&read_config(&config, &overrides)?, thread_count()?)
        }
        Command::Validate { config, overrides } => {
            let cfg = read_config(&config, &overrides)?;
            eprintln!(
                "ok: {:?}, dim {}, {} samples",
                cfg.method(),
                cfg.params.dim(),
                cfg.time_grid().len()
            );
            Ok(0)
        }
        Command::ErrorStudy { config, overrides } => execute(
            &as_error_study(read_config(&config, &overrides)?)?,
            thread_count()?,
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
