use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use thetaflow_cli::commands::{check, linear, norms, run, sweep};
use thetaflow_cli::{RunConfig, Status};

#[derive(Parser)]
#[command(name = "thetaflow", version, about = "Compressible Navier-Stokes with potential temperature: runs, sweeps and energy ledger")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write the ledger CSVs and final checkpoint.
    Run { config: PathBuf },
    /// Write the linear dispersion relation over the grid's wavenumbers.
    Linear { config: PathBuf },
    /// Run the invariant and residual suites on the configured grid.
    Check {
        config: PathBuf,
        /// Scale one filter block before checking (exercises the failure path).
        #[arg(long, hide = true, allow_hyphen_values = true)]
        corrupt_block: Option<i32>,
    },
    /// Run a grid of configurations concurrently.
    Sweep {
        config: PathBuf,
        /// Axes as `key=v1,v2;key2=w1,w2`.
        #[arg(long)]
        grid: String,
    },
    /// Besov norms of a checkpoint.
    Norms {
        checkpoint: PathBuf,
        /// Regularity index (defaults to n/2).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// Low/high frequency threshold block.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        j0: i32,
    },
    /// Print the fully resolved configuration.
    ConfigDump { config: PathBuf },
}

fn dispatch(cmd: Command) -> thetaflow_cli::Result<Status> {
    match cmd {
        Command::Run { config } => run::cmd_run(&RunConfig::load(&config)?),
        Command::Linear { config } => linear::cmd_linear(&RunConfig::load(&config)?),
        Command::Check { config, corrupt_block } => check::cmd_check(&RunConfig::load(&config)?, corrupt_block),
        Command::Sweep { config, grid } => sweep::cmd_sweep(&RunConfig::load(&config)?, &grid),
        Command::Norms { checkpoint, s, j0 } => norms::cmd_norms(&checkpoint, s, j0),
        Command::ConfigDump { config } => {
            print!("{}", RunConfig::load(&config)?.dump());
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // usage errors exit 1; 2 is reserved for blowup
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Invalid.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Invalid.code())
        }
    }
}
