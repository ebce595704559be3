use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noma_uav::seed::trial_seed;
use noma_uav::sim::{self, output, AssociationMode, SimConfig};
use noma_uav::{Error, Result};

/// NOMA multi-beam UAV uplink simulator.
#[derive(Parser)]
#[command(name = "noma-uav", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed override (master seed for `sweep`, channel seed for `single`).
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum DoF versus antenna count (CSV).
    Dof(Common),
    /// Mean sum rate versus transmit power (CSV).
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated association modes.
        #[arg(long, default_value = "effective_sinr,random")]
        modes: String,
    },
    /// One end-to-end solve (JSON record).
    Single {
        #[command(flatten)]
        common: Common,
        /// UAV transmit power in dBm; `-inf` for 0 W.
        #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
        power_dbm: f64,
    },
}

fn load_config(path: Option<&Path>) -> Result<SimConfig> {
    match path {
        Some(p) => SimConfig::load(p),
        None => Ok(SimConfig::default()),
    }
}

fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dof(c) => {
            let config = load_config(c.config.as_deref())?;
            let rows = sim::run_dof_experiment(&config)?;
            emit(c.out.as_deref(), |w| output::write_dof_csv(&rows, w))
        }
        Command::Sweep { common: c, modes } => {
            let mut config = load_config(c.config.as_deref())?;
            if let Some(seed) = c.seed {
                config.master_seed = seed;
            }
            let modes: Vec<AssociationMode> = sim::parse_modes(&modes)?;
            let result = sim::run_rate_sweep(&config, &modes)?;
            emit(c.out.as_deref(), |w| output::write_sweep_csv(&result, w))
        }
        Command::Single { common: c, power_dbm } => {
            let config = load_config(c.config.as_deref())?;
            let seed = c.seed.unwrap_or_else(|| trial_seed(config.master_seed, 0));
            let record = sim::run_single(&config, seed, power_dbm)?;
            emit(c.out.as_deref(), |w| output::write_json(&record, w))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
