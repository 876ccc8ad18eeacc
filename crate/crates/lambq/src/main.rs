//! Entry point: argument parsing, dispatch, and exit codes.

use clap::{Parser, Subcommand};
use lambq::commands;
use lambq::config::{Overrides, RunConfig};
use lambq::error::CliError;
use lambq::figures::write_figures;
use lambq::pipeline::assemble;
use lambq::sweep::run_sweep;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lambq",
    about = "Quantum bead on a string: normal modes, squeezed ground state, decay, emission",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; required by every command except figures.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; falls back to LAMBQ_OUT, then the current
    /// directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the number of string modes from the configuration.
    #[arg(long, global = true)]
    n_modes: Option<usize>,
    /// Override the coupling target g.
    #[arg(long, global = true)]
    g_target: Option<f64>,
    /// Override the sweep seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the normal-mode spectrum and write the mode table.
    Spectrum,
    /// Write the full Bogoliubov coefficient table.
    Coeffs,
    /// Ground-state occupations, spectral weights, and squeezing summary.
    GroundState,
    /// Continuum decay rates, the envelope fit, and the decay trace.
    Decay,
    /// One-phonon emission spectrum of a single bead quantum.
    Emission,
    /// Bead variance against the continuum closed form.
    Variance,
    /// Regenerate the standard figure datasets; needs no configuration.
    Figures,
    /// Run every internal consistency check on the configured instance.
    Verify {
        /// Corrupt one coefficient first; the suite must then fail.
        #[arg(long)]
        inject_perturbation: bool,
    },
    /// Walk coupling targets or random stable draws and summarize them.
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli
        .out
        .or_else(|| std::env::var_os("LAMBQ_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Command::Figures = cli.command {
        return write_figures(&out);
    }

    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    let config = RunConfig::load(config_path)?;
    let overrides = Overrides {
        n_modes: cli.n_modes,
        g_target: cli.g_target,
        seed: cli.seed,
    };

    if let Command::Sweep = cli.command {
        return run_sweep(&config, &overrides, &out);
    }

    let params = config.resolve(&overrides)?;
    let instance = assemble(params, config.gamma_scale())?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&instance, &out),
        Command::Coeffs => commands::coeffs(&instance, &out),
        Command::GroundState => commands::ground_state(&instance, &out),
        Command::Decay => commands::decay(&instance, config.delta(), &out),
        Command::Emission => commands::emission(&instance, &out),
        Command::Variance => commands::variance(&instance, &out),
        Command::Verify { inject_perturbation } => {
            commands::verify(&instance, inject_perturbation, &out)
        }
        Command::Figures | Command::Sweep => unreachable!("handled above"),
    }
}
