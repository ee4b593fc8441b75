use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_figures, cmd_spectrum, cmd_thermo, cmd_wavefunction, emit, thermo_point, Output};
use crate::config::{Command, RunConfig, Settings};
use crate::validate::{cmd_validate, ValidateOptions};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "pdm-osc", version, about = "Spectra, wavefunctions and thermodynamics of the 2D position-dependent-mass oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[command(flatten)]
    pub settings: Settings,
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Energy levels E(n_r, m) for n_r = 0..=n-max.
    Spectrum(Common),
    /// Normalized radial wavefunctions on a radial grid.
    Wavefunction(Common),
    /// Z, U, C, F, S over the temperature grid, or at one temperature.
    Thermo {
        #[command(flatten)]
        common: Common,
        /// Single temperature; prints all five quantities to stdout.
        #[arg(long = "T")]
        temperature: Option<f64>,
    },
    /// Figure-reproduction tables.
    Figures(Common),
    /// Runs the self-checks and prints a pass/fail table.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Sub-second subset.
        #[arg(long)]
        quick: bool,
        /// Shift every eigenvalue before the radial-equation check.
        #[arg(long = "perturb-energy", hide = true, allow_hyphen_values = true)]
        perturb_energy: Option<f64>,
    },
}

fn resolve(command: Command, common: &Common) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
            Settings::parse_file(&text)?
        }
        None => Settings::default(),
    };
    RunConfig::resolve(command, file.overlay(common.settings.clone()))
}

fn tables(cfg: &RunConfig, outputs: &[Output]) -> Result<String, CliError> {
    let (written, text) = emit(cfg, outputs)?;
    Ok(if written.is_empty() {
        text
    } else {
        written.iter().map(|p| format!("wrote {}\n", p.display())).collect()
    })
}

/// Runs one command. On success returns what goes to stdout; on failure
/// also returns any partial report.
pub fn run(cli: Cli) -> (String, Result<(), CliError>) {
    let single = |stem: &str, table| vec![Output { stem: stem.into(), table }];
    let result = match &cli.command {
        Cmd::Spectrum(c) => resolve(Command::Spectrum, c).and_then(|cfg| tables(&cfg, &single("spectrum", cmd_spectrum(&cfg)?))),
        Cmd::Wavefunction(c) => {
            resolve(Command::Wavefunction, c).and_then(|cfg| tables(&cfg, &single("wavefunction", cmd_wavefunction(&cfg)?)))
        }
        Cmd::Thermo { common, temperature } => resolve(Command::Thermo, common).and_then(|cfg| match temperature {
            Some(t) => thermo_point(&cfg, *t),
            None => tables(&cfg, &cmd_thermo(&cfg)?),
        }),
        Cmd::Figures(c) => resolve(Command::Figures, c).and_then(|cfg| tables(&cfg, &cmd_figures(&cfg)?)),
        Cmd::Validate { common, quick, perturb_energy } => {
            if let Err(e) = resolve(Command::Validate, common) {
                return (String::new(), Err(e));
            }
            let opts = ValidateOptions { quick: *quick, energy_shift: perturb_energy.unwrap_or(0.0) };
            return cmd_validate(opts);
        }
    };
    match result {
        Ok(text) => (text, Ok(())),
        Err(e) => (String::new(), Err(e)),
    }
}
