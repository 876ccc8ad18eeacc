//! Run configuration: a JSON file naming the model instance plus a few
//! command-line overrides.
//!
//! A configuration carries either the raw mechanical parameters or the
//! dimensionless set, never both. The dimensionless branch can replace the
//! stiffness ratio `y` with a coupling target `g_target`, which is resolved
//! through the infinite-string relation before the instance is built.

use crate::error::CliError;
use lambq_core::{Dimensionless, PhysicalParams};
use serde::Deserialize;
use std::fs;
use std::path::Path;

/// Top-level JSON configuration.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Raw mechanical parameters; exclusive with `dimensionless`.
    pub raw: Option<RawParams>,
    /// Dimensionless parameters; exclusive with `raw`.
    pub dimensionless: Option<DimensionlessParams>,
    /// Coupling target replacing `dimensionless.y`.
    pub g_target: Option<f64>,
    /// Initial bead displacement for decay traces; defaults to 1.
    pub delta: Option<f64>,
    /// Scale factor applied to every coupling; an exploration knob that can
    /// push the model into the unstable regime. Defaults to 1.
    pub gamma_scale: Option<f64>,
    /// Seed for the randomized sweep draws.
    pub seed: Option<u64>,
    /// Sweep settings, used by the sweep command only.
    pub sweep: Option<SweepConfig>,
}

/// Raw mechanical parameters of the bead and string.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub m: f64,
    pub kappa: f64,
    pub kappa_c: f64,
    pub tau: f64,
    pub sigma: f64,
    pub ell: f64,
    pub n_modes: usize,
}

/// Dimensionless parameters: frequency ratio r, stiffness ratio y, mode
/// count, and string length in units of c / omega_0.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessParams {
    pub r: f64,
    /// Optional when `g_target` decides the stiffness ratio instead.
    pub y: Option<f64>,
    pub n_modes: usize,
    pub big_l: f64,
}

/// Sweep settings: explicit coupling targets, or a count of random stable
/// draws when no targets are given.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub g_targets: Option<Vec<f64>>,
    pub count: Option<usize>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n_modes: Option<usize>,
    pub g_target: Option<f64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Parse a configuration file.
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    /// Resolve the configured instance into physical parameters.
    pub fn resolve(&self, overrides: &Overrides) -> Result<PhysicalParams, CliError> {
        let g_target = overrides.g_target.or(self.g_target);
        match (&self.raw, &self.dimensionless) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either raw or dimensionless parameters, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "the configuration names neither raw nor dimensionless parameters".into(),
            )),
            (Some(raw), None) => {
                if g_target.is_some() {
                    return Err(CliError::Config(
                        "g_target requires dimensionless parameters".into(),
                    ));
                }
                Ok(PhysicalParams {
                    m: raw.m,
                    kappa: raw.kappa,
                    kappa_c: raw.kappa_c,
                    tau: raw.tau,
                    sigma: raw.sigma,
                    ell: raw.ell,
                    n_modes: overrides.n_modes.unwrap_or(raw.n_modes),
                })
            }
            (None, Some(dims)) => {
                let n_modes = overrides.n_modes.unwrap_or(dims.n_modes);
                let resolved = match g_target {
                    Some(g) => Dimensionless::for_target_g(dims.r, g, n_modes, dims.big_l)?,
                    None => {
                        let y = dims.y.ok_or_else(|| {
                            CliError::Config(
                                "dimensionless parameters need y, or a g_target to set it".into(),
                            )
                        })?;
                        Dimensionless { r: dims.r, y, n_modes, big_l: dims.big_l }
                    }
                };
                Ok(resolved.to_params()?)
            }
        }
    }

    /// Trace displacement amplitude.
    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(1.0)
    }

    /// Coupling scale factor.
    pub fn gamma_scale(&self) -> f64 {
        self.gamma_scale.unwrap_or(1.0)
    }

    /// Sweep seed, command line first.
    pub fn seed(&self, overrides: &Overrides) -> u64 {
        overrides.seed.or(self.seed).unwrap_or(42)
    }
}
