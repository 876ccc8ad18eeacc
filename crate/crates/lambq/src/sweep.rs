//! Parameter sweeps: a row of solved instances with a shared summary table.
//!
//! With explicit `sweep.g_targets` in the configuration the sweep walks the
//! coupling targets on the configured dimensionless instance. Without
//! targets it draws random stable parameter sets from the seeded generator,
//! covering the region the property tests sample.

use crate::config::{Overrides, RunConfig};
use crate::emit::{fmt, write_csv};
use crate::error::CliError;
use crate::pipeline::{assemble, ModelInstance};
use lambq_core::{bead_variance, emission_spectrum, Dimensionless};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

/// Number of random draws when the configuration gives no explicit targets
/// or count.
const DEFAULT_DRAWS: usize = 8;

struct SweepRow {
    index: usize,
    dims: Dimensionless,
    coupling_g: f64,
    omega_min: f64,
    total_p1: f64,
    variance_ratio: f64,
}

/// Run the sweep and write `sweep_<idx>/spectrum.csv` per instance plus a
/// shared `summary.csv`.
pub fn run_sweep(
    config: &RunConfig,
    overrides: &Overrides,
    out: &Path,
) -> Result<(), CliError> {
    let draws = plan_draws(config, overrides)?;
    let mut rows = Vec::with_capacity(draws.len());
    for (index, dims) in draws.into_iter().enumerate() {
        let instance = assemble(dims.to_params()?, config.gamma_scale())?;
        let dir = out.join(format!("sweep_{index:03}"));
        crate::commands::spectrum(&instance, &dir)?;
        rows.push(summarize(index, dims, &instance)?);
    }
    let summary = rows.iter().map(|row| {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            row.index,
            fmt(row.dims.r),
            fmt(row.dims.y),
            row.dims.n_modes,
            fmt(row.dims.big_l),
            fmt(row.coupling_g),
            fmt(row.omega_min),
            fmt(row.total_p1),
            fmt(row.variance_ratio),
        )
    });
    write_csv(
        &out.join("summary.csv"),
        "idx,r,y,n_modes,big_l,g,omega_min,total_p1,variance_ratio",
        summary,
    )?;
    Ok(())
}

/// Decide the instances to run: explicit coupling targets on the configured
/// dimensionless set, or seeded random draws.
fn plan_draws(
    config: &RunConfig,
    overrides: &Overrides,
) -> Result<Vec<Dimensionless>, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("the sweep command needs a sweep section".into()))?;
    let dims = config.dimensionless.as_ref();
    if let Some(targets) = &sweep.g_targets {
        let dims = dims.ok_or_else(|| {
            CliError::Config("sweep g_targets requires dimensionless parameters".into())
        })?;
        let n_modes = overrides.n_modes.unwrap_or(dims.n_modes);
        return targets
            .iter()
            .map(|&g| Ok(Dimensionless::for_target_g(dims.r, g, n_modes, dims.big_l)?))
            .collect();
    }
    let count = sweep.count.unwrap_or(DEFAULT_DRAWS);
    let n_modes = overrides.n_modes.or(dims.map(|d| d.n_modes)).unwrap_or(15);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed(overrides));
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let r = rng.gen_range(0.15..0.85);
        let y = rng.gen_range(0.1..4.0);
        let per_mode = rng.gen_range(0.8..4.0);
        draws.push(Dimensionless { r, y, n_modes, big_l: n_modes as f64 * per_mode });
    }
    Ok(draws)
}

fn summarize(
    index: usize,
    dims: Dimensionless,
    instance: &ModelInstance,
) -> Result<SweepRow, CliError> {
    let emission = emission_spectrum(&instance.coeffs)?;
    let (_, variance_ratio) = bead_variance(
        &instance.coeffs,
        &instance.spectrum,
        instance.params.m,
        instance.scales.omega_0,
    );
    Ok(SweepRow {
        index,
        dims,
        coupling_g: instance.problem.coupling_strength(),
        omega_min: instance.spectrum.frequencies[0],
        total_p1: emission.total_p1,
        variance_ratio,
    })
}
