//! Regeneration of the standard figure datasets.
//!
//! Each file reproduces one published curve with a fixed, documented
//! protocol, so the command needs no configuration: the tuned instance
//! couples fifteen string modes at the infinite-string target g = 0.7 with
//! the frequency ratio r = 0.86, the working point where the emission
//! spectrum is single peaked.

use crate::emit::{fmt, write_csv};
use crate::error::CliError;
use crate::pipeline::{assemble, ModelInstance};
use lambq_core::{
    displacement_trace, emission_spectrum, g_infinity, occupation_numbers, relative_variance,
    Dimensionless,
};
use std::path::Path;

/// Frequency ratio of the tuned instance.
const TUNED_R: f64 = 0.86;
/// Infinite-string coupling target of the tuned instance.
const TUNED_G: f64 = 0.7;
/// String modes kept in the tuned instance.
const TUNED_MODES: usize = 15;
/// Band edge of the tuned instance, in units of the bead frequency.
const TUNED_BAND_EDGE: f64 = 4.0;

fn tuned_instance(g_target: f64) -> Result<ModelInstance, CliError> {
    let big_l = TUNED_MODES as f64 * std::f64::consts::PI / TUNED_BAND_EDGE;
    let dims = Dimensionless::for_target_g(TUNED_R, g_target, TUNED_MODES, big_l)?;
    Ok(assemble(dims.to_params()?, 1.0)?)
}

/// Geometric grid from `lo` to `hi` with `count` points.
fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (i as f64 * step).exp()).collect()
}

/// Write all figure datasets into `out`.
pub fn write_figures(out: &Path) -> Result<(), CliError> {
    saturation_curve(&out.join("fig2.csv"))?;
    tuned_occupations(&out.join("fig3.csv"))?;
    coupling_traces(&out.join("fig4.csv"))?;
    tuned_emission(&out.join("fig5.csv"))?;
    variance_ratio_curve(&out.join("figs3.csv"))?;
    Ok(())
}

/// Coupling strength of the infinite string against the stiffness ratio,
/// with its saturation value r^2.
fn saturation_curve(path: &Path) -> Result<(), CliError> {
    let rows = log_grid(1e-2, 1e2, 201).into_iter().map(|y| {
        let g = g_infinity(TUNED_R, 1.0, y);
        format!("{},{},{}", fmt(y), fmt(g), fmt(TUNED_R * TUNED_R))
    });
    write_csv(path, "y,g_infinity,saturation", rows)?;
    Ok(())
}

/// Ground-state occupations of the tuned instance, bead first.
fn tuned_occupations(path: &Path) -> Result<(), CliError> {
    let instance = tuned_instance(TUNED_G)?;
    let occupations = occupation_numbers(&instance.coeffs);
    let rows = occupations.iter().enumerate().map(|(alpha, &n)| {
        let omega = if alpha == 0 {
            instance.scales.omega_0
        } else {
            instance.modes.omega[alpha - 1]
        };
        format!("{alpha},{},{}", fmt(omega), fmt(n))
    });
    write_csv(path, "alpha,omega,n_occ", rows)?;
    Ok(())
}

/// Displacement decay at two coupling targets below the tuned point.
fn coupling_traces(path: &Path) -> Result<(), CliError> {
    let weak = tuned_instance(0.4)?;
    let strong = tuned_instance(0.6)?;
    let times: Vec<f64> = (0..1201).map(|i| i as f64 * 60.0 / 1200.0).collect();
    let trace_weak = displacement_trace(&weak.coeffs, &weak.spectrum, 1.0, &times);
    let trace_strong = displacement_trace(&strong.coeffs, &strong.spectrum, 1.0, &times);
    let rows = times
        .iter()
        .zip(trace_weak.iter().zip(&trace_strong))
        .map(|(&t, (&a, &b))| format!("{},{},{}", fmt(t), fmt(a), fmt(b)));
    write_csv(path, "t,u_g04,u_g06", rows)?;
    Ok(())
}

/// One-phonon emission weights of the tuned instance.
fn tuned_emission(path: &Path) -> Result<(), CliError> {
    let instance = tuned_instance(TUNED_G)?;
    let emission = emission_spectrum(&instance.coeffs)?;
    let rows = instance
        .spectrum
        .frequencies
        .iter()
        .zip(&emission.p1)
        .map(|(&omega, &weight)| format!("{},{}", fmt(omega), fmt(weight)));
    write_csv(path, "Omega,p1", rows)?;
    Ok(())
}

/// Continuum variance ratio against the damping rate, in resonance units,
/// for several band edges. The grid starts at exactly zero damping, where
/// the ratio is exactly one whatever the band edge.
fn variance_ratio_curve(path: &Path) -> Result<(), CliError> {
    let band_edges = [1.5, 3.0, 7.0, 20.0];
    let mut dampings = vec![0.0];
    dampings.extend(log_grid(1e-3, 1e1, 241));
    let mut rows = Vec::with_capacity(band_edges.len() * dampings.len());
    for &omega_d_bar in &band_edges {
        for &nu_bar in &dampings {
            let ratio = relative_variance(nu_bar, omega_d_bar)
                .expect("grid stays inside the domain");
            rows.push(format!("{},{},{}", fmt(nu_bar), fmt(omega_d_bar), fmt(ratio)));
        }
    }
    write_csv(path, "nu_bar,omega_d_bar,R", rows)?;
    Ok(())
}
