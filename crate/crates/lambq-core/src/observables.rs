//! Ground-state observables of the coupled bead and string.
//!
//! Everything in this module is a function of the Bogoliubov coefficients
//! and the normal-mode spectrum: phonon occupation numbers of the squeezed
//! vacuum, the bead position variance, the spectral weight of the bead in
//! each normal mode, the free decay of an initial displacement, and the
//! one-phonon emission spectrum seen when a single bead quantum relaxes.

use crate::bogoliubov::{CoefficientSet, TOL_ID};
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::spectrum::BogoliubovSpectrum;
use alloc::vec;
use alloc::vec::Vec;
use libm::{atan, cos};

/// Number of samples in the default decay-trace time grid.
pub const TRACE_SAMPLES: usize = 4096;

/// Occupations and squeezing of the interacting ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    /// Mean phonon number of each bare mode, bead first.
    pub n_occ: Vec<f64>,
    /// Total phonon number pulled out of the vacuum by the coupling.
    pub total_occ: f64,
    /// Bead position variance <u_0^2>.
    pub variance_u0: f64,
    /// Variance relative to the uncoupled zero-point value 1 / (2 m omega_0).
    /// The ground state is squeezed with respect to the dressed resonance,
    /// whose frequency lies below omega_0, so this bare-frequency ratio
    /// typically sits slightly above one.
    pub variance_ratio: f64,
}

/// Weight of the bare bead mode in each normal mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    /// rho_alpha = U_{0 alpha}^2 - V_{0 alpha}^2, summing to one.
    pub rho: Vec<f64>,
    /// Full width at half maximum of rho over the normal frequencies,
    /// found by linear interpolation between grid points. Only meaningful
    /// when the line is resolved by several mode spacings.
    pub width_estimate: f64,
}

/// Decay products of a single bead quantum.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSpectrum {
    /// Probability of ending in the one-bogoliubon state of each normal
    /// mode, in ascending frequency order.
    pub p1: Vec<f64>,
    /// Total one-phonon weight; the remainder goes to three-phonon and
    /// higher states.
    pub total_p1: f64,
    /// Index of the normal mode carrying the largest weight.
    pub peak_alpha: usize,
}

/// Mean phonon number of each bare mode in the interacting ground state,
/// bead first: n_alpha = sum_beta V_{alpha beta}^2, the column sums of the
/// squared creation-operator coefficients.
pub fn occupation_numbers(coeffs: &CoefficientSet) -> Vec<f64> {
    let dim = coeffs.dim();
    let mut occ = vec![0.0; dim];
    for (alpha, slot) in occ.iter_mut().enumerate() {
        let mut sum = 0.0;
        for beta in 0..dim {
            let v = coeffs.n.at(beta, alpha);
            sum += v * v;
        }
        *slot = sum;
    }
    occ
}

/// Bead position variance in the interacting ground state and its ratio to
/// the uncoupled zero-point value 1 / (2 m omega_0).
///
/// The variance is evaluated from the coefficient differences,
/// <u_0^2> = (1 / 2 m omega_0) sum_beta (M_{beta 0} - N_{beta 0})^2,
/// and cross-checked against the equivalent normalization-factor form
/// (1 / 2 m) sum_beta 1 / (Omega_beta D_beta^2); the two must agree to
/// `TOL_ID` or the coefficient set is inconsistent. Decoupled modes carry
/// no bead weight and drop out of the second sum.
pub fn bead_variance(
    coeffs: &CoefficientSet,
    spectrum: &BogoliubovSpectrum,
    mass: f64,
    omega_0: f64,
) -> (f64, f64) {
    let dim = coeffs.dim();
    assert_eq!(spectrum.frequencies.len(), dim, "spectrum size mismatch");
    let mut from_coefficients = 0.0;
    let mut from_norms = 0.0;
    for beta in 0..dim {
        let diff = coeffs.m.at(beta, 0) - coeffs.n.at(beta, 0);
        from_coefficients += diff * diff;
        if coeffs.m.at(beta, 0) != 0.0 {
            let d = coeffs.norm_factors[beta];
            from_norms += 1.0 / (spectrum.frequencies[beta] * d * d);
        }
    }
    let variance = from_coefficients / (2.0 * mass * omega_0);
    let check = from_norms / (2.0 * mass);
    let scale = if variance > 1.0 { variance } else { 1.0 };
    assert!(
        (variance - check).abs() <= TOL_ID * scale,
        "variance forms disagree: {variance} vs {check}"
    );
    (variance, variance * 2.0 * mass * omega_0)
}

/// Assemble the ground-state occupations and squeezing into one report.
pub fn ground_state_report(
    coeffs: &CoefficientSet,
    spectrum: &BogoliubovSpectrum,
    mass: f64,
    omega_0: f64,
) -> GroundStateReport {
    let n_occ = occupation_numbers(coeffs);
    let total_occ = n_occ.iter().sum();
    let (variance_u0, variance_ratio) = bead_variance(coeffs, spectrum, mass, omega_0);
    GroundStateReport { n_occ, total_occ, variance_u0, variance_ratio }
}

/// Closed-form variance ratio of the continuum model, as a function of the
/// damping rate and the boundary frequency measured against the dressed
/// resonance: R = (1/pi) [arctan((w_d^2 - 1) / (2 nu)) + arctan(1 / (2 nu))]
/// with both arguments in resonance units. R(0) = 1 exactly and R decreases
/// as the damping grows. Requires `omega_d_bar > 1` so the resonance lies
/// inside the band.
pub fn relative_variance(nu_bar: f64, omega_d_bar: f64) -> Result<f64> {
    if !(nu_bar.is_finite() && nu_bar >= 0.0) {
        return Err(Error::Domain("damping ratio must be finite and non-negative"));
    }
    if !(omega_d_bar > 1.0) {
        return Err(Error::Domain(
            "boundary frequency must exceed the resonance frequency",
        ));
    }
    let band = atan((omega_d_bar * omega_d_bar - 1.0) / (2.0 * nu_bar));
    let tail = atan(1.0 / (2.0 * nu_bar));
    Ok((band + tail) / core::f64::consts::PI)
}

/// Free evolution of the bead displacement after preparing the ground state
/// displaced by `delta`: <u_0(t)> = delta sum_alpha rho_alpha cos(Omega_alpha t).
pub fn displacement_trace(
    coeffs: &CoefficientSet,
    spectrum: &BogoliubovSpectrum,
    delta: f64,
    times: &[f64],
) -> Vec<f64> {
    let rho = bead_weights(coeffs);
    let mut trace = Vec::with_capacity(times.len());
    for &t in times {
        let mut sum = 0.0;
        for (weight, frequency) in rho.iter().zip(&spectrum.frequencies) {
            sum += weight * cos(frequency * t);
        }
        trace.push(delta * sum);
    }
    trace
}

/// Uniform time grid for decay traces: `TRACE_SAMPLES` points from zero
/// through ten damping times 10 / nu, or 200 bead periods when nu is zero.
pub fn default_time_grid(nu: f64, omega_0: f64) -> Vec<f64> {
    let t_max = if nu > 0.0 { 10.0 / nu } else { 200.0 / omega_0 };
    let step = t_max / (TRACE_SAMPLES - 1) as f64;
    (0..TRACE_SAMPLES).map(|i| i as f64 * step).collect()
}

/// Weight of the bare bead mode in each normal mode and an interpolated
/// linewidth. The weights obey the sum rule sum_alpha rho_alpha = 1.
pub fn spectral_density(
    coeffs: &CoefficientSet,
    spectrum: &BogoliubovSpectrum,
) -> SpectralDensity {
    let rho = bead_weights(coeffs);
    let width_estimate = half_max_width(&spectrum.frequencies, &rho);
    SpectralDensity { rho, width_estimate }
}

/// One-phonon decay products of a single bead quantum: the state with one
/// bare vibron on top of the squeezed vacuum overlaps the one-bogoliubon
/// state of normal mode alpha with probability
/// P_1(Omega_alpha) = (M^{-1})_{0 alpha}^2 / |det M|.
/// Fails with `SingularMatrix` if the coefficient matrix cannot be inverted.
pub fn emission_spectrum(coeffs: &CoefficientSet) -> Result<EmissionSpectrum> {
    let dim = coeffs.dim();
    // Row 0 of M^{-1} is the solution of M^T y = e_0.
    let lu = Lu::factor(&coeffs.m.transpose())?;
    let mut rhs = vec![0.0; dim];
    rhs[0] = 1.0;
    let row = lu.solve_vec(&rhs);
    let det = coeffs.det_m.abs();
    if det == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let p1: Vec<f64> = row.iter().map(|y| y * y / det).collect();
    let total_p1 = p1.iter().sum();
    let mut peak_alpha = 0;
    for (alpha, &weight) in p1.iter().enumerate() {
        if weight > p1[peak_alpha] {
            peak_alpha = alpha;
        }
    }
    Ok(EmissionSpectrum { p1, total_p1, peak_alpha })
}

/// rho_alpha = M_{alpha 0}^2 - N_{alpha 0}^2 for every normal mode.
fn bead_weights(coeffs: &CoefficientSet) -> Vec<f64> {
    let dim = coeffs.dim();
    let mut rho = Vec::with_capacity(dim);
    for beta in 0..dim {
        let m = coeffs.m.at(beta, 0);
        let n = coeffs.n.at(beta, 0);
        rho.push(m * m - n * n);
    }
    rho
}

/// Full width at half maximum of the polyline through (x_i, y_i), measured
/// around the global maximum. Sides that never drop below half maximum are
/// clamped to the grid boundary.
fn half_max_width(x: &[f64], y: &[f64]) -> f64 {
    let mut peak = 0;
    for i in 1..y.len() {
        if y[i] > y[peak] {
            peak = i;
        }
    }
    let half = 0.5 * y[peak];
    let mut left = x[0];
    for j in (1..=peak).rev() {
        if y[j - 1] < half && half <= y[j] {
            left = x[j - 1] + (x[j] - x[j - 1]) * (half - y[j - 1]) / (y[j] - y[j - 1]);
            break;
        }
    }
    let mut right = x[x.len() - 1];
    for j in peak..y.len() - 1 {
        if y[j] >= half && half > y[j + 1] {
            right = x[j] + (x[j + 1] - x[j]) * (y[j] - half) / (y[j] - y[j + 1]);
            break;
        }
    }
    right - left
}
