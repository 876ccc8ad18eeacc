//! Vibrational decay of the bead into the string.
//!
//! In the limit of a long string the bead sees a smooth band of modes with
//! spectral density J, and its survival amplitude develops a resonance pole
//! at a shifted frequency with a finite width. This module carries the
//! closed forms of that continuum picture and, as an independent check, an
//! envelope fit of the exact discrete displacement trace, so the closed-form
//! rate can be compared against the full interacting model at matched
//! parameters.

use crate::bogoliubov::build_coefficients;
use crate::error::{Error, Result};
use crate::model::{coupling_gammas, derive_scales, solve_wavenumbers, PhysicalParams};
use crate::observables::displacement_trace;
use crate::rootfind::brent;
use crate::spectrum::{solve_spectrum, SecularProblem};
use alloc::vec::Vec;
use libm::{atan, fabs, log, sqrt};

/// Number of samples in the resonance bracketing scan over (0, omega_d^2).
pub const RESONANCE_GRID: usize = 40_001;

/// Number of samples in the decay trace used for the envelope fit.
const FIT_SAMPLES: usize = 4096;

/// Minimum number of envelope maxima needed for a rate fit.
const FIT_MIN_PEAKS: usize = 3;

/// Continuum description of the string seen from the bead: a band of modes
/// up to the boundary frequency omega_d with a Lorentzian-weighted density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumBath {
    /// Bare bead frequency.
    pub omega_0: f64,
    /// Damping rate tau / (2 m c) of the classical bead on an infinite
    /// string.
    pub nu: f64,
    /// Crossover frequency c kappa_c / tau separating spring-dominated from
    /// tension-dominated response.
    pub omega_s: f64,
    /// Highest string frequency kept by the discretization.
    pub omega_d: f64,
}

/// Closed-form decay quantities and the fitted rate of the matched discrete
/// model.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Squared resonance frequency, the self-consistent root of the dressing
    /// curve.
    pub x_r: f64,
    /// Resonance frequency sqrt(x_r), shifted below omega_0 by the band.
    pub omega_r: f64,
    /// Raw resonance width from the band absorption at x_r.
    pub gamma_r: f64,
    /// Closed-form amplitude decay rate, exact to all orders in the width
    /// over the resonance frequency.
    pub gamma_closed: f64,
    /// Rate fitted to the envelope of the exact discrete decay trace.
    pub gamma_fit: f64,
    /// Weak-coupling golden-rule rate 2 nu for comparison.
    pub gamma_gr: f64,
    /// Phase of the resonance pole, arctan(gamma_r^2 / omega_r^2).
    pub theta_0: f64,
}

impl ContinuumBath {
    /// Read the bath parameters off the derived scales of a discrete model.
    pub fn from_scales(scales: &crate::model::DerivedScales) -> ContinuumBath {
        ContinuumBath {
            omega_0: scales.omega_0,
            nu: scales.nu,
            omega_s: scales.omega_s,
            omega_d: scales.omega_d,
        }
    }

    /// Spectral density of the coupling,
    /// J(omega) = nu omega_s^2 omega / (pi omega_0 (omega^2 + omega_s^2)).
    pub fn j_density(&self, omega: f64) -> f64 {
        let s2 = self.omega_s * self.omega_s;
        self.nu * s2 * omega
            / (core::f64::consts::PI * self.omega_0 * (omega * omega + s2))
    }

    /// Squared coupling weight absorbed by the band at squared frequency x:
    /// 2 pi omega_0 J(sqrt x) = 2 nu omega_s^2 sqrt(x) / (x + omega_s^2).
    pub fn spectral_weight(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain("squared frequency must be finite and non-negative"));
        }
        let s2 = self.omega_s * self.omega_s;
        Ok(2.0 * self.nu * s2 * sqrt(x) / (x + s2))
    }

    /// Principal-value dressing of the squared bead frequency by the band.
    /// The squared resonance frequency solves x = resonance_curve(x). Only
    /// defined strictly inside the band, 0 < x < omega_d^2.
    pub fn resonance_curve(&self, x: f64) -> Result<f64> {
        let (p, q, _) = self.curve_parts(x)?;
        Ok(self.omega_0 * self.omega_0 + p * q)
    }

    /// Derivative of the dressing curve with respect to x.
    pub fn resonance_curve_deriv(&self, x: f64) -> Result<f64> {
        let (p, q, band_log) = self.curve_parts(x)?;
        let s2 = self.omega_s * self.omega_s;
        let root = sqrt(x);
        let p_deriv = -p / (x + s2);
        let q_deriv = band_log / (4.0 * root)
            + self.omega_d / (2.0 * (self.omega_d * self.omega_d - x));
        Ok(p_deriv * q + p * q_deriv)
    }

    /// Squared resonance frequency and the curve slope there: the first
    /// upward crossing of x - resonance_curve(x) inside the band, bracketed
    /// on a `RESONANCE_GRID` scan and polished to machine precision.
    /// Fails with `ResonanceNotFound` when the dressed frequency lies
    /// outside the band, as for a string whose spectrum ends below the bead
    /// frequency.
    pub fn resonance(&self) -> Result<(f64, f64)> {
        let top = self.omega_d * self.omega_d;
        let lo = top * 1e-12;
        let hi = top * (1.0 - 1e-12);
        let step = (hi - lo) / (RESONANCE_GRID - 1) as f64;
        let residual = |x: f64| x - self.resonance_curve(x).unwrap_or(f64::INFINITY);
        let mut left = lo;
        let mut left_val = residual(left);
        let mut bracket = None;
        for i in 1..RESONANCE_GRID {
            let right = lo + i as f64 * step;
            let right_val = residual(right);
            if left_val < 0.0 && right_val >= 0.0 {
                bracket = Some((left, right));
                break;
            }
            left = right;
            left_val = right_val;
        }
        let (a, b) = bracket.ok_or(Error::ResonanceNotFound)?;
        let x_r = brent(residual, a, b, 1e-14, 1e-300).ok_or(Error::ResonanceNotFound)?;
        let slope = self.resonance_curve_deriv(x_r)?;
        Ok((x_r, slope))
    }

    /// Shared pieces of the dressing curve: the Lorentzian prefactor P, the
    /// band integral Q, and the boundary logarithm.
    fn curve_parts(&self, x: f64) -> Result<(f64, f64, f64)> {
        let top = self.omega_d * self.omega_d;
        if !(x > 0.0 && x < top) {
            return Err(Error::Domain(
                "squared frequency must lie strictly inside the band",
            ));
        }
        let s2 = self.omega_s * self.omega_s;
        let root = sqrt(x);
        let band_log = log((self.omega_d + root) / (self.omega_d - root));
        let p = 4.0 * self.nu * s2 / (core::f64::consts::PI * (x + s2));
        let q = 0.5 * root * band_log - self.omega_s * atan(self.omega_d / self.omega_s);
        Ok((p, q, band_log))
    }
}

/// Solve the continuum resonance for the given parameters and fit the decay
/// rate of the matched discrete model.
///
/// The closed-form side dresses the bead frequency with the band integral,
/// finds the resonance crossing, and converts the absorbed weight into an
/// amplitude decay rate. The discrete side evolves a displaced ground state
/// of the full model and fits a log-linear envelope to the trace, windowed
/// to five decay times and cut before the reflection off the far end of the
/// string returns at t = 2 ell / c.
pub fn decay_rate(params: &PhysicalParams) -> Result<DecayReport> {
    let scales = derive_scales(params)?;
    let bath = ContinuumBath::from_scales(&scales);
    let (x_r, slope) = bath.resonance()?;
    if !(slope < 1.0) {
        return Err(Error::Domain("resonance crossing is degenerate"));
    }
    let omega_r = sqrt(x_r);
    let gamma_r = sqrt(bath.spectral_weight(x_r)? / (1.0 - slope));
    let width_ratio = gamma_r / omega_r;
    let u = width_ratio * width_ratio * width_ratio * width_ratio;
    let gamma_closed = omega_r / sqrt(2.0) * sqrt(u / (sqrt(1.0 + u) + 1.0));
    let gamma_gr = 2.0 * bath.nu;
    let theta_0 = atan(gamma_r * gamma_r / x_r);

    let modes = solve_wavenumbers(params)?;
    let modes = coupling_gammas(params, &scales, modes);
    let problem = SecularProblem::from_model(&scales, &modes)?;
    let spectrum = solve_spectrum(&problem)?;
    let coeffs = build_coefficients(&problem, &spectrum);

    let echo_time = 2.0 * params.ell / scales.c;
    let window = fmin(5.0 / gamma_closed, 0.75 * echo_time);
    let step = window / (FIT_SAMPLES - 1) as f64;
    let times: Vec<f64> = (0..FIT_SAMPLES).map(|i| i as f64 * step).collect();
    let trace = displacement_trace(&coeffs, &spectrum, 1.0, &times);
    let gamma_fit = envelope_fit(&times, &trace)
        .ok_or(Error::Domain("decay trace has too few envelope maxima for a fit"))?;

    Ok(DecayReport {
        x_r,
        omega_r,
        gamma_r,
        gamma_closed,
        gamma_fit,
        gamma_gr,
        theta_0,
    })
}

/// Fit an exponential envelope to an oscillating trace: locate the local
/// maxima of |u|, sharpen each by a parabola through its three samples, and
/// least-squares fit a line to the log of the refined heights. Returns the
/// decay rate, or None with fewer than `FIT_MIN_PEAKS` usable maxima.
pub fn envelope_fit(times: &[f64], trace: &[f64]) -> Option<f64> {
    let mut peak_times = Vec::new();
    let mut peak_logs = Vec::new();
    for i in 1..trace.len().saturating_sub(1) {
        let before = fabs(trace[i - 1]);
        let here = fabs(trace[i]);
        let after = fabs(trace[i + 1]);
        if here >= before && here >= after && here > 0.0 {
            let curvature = before - 2.0 * here + after;
            let mut offset = if curvature == 0.0 { 0.0 } else { 0.5 * (before - after) / curvature };
            offset = offset.clamp(-0.5, 0.5);
            let height = here - 0.25 * (before - after) * offset;
            if height > 0.0 {
                peak_times.push(times[i] + offset * (times[i + 1] - times[i]));
                peak_logs.push(log(height));
            }
        }
    }
    if peak_times.len() < FIT_MIN_PEAKS {
        return None;
    }
    let count = peak_times.len() as f64;
    let t_mean = peak_times.iter().sum::<f64>() / count;
    let log_mean = peak_logs.iter().sum::<f64>() / count;
    let mut covariance = 0.0;
    let mut spread = 0.0;
    for (&t, &v) in peak_times.iter().zip(&peak_logs) {
        covariance += (t - t_mean) * (v - log_mean);
        spread += (t - t_mean) * (t - t_mean);
    }
    if spread == 0.0 {
        return None;
    }
    Some(-covariance / spread)
}

fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}
