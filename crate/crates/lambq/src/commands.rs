//! One function per subcommand, writing the result files for a solved
//! instance.

use crate::emit::{fmt, write_csv, write_json};
use crate::error::CliError;
use crate::pipeline::ModelInstance;
use crate::verify::{first_failure, run_checks};
use lambq_core::{
    bead_variance, decay_rate, default_time_grid, displacement_trace, emission_spectrum,
    ground_state_report, spectral_density, ContinuumBath,
};
use serde::Serialize;
use std::path::Path;

/// Normal-mode table: frequency, isolating bracket, and solver residual per
/// mode.
pub fn spectrum(instance: &ModelInstance, out: &Path) -> Result<(), CliError> {
    let rows = (0..instance.spectrum.frequencies.len()).map(|alpha| {
        let (lo, hi) = instance.spectrum.brackets[alpha];
        format!(
            "{alpha},{},{},{},{}",
            fmt(instance.spectrum.frequencies[alpha]),
            fmt(lo),
            fmt(hi),
            fmt(instance.spectrum.residuals[alpha]),
        )
    });
    write_csv(&out.join("spectrum.csv"), "alpha,Omega,bracket_lo,bracket_hi,residual", rows)?;
    Ok(())
}

/// Full coefficient table: the M and N entries alongside their transposes
/// U and V, one row per index pair.
pub fn coeffs(instance: &ModelInstance, out: &Path) -> Result<(), CliError> {
    let dim = instance.coeffs.dim();
    let u = instance.coeffs.u();
    let v = instance.coeffs.v();
    let mut rows = Vec::with_capacity(dim * dim);
    for alpha in 0..dim {
        for beta in 0..dim {
            rows.push(format!(
                "{alpha},{beta},{},{},{},{}",
                fmt(instance.coeffs.m.at(alpha, beta)),
                fmt(instance.coeffs.n.at(alpha, beta)),
                fmt(u.at(alpha, beta)),
                fmt(v.at(alpha, beta)),
            ));
        }
    }
    write_csv(&out.join("coeffs.csv"), "alpha,beta,M,N,U,V", rows)?;
    Ok(())
}

#[derive(Serialize)]
struct GroundStateJson {
    coupling_g: f64,
    total_occ: f64,
    variance_u0: f64,
    variance_ratio: f64,
    zero_point_shift: f64,
    ground_norm: f64,
}

/// Ground-state occupations, spectral weights, and the squeezing summary.
pub fn ground_state(instance: &ModelInstance, out: &Path) -> Result<(), CliError> {
    let report = ground_state_report(
        &instance.coeffs,
        &instance.spectrum,
        instance.params.m,
        instance.scales.omega_0,
    );
    let occupation_rows = report.n_occ.iter().enumerate().map(|(alpha, &n)| {
        let omega = if alpha == 0 {
            instance.scales.omega_0
        } else {
            instance.modes.omega[alpha - 1]
        };
        format!("{alpha},{},{}", fmt(omega), fmt(n))
    });
    write_csv(&out.join("occupation.csv"), "alpha,omega,n", occupation_rows)?;

    let density = spectral_density(&instance.coeffs, &instance.spectrum);
    let rho_rows = instance
        .spectrum
        .frequencies
        .iter()
        .zip(&density.rho)
        .map(|(&omega, &weight)| format!("{},{}", fmt(omega), fmt(weight)));
    write_csv(&out.join("rho.csv"), "Omega,rho", rho_rows)?;

    let zero_point_shift = 0.5
        * (instance.spectrum.frequencies.iter().sum::<f64>()
            - instance.scales.omega_0
            - instance.modes.omega.iter().sum::<f64>());
    write_json(
        &out.join("ground_state.json"),
        &GroundStateJson {
            coupling_g: instance.problem.coupling_strength(),
            total_occ: report.total_occ,
            variance_u0: report.variance_u0,
            variance_ratio: report.variance_ratio,
            zero_point_shift,
            ground_norm: instance.coeffs.ground_norm,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct DecayJson {
    x_r: f64,
    omega_r: f64,
    gamma_r: f64,
    gamma_closed: f64,
    gamma_fit: f64,
    gamma_gr: f64,
    theta_0: f64,
    nu: f64,
    omega_s: f64,
    omega_d: f64,
}

/// Decay rates from the continuum closed forms and the discrete envelope
/// fit, plus the displacement trace itself.
pub fn decay(instance: &ModelInstance, delta: f64, out: &Path) -> Result<(), CliError> {
    let report = decay_rate(&instance.params)?;
    write_json(
        &out.join("decay.json"),
        &DecayJson {
            x_r: report.x_r,
            omega_r: report.omega_r,
            gamma_r: report.gamma_r,
            gamma_closed: report.gamma_closed,
            gamma_fit: report.gamma_fit,
            gamma_gr: report.gamma_gr,
            theta_0: report.theta_0,
            nu: instance.scales.nu,
            omega_s: instance.scales.omega_s,
            omega_d: instance.scales.omega_d,
        },
    )?;

    let times = default_time_grid(instance.scales.nu, instance.scales.omega_0);
    let trace = displacement_trace(&instance.coeffs, &instance.spectrum, delta, &times);
    let rows = times
        .iter()
        .zip(&trace)
        .map(|(&t, &u)| format!("{},{}", fmt(t), fmt(u)));
    write_csv(&out.join("trace.csv"), "t,u0", rows)?;
    Ok(())
}

#[derive(Serialize)]
struct EmissionJson {
    total_p1: f64,
    peak_alpha: usize,
    peak_omega: f64,
    ground_norm: f64,
}

/// One-phonon emission weights per normal mode.
pub fn emission(instance: &ModelInstance, out: &Path) -> Result<(), CliError> {
    let emission = emission_spectrum(&instance.coeffs)?;
    let rows = instance
        .spectrum
        .frequencies
        .iter()
        .zip(&emission.p1)
        .map(|(&omega, &weight)| format!("{},{}", fmt(omega), fmt(weight)));
    write_csv(&out.join("p1.csv"), "Omega,p1", rows)?;
    write_json(
        &out.join("emission.json"),
        &EmissionJson {
            total_p1: emission.total_p1,
            peak_alpha: emission.peak_alpha,
            peak_omega: instance.spectrum.frequencies[emission.peak_alpha],
            ground_norm: instance.coeffs.ground_norm,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct VarianceJson {
    variance_u0: f64,
    /// Ratio to the zero-point value at the bare bead frequency.
    variance_ratio_bare: f64,
    /// Resonance frequency of the continuum model, when it exists.
    omega_r: Option<f64>,
    /// Ratio to the zero-point value at the resonance frequency.
    variance_ratio_resonance: Option<f64>,
    /// Continuum closed form of the resonance-normalized ratio, with the
    /// damping and band edge measured against the bare bead frequency.
    continuum_ratio: Option<f64>,
}

/// Bead variance and its comparison against the continuum closed form.
pub fn variance(instance: &ModelInstance, out: &Path) -> Result<(), CliError> {
    let (variance_u0, ratio_bare) = bead_variance(
        &instance.coeffs,
        &instance.spectrum,
        instance.params.m,
        instance.scales.omega_0,
    );
    let bath = ContinuumBath::from_scales(&instance.scales);
    let (omega_r, ratio_resonance, continuum_ratio) = match bath.resonance() {
        Ok((x_r, _)) => {
            let omega_r = x_r.sqrt();
            let resonance = 2.0 * instance.params.m * omega_r * variance_u0;
            let continuum = lambq_core::relative_variance(
                instance.scales.nu / instance.scales.omega_0,
                instance.scales.omega_d / instance.scales.omega_0,
            )
            .ok();
            (Some(omega_r), Some(resonance), continuum)
        }
        Err(_) => (None, None, None),
    };
    write_json(
        &out.join("variance.json"),
        &VarianceJson {
            variance_u0,
            variance_ratio_bare: ratio_bare,
            omega_r,
            variance_ratio_resonance: ratio_resonance,
            continuum_ratio,
        },
    )?;
    Ok(())
}

/// Run the verification suite, print one line per invariant, and fail with
/// the first offending name.
pub fn verify(instance: &ModelInstance, inject: bool, out: &Path) -> Result<(), CliError> {
    let lines = run_checks(instance, inject);
    for line in &lines {
        println!(
            "check {:<26} residual {:>12.5e}  tolerance {:>8.1e}  {}",
            line.name,
            line.residual,
            line.tolerance,
            if line.pass { "PASS" } else { "FAIL" }
        );
    }
    write_json(&out.join("verify.json"), &lines)?;
    match first_failure(&lines) {
        None => {
            println!("verification passed ({} checks)", lines.len());
            Ok(())
        }
        Some(name) => Err(CliError::Verification(format!(
            "invariant broken: {name}"
        ))),
    }
}
