//! The self-check suite behind the `verify` command.
//!
//! Runs every structural invariant of a solved instance and reports one
//! line per check: the symplectic identities of the coefficient set, the
//! spectral sum rule, the defining equations of the coefficients, the
//! brute-force quadrature cross-check, the backward error of the secular
//! roots, and the squeeze-matrix identities.

use crate::pipeline::ModelInstance;
use lambq_core::{
    check_symplectic, quadrature_spectrum, schur_residual, squeeze_determinant_residual,
    squeeze_matrix, verify_coefficient_system,
};
use serde::Serialize;

/// Tolerance on the symplectic matrix identities.
const TOL_IDENTITY: f64 = 1e-10;
/// Tolerance on the coefficient defining equations.
const TOL_SYSTEM: f64 = 1e-9;
/// Relative tolerance on the quadrature cross-check.
const TOL_CROSSCHECK: f64 = 1e-10;
/// Tolerance on the backward error of the secular roots, relative to
/// max(1, Omega^2).
const TOL_BACKWARD: f64 = 1e-11;
/// Relative tolerance on the squeeze determinant identity.
const TOL_DETERMINANT: f64 = 1e-8;

/// One verification line.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    /// Invariant being checked.
    pub name: &'static str,
    /// Measured residual.
    pub residual: f64,
    /// Acceptance threshold.
    pub tolerance: f64,
    /// Whether the residual is inside the threshold.
    pub pass: bool,
}

fn line(name: &'static str, residual: f64, tolerance: f64) -> CheckLine {
    CheckLine { name, residual, tolerance, pass: residual.is_finite() && residual < tolerance }
}

/// Run the whole suite. With `inject` set, one coefficient is deliberately
/// corrupted first, so the suite must fail; this exercises the failure path
/// end to end.
pub fn run_checks(instance: &ModelInstance, inject: bool) -> Vec<CheckLine> {
    let mut coeffs = instance.coeffs.clone();
    if inject {
        *coeffs.m.at_mut(0, 0) *= 1.0 + 1e-6;
    }
    let mut lines = Vec::new();

    let report = check_symplectic(&coeffs);
    lines.push(line("T J T^T = J", report.t_symplectic, TOL_IDENTITY));
    lines.push(line("M M^T - N N^T = I", report.mn_sum_rule, TOL_IDENTITY));
    lines.push(line("U U^T - V V^T = I", report.uv_sum_rule, TOL_IDENTITY));
    lines.push(line("N M^T symmetric", report.nmt_symmetry, TOL_IDENTITY));
    lines.push(line("U V^T symmetric", report.uvt_symmetry, TOL_IDENTITY));
    lines.push(line("det T = 1", report.det_t_deviation, TOL_IDENTITY));
    lines.push(line("row normalization", report.row_normalization, TOL_IDENTITY));

    let mut sum = 0.0;
    for beta in 0..coeffs.dim() {
        let m = coeffs.m.at(beta, 0);
        let n = coeffs.n.at(beta, 0);
        sum += m * m - n * n;
    }
    lines.push(line("spectral weight sum rule", (sum - 1.0).abs(), TOL_IDENTITY));

    lines.push(line(
        "coefficient equations",
        verify_coefficient_system(&instance.problem, &coeffs, &instance.spectrum),
        TOL_SYSTEM,
    ));

    let crosscheck = match quadrature_spectrum(&instance.problem) {
        Ok(brute) => brute
            .iter()
            .zip(&instance.spectrum.frequencies)
            .map(|(have, want)| (have - want).abs() / want)
            .fold(0.0_f64, f64::max),
        Err(_) => f64::INFINITY,
    };
    lines.push(line("quadrature cross-check", crosscheck, TOL_CROSSCHECK));

    let mut backward = 0.0_f64;
    for beta in 0..coeffs.dim() {
        let d = instance.coeffs.norm_factors[beta];
        let x = instance.spectrum.frequencies[beta].powi(2);
        let scaled = instance.spectrum.residuals[beta] / (d * d) / x.max(1.0);
        backward = backward.max(scaled);
    }
    lines.push(line("secular backward error", backward, TOL_BACKWARD));

    match squeeze_matrix(&coeffs) {
        Ok(squeeze) => {
            lines.push(line("xi symmetric", squeeze.symmetry_residual(), TOL_IDENTITY));
            lines.push(line("Schur complement", schur_residual(&coeffs, &squeeze), TOL_IDENTITY));
            let det = squeeze_determinant_residual(&coeffs, &squeeze)
                .unwrap_or(f64::INFINITY);
            lines.push(line("squeeze determinant", det, TOL_DETERMINANT));
        }
        Err(_) => {
            lines.push(line("xi symmetric", f64::INFINITY, TOL_IDENTITY));
            lines.push(line("Schur complement", f64::INFINITY, TOL_IDENTITY));
            lines.push(line("squeeze determinant", f64::INFINITY, TOL_DETERMINANT));
        }
    }

    lines
}

/// Name of the first failing check, if any.
pub fn first_failure(lines: &[CheckLine]) -> Option<&'static str> {
    lines.iter().find(|l| !l.pass).map(|l| l.name)
}
