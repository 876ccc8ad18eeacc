//! The secular equation for the coupled bead-string normal frequencies.
//!
//! Diagonalizing the quadratic Hamiltonian reduces to finding the roots of
//!
//! S(x) = x - omega_0^2 - 4 omega_0 sum_q gamma_q^2 omega_q / (x - omega_q^2)
//!
//! in the variable x = Omega^2. S is rational with one simple pole per
//! coupled string mode and is strictly increasing between poles, so its
//! N+1 roots interlace the poles exactly: one root below omega_1^2, one in
//! each gap, and one above the band. Bracketing in x is therefore exact and
//! every root solve is a one-dimensional bracketed search.

use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{cos, fabs, sin, sqrt};

use crate::error::{Error, Result};
use crate::model::{DerivedScales, StringModes};
use crate::rootfind::brent;

/// Relative tolerance for the spectrum roots in x = Omega^2. Tight because
/// the coefficient formulas divide by (Omega^2 - omega_q^2) and amplify any
/// spectral error.
pub const TOL_SPEC: f64 = 1e-12;

/// Relative half-width of the guard band kept around each pole, in units
/// of the squared band-top frequency.
pub const POLE_GUARD_REL: f64 = 1e-12;

/// Inputs of the secular equation: the vibron frequency and the coupled
/// string modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularProblem {
    /// Bead vibron frequency omega_0.
    pub omega_0: f64,
    /// String mode frequencies omega_q, strictly increasing.
    pub omega: Vec<f64>,
    /// Couplings gamma_q, one per mode.
    pub gamma: Vec<f64>,
}

/// The solved normal-mode spectrum together with the evidence: the bracket
/// each root was isolated in and the secular residual at the root.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovSpectrum {
    /// Normal frequencies Omega_alpha, ascending, N+1 of them.
    pub frequencies: Vec<f64>,
    /// Bracketing intervals in x = Omega^2 that isolated each root.
    pub brackets: Vec<(f64, f64)>,
    /// |S(Omega_alpha^2)| at each accepted root.
    pub residuals: Vec<f64>,
}

impl SecularProblem {
    /// Validate and build a secular problem from raw arrays.
    pub fn new(omega_0: f64, omega: Vec<f64>, gamma: Vec<f64>) -> Result<SecularProblem> {
        if !(omega_0.is_finite() && omega_0 > 0.0) {
            return Err(Error::InvalidParameter(
                "vibron frequency omega_0 must be finite and strictly positive",
            ));
        }
        if omega.len() != gamma.len() {
            return Err(Error::InvalidParameter(
                "mode frequency and coupling arrays must have equal length",
            ));
        }
        for pair in omega.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidParameter(
                    "mode frequencies omega must be strictly increasing",
                ));
            }
        }
        if omega.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidParameter(
                "mode frequencies omega must be finite and strictly positive",
            ));
        }
        if gamma.iter().any(|&g| !g.is_finite()) {
            return Err(Error::InvalidParameter("couplings gamma must be finite"));
        }
        Ok(SecularProblem { omega_0, omega, gamma })
    }

    /// Build the secular problem for solved and coupled string modes.
    pub fn from_model(scales: &DerivedScales, modes: &StringModes) -> Result<SecularProblem> {
        SecularProblem::new(scales.omega_0, modes.omega.clone(), modes.gamma.clone())
    }

    /// Coupling strength g = (4/omega_0) sum_q gamma_q^2/omega_q; the
    /// Hamiltonian is positive definite exactly when g < 1.
    pub fn coupling_strength(&self) -> f64 {
        let mut g = 0.0;
        for (gamma, omega) in self.gamma.iter().zip(&self.omega) {
            g += gamma * gamma / omega;
        }
        4.0 * g / self.omega_0
    }

    /// Scale for pole-proximity decisions: the squared band top, or the
    /// squared vibron frequency if it is larger.
    fn x_scale(&self) -> f64 {
        let top = self.omega.last().copied().unwrap_or(self.omega_0);
        let x0 = self.omega_0 * self.omega_0;
        if top * top > x0 {
            top * top
        } else {
            x0
        }
    }

    fn eps_pole(&self) -> f64 {
        POLE_GUARD_REL * self.x_scale()
    }
}

/// S(x) and S'(x) without any pole guarding. Modes with exactly zero
/// coupling contribute nothing and are skipped, so they introduce no pole.
fn secular_raw(problem: &SecularProblem, x: f64) -> (f64, f64) {
    let mut s = x - problem.omega_0 * problem.omega_0;
    let mut ds = 1.0;
    for (&gamma, &omega) in problem.gamma.iter().zip(&problem.omega) {
        if gamma == 0.0 {
            continue;
        }
        let weight = 4.0 * problem.omega_0 * gamma * gamma * omega;
        let delta = x - omega * omega;
        s -= weight / delta;
        ds += weight / (delta * delta);
    }
    (s, ds)
}

/// Evaluate the secular function S and its derivative S' at x = Omega^2.
///
/// Points inside the guard band of a coupled pole are rejected, because a
/// raw evaluation there has no correct digits left; the returned error
/// carries the index of the offending mode.
pub fn secular_eval(problem: &SecularProblem, x: f64) -> Result<(f64, f64)> {
    let eps = problem.eps_pole();
    for (q, (&gamma, &omega)) in problem.gamma.iter().zip(&problem.omega).enumerate() {
        if gamma != 0.0 && fabs(x - omega * omega) < eps {
            return Err(Error::PoleProximity { pole: q });
        }
    }
    Ok(secular_raw(problem, x))
}

/// One root of S between two consecutive coupled poles (or below the first,
/// or above the last), found inside the guarded interval (lo, hi). Falls
/// back to a rescaled local variable when the root hides inside a guard
/// band; see `solve_near_pole`.
struct IsolatedRoot {
    x: f64,
    bracket: (f64, f64),
    residual: f64,
}

/// Solve S = 0 in the local variable t = |x - pole| when the root sits
/// closer to a pole than the guard band. The dominant pole term is kept in
/// exact t-form, which preserves relative accuracy in the tiny gap where a
/// direct evaluation of x - omega_q^2 would cancel catastrophically.
fn solve_near_pole(
    problem: &SecularProblem,
    pole_index: usize,
    below: bool,
    guard: f64,
) -> Option<f64> {
    let omega_p = problem.omega[pole_index];
    let gamma_p = problem.gamma[pole_index];
    let pole = omega_p * omega_p;
    let weight = 4.0 * problem.omega_0 * gamma_p * gamma_p * omega_p;
    // Sum over every other mode, evaluated at x = pole +- t; those terms
    // are smooth across the guard band so the x-form is accurate for them.
    let rest = |x: f64| {
        let mut s = x - problem.omega_0 * problem.omega_0;
        for (q, (&gamma, &omega)) in problem.gamma.iter().zip(&problem.omega).enumerate() {
            if q == pole_index || gamma == 0.0 {
                continue;
            }
            s -= 4.0 * problem.omega_0 * gamma * gamma * omega / (x - omega * omega);
        }
        s
    };
    // Signed local function: S as a function of the gap t > 0.
    let local = |t: f64| {
        if below {
            // x = pole - t, pole term -weight/(x - pole) = +weight/t.
            rest(pole - t) + weight / t
        } else {
            // x = pole + t, pole term -weight/t.
            rest(pole + t) - weight / t
        }
    };
    // The pole term diverges as t -> 0, so a sign change against the guard
    // edge is guaranteed when the root is inside the band.
    let t_min = guard * 1e-60;
    let t_root = brent(local, t_min, guard, TOL_SPEC, 0.0)?;
    Some(if below { pole - t_root } else { pole + t_root })
}

/// Solve the full Bogoliubov spectrum.
///
/// Checks stability first: g >= 1 is rejected before any root work. Then
/// one root is isolated per inter-pole interval, with the top interval
/// expanded geometrically until S turns positive. Modes with exactly zero
/// coupling decouple and contribute their bare frequency directly.
pub fn solve_spectrum(problem: &SecularProblem) -> Result<BogoliubovSpectrum> {
    let g = problem.coupling_strength();
    if g >= 1.0 {
        return Err(Error::Instability { g });
    }
    let eps = problem.eps_pole();
    // Coupled poles in ascending x; decoupled modes pass through unchanged.
    let mut poles: Vec<(usize, f64)> = Vec::new();
    let mut decoupled: Vec<f64> = Vec::new();
    for (q, (&gamma, &omega)) in problem.gamma.iter().zip(&problem.omega).enumerate() {
        if gamma == 0.0 {
            decoupled.push(omega);
        } else {
            poles.push((q, omega * omega));
        }
    }
    let n_intervals = poles.len() + 1;
    let mut roots: Vec<IsolatedRoot> = Vec::with_capacity(n_intervals);
    for i in 0..n_intervals {
        let lower = if i > 0 { Some(poles[i - 1]) } else { None };
        let upper = if i < poles.len() { Some(poles[i]) } else { None };
        let lo = match lower {
            Some((_, p)) => p + eps * fmax(1.0, p),
            None => 0.0,
        };
        let hi = match upper {
            Some((_, p)) => p - eps * fmax(1.0, p),
            None => {
                // Expand until S is positive; S grows like x, so this
                // terminates quickly from any starting point.
                let mut hi = 2.0 * fmax(problem.x_scale(), lo);
                let mut doublings = 0;
                while secular_raw(problem, hi).0 <= 0.0 {
                    hi *= 2.0;
                    doublings += 1;
                    if doublings > 200 {
                        return Err(Error::BracketFailure { index: i });
                    }
                }
                hi
            }
        };
        let s_lo = secular_raw(problem, lo).0;
        let s_hi = secular_raw(problem, hi).0;
        let root = if s_lo < 0.0 && s_hi > 0.0 {
            // Normal path: bracketed solve plus two Newton polish steps
            // using the analytic derivative.
            let mut x = brent(|x| secular_raw(problem, x).0, lo, hi, TOL_SPEC, 0.0)
                .ok_or(Error::BracketFailure { index: i })?;
            for _ in 0..2 {
                let (s, ds) = secular_raw(problem, x);
                let next = x - s / ds;
                if next > lo && next < hi {
                    x = next;
                }
            }
            x
        } else if s_lo >= 0.0 && s_hi > 0.0 {
            // The root hides between the lower pole and the guard edge.
            let (q, p) = lower.ok_or(Error::BracketFailure { index: i })?;
            solve_near_pole(problem, q, false, eps * fmax(1.0, p))
                .ok_or(Error::BracketFailure { index: i })?
        } else if s_lo < 0.0 && s_hi <= 0.0 {
            // The root hides between the guard edge and the upper pole.
            let (q, p) = upper.ok_or(Error::BracketFailure { index: i })?;
            solve_near_pole(problem, q, true, eps * fmax(1.0, p))
                .ok_or(Error::BracketFailure { index: i })?
        } else {
            return Err(Error::BracketFailure { index: i });
        };
        let residual = fabs(secular_raw(problem, root).0);
        roots.push(IsolatedRoot { x: root, bracket: (lo, hi), residual });
    }
    // Merge the decoupled bare frequencies back in, keeping everything
    // sorted by frequency.
    let mut entries: Vec<(f64, (f64, f64), f64)> =
        roots.iter().map(|r| (sqrt(r.x), r.bracket, r.residual)).collect();
    for &w in &decoupled {
        entries.push((w, (w * w, w * w), 0.0));
    }
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(BogoliubovSpectrum {
        frequencies: entries.iter().map(|e| e.0).collect(),
        brackets: entries.iter().map(|e| e.1).collect(),
        residuals: entries.iter().map(|e| e.2).collect(),
    })
}

fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

/// Residual of the stiff-coupling boundary condition
/// Omega^2 = omega_b^2 + 2 nu Omega cot(Omega ell / c)
/// at one frequency. At nu = 0 the boundary term is absent and the residual
/// reduces to |Omega^2 - omega_b^2|.
pub fn yurke_residual(omega_b: f64, nu: f64, ell_over_c: f64, omega: f64) -> f64 {
    if nu == 0.0 {
        return fabs(omega * omega - omega_b * omega_b);
    }
    let z = omega * ell_over_c;
    fabs(omega * omega - omega_b * omega_b - 2.0 * nu * omega * cos(z) / sin(z))
}

/// Evaluate the stiff-coupling boundary condition at every solved frequency.
///
/// The discrete spectrum approaches this transcendental equation only near
/// the special coupling omega_c^2 = (4/pi) nu omega_d, where the band sum
/// over mode couplings cancels the coupling-spring self-energy; there the
/// maximum residual over the low-frequency window shrinks as N grows. Away
/// from the special coupling the residuals stay large. This is a diagnostic,
/// not an invariant of the solver.
pub fn yurke_check(scales: &DerivedScales, spectrum: &BogoliubovSpectrum) -> Vec<f64> {
    let ell_over_c = scales.dos * PI;
    spectrum
        .frequencies
        .iter()
        .map(|&w| yurke_residual(scales.omega_b, scales.nu, ell_over_c, w))
        .collect()
}
