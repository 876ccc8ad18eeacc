//! Physical parameters of the bead-on-a-string model and everything that
//! follows from them by pure arithmetic: derived frequency scales, the
//! string-mode wavenumbers, the mode couplings, and the dimensionless
//! coupling strength.
//!
//! The system is a bead of mass m held by a spring kappa, attached through
//! a second spring kappa_c to the end of a string of tension tau, lineal
//! density sigma, and length ell, truncated to its lowest N transverse
//! modes. Natural units with hbar = 1 are used throughout.

use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{atan, cos, fabs, sin, sqrt, tan};

use crate::error::{Error, Result};
use crate::rootfind::brent;

/// Relative tolerance for the wavenumber roots.
pub const TOL_ROOT: f64 = 1e-13;

/// Guard distance keeping brackets away from the tangent poles, in units
/// of pi/ell.
pub const BRACKET_GUARD: f64 = 1e-9;

/// Raw model parameters in consistent natural units (hbar = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Bead mass m.
    pub m: f64,
    /// Bead spring constant kappa.
    pub kappa: f64,
    /// Coupling spring constant kappa_c between bead and string end.
    pub kappa_c: f64,
    /// String tension tau.
    pub tau: f64,
    /// String lineal mass density sigma.
    pub sigma: f64,
    /// String length ell.
    pub ell: f64,
    /// Number of string modes N kept in the truncation.
    pub n_modes: usize,
}

/// Secondary scales derived from the raw parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedScales {
    /// Bead vibron frequency omega_0 = sqrt((kappa + kappa_c)/m).
    pub omega_0: f64,
    /// Bare bead frequency omega_b = sqrt(kappa/m).
    pub omega_b: f64,
    /// Coupling frequency omega_c = sqrt(kappa_c/m).
    pub omega_c: f64,
    /// Transverse wave speed c = sqrt(tau/sigma).
    pub c: f64,
    /// Damping scale nu = tau/(2 m c), the half rate of momentum loss into
    /// an infinite string.
    pub nu: f64,
    /// Boundary wavenumber k_s = kappa_c/tau of the spring-loaded end.
    pub k_s: f64,
    /// Roll-off frequency omega_s = c k_s of the coupling.
    pub omega_s: f64,
    /// Mode spacing length d = ell/N.
    pub d: f64,
    /// Band-top frequency omega_d = N pi c / ell.
    pub omega_d: f64,
    /// Density of states ell/(pi c) of the string modes.
    pub dos: f64,
}

/// The truncated string-mode data: wavenumbers, frequencies, mode-shape
/// normalizations, and (once filled) the bead-mode couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct StringModes {
    /// Wavenumbers k_n, ascending, one per bracket ((n-1/2)pi/ell, n pi/ell).
    pub k: Vec<f64>,
    /// Mode frequencies omega_n = c k_n.
    pub omega: Vec<f64>,
    /// Couplings gamma_n to the bead vibron; empty until `coupling_gammas`.
    pub gamma: Vec<f64>,
    /// Mode-shape normalizations A_n = sqrt(2/ell)/sqrt(1 - sin(2 k ell)/(2 k ell)).
    pub a_norm: Vec<f64>,
}

/// Dimensionless parametrization in units omega_0 = c = m = 1.
///
/// These four numbers fix the model completely: the frequency ratio r,
/// the stiffness ratio y, the mode count, and the string length in units
/// of c/omega_0. They are the combinations the observables actually sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Dimensionless {
    /// Frequency ratio r = omega_c/omega_0, strictly inside (0, 1).
    pub r: f64,
    /// Stiffness ratio y = tau/(kappa_c d); pi y equals omega_d/omega_s.
    pub y: f64,
    /// Number of string modes N.
    pub n_modes: usize,
    /// String length ell in units of c/omega_0.
    pub big_l: f64,
}

impl PhysicalParams {
    /// Check that every field is finite and strictly positive and that at
    /// least one string mode is kept.
    pub fn validate(&self) -> Result<()> {
        let checks: [(f64, &'static str); 6] = [
            (self.m, "bead mass m must be finite and strictly positive"),
            (self.kappa, "bead spring constant kappa must be finite and strictly positive"),
            (
                self.kappa_c,
                "coupling spring constant kappa_c must be finite and strictly positive",
            ),
            (self.tau, "string tension tau must be finite and strictly positive"),
            (self.sigma, "string mass density sigma must be finite and strictly positive"),
            (self.ell, "string length ell must be finite and strictly positive"),
        ];
        for (value, message) in checks {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(message));
            }
        }
        if self.n_modes < 1 {
            return Err(Error::InvalidParameter("mode count n_modes must be at least 1"));
        }
        Ok(())
    }

    /// Build parameters from the damping scale nu and roll-off frequency
    /// omega_s in units omega_0 = c = m = 1. Convenient for decay studies,
    /// where nu and omega_s are the quantities held fixed.
    pub fn from_damping(nu: f64, omega_s: f64, n_modes: usize, ell: f64) -> Result<PhysicalParams> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter("damping scale nu must be finite and strictly positive"));
        }
        if !(omega_s.is_finite() && omega_s > 0.0) {
            return Err(Error::InvalidParameter(
                "roll-off frequency omega_s must be finite and strictly positive",
            ));
        }
        // omega_c^2 = 2 nu omega_s always; the bead spring supplies the rest
        // of omega_0^2 = 1 and must stay positive.
        let kappa_c = 2.0 * nu * omega_s;
        if kappa_c >= 1.0 {
            return Err(Error::InvalidParameter(
                "2 nu omega_s must stay below 1, or the coupling spring exhausts omega_0",
            ));
        }
        let params = PhysicalParams {
            m: 1.0,
            kappa: 1.0 - kappa_c,
            kappa_c,
            tau: 2.0 * nu,
            sigma: 2.0 * nu,
            ell,
            n_modes,
        };
        params.validate()?;
        Ok(params)
    }
}

impl Dimensionless {
    /// Convert to raw parameters in the unit system omega_0 = c = m = 1.
    pub fn to_params(&self) -> Result<PhysicalParams> {
        if !(self.r.is_finite() && self.r > 0.0 && self.r < 1.0) {
            return Err(Error::InvalidParameter(
                "frequency ratio omega_c/omega_0 must lie strictly between 0 and 1",
            ));
        }
        if !(self.y.is_finite() && self.y > 0.0) {
            return Err(Error::InvalidParameter(
                "stiffness ratio tau/(kappa_c d) must be finite and strictly positive",
            ));
        }
        if !(self.big_l.is_finite() && self.big_l > 0.0) {
            return Err(Error::InvalidParameter(
                "string length in units of c/omega_0 must be finite and strictly positive",
            ));
        }
        if self.n_modes < 1 {
            return Err(Error::InvalidParameter("mode count n_modes must be at least 1"));
        }
        let kappa_c = self.r * self.r;
        let d = self.big_l / self.n_modes as f64;
        let tau = self.y * kappa_c * d;
        let params = PhysicalParams {
            m: 1.0,
            kappa: 1.0 - kappa_c,
            kappa_c,
            tau,
            // c = 1 pins sigma to tau.
            sigma: tau,
            ell: self.big_l,
            n_modes: self.n_modes,
        };
        params.validate()?;
        Ok(params)
    }

    /// Choose the stiffness ratio y so that the large-N coupling strength
    /// equals `g_target` at the given frequency ratio. Inverts
    /// g = (2/pi) r^2 arctan(pi y); only g below the r^2 ceiling is reachable.
    pub fn for_target_g(r: f64, g_target: f64, n_modes: usize, big_l: f64) -> Result<Dimensionless> {
        if !(r.is_finite() && r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(
                "frequency ratio omega_c/omega_0 must lie strictly between 0 and 1",
            ));
        }
        let ceiling = r * r;
        if !(g_target.is_finite() && g_target > 0.0 && g_target < ceiling) {
            return Err(Error::Domain(
                "target coupling strength must lie strictly between 0 and (omega_c/omega_0)^2",
            ));
        }
        let y = tan(PI * g_target / (2.0 * ceiling)) / PI;
        Dimensionless { r, y, n_modes, big_l }.to_params()?;
        Ok(Dimensionless { r, y, n_modes, big_l })
    }
}

/// Compute every derived scale from validated parameters.
pub fn derive_scales(params: &PhysicalParams) -> Result<DerivedScales> {
    params.validate()?;
    let c = sqrt(params.tau / params.sigma);
    let n = params.n_modes as f64;
    Ok(DerivedScales {
        omega_0: sqrt((params.kappa + params.kappa_c) / params.m),
        omega_b: sqrt(params.kappa / params.m),
        omega_c: sqrt(params.kappa_c / params.m),
        c,
        nu: params.tau / (2.0 * params.m * c),
        k_s: params.kappa_c / params.tau,
        omega_s: c * params.kappa_c / params.tau,
        d: params.ell / n,
        omega_d: n * PI * c / params.ell,
        dos: params.ell / (PI * c),
    })
}

/// Solve the end-loaded string dispersion relation tan(k ell) = -(tau/kappa_c) k
/// for the lowest N wavenumbers, one per bracket ((n-1/2)pi/ell, n pi/ell).
///
/// The solver works on the pole-free equivalent
/// f(k) = kappa_c sin(k ell) + tau k cos(k ell),
/// which shares its roots with the tangent form inside each bracket but is
/// smooth and bounded there, then polishes each root with two Newton steps.
pub fn solve_wavenumbers(params: &PhysicalParams) -> Result<StringModes> {
    params.validate()?;
    let ell = params.ell;
    let kappa_c = params.kappa_c;
    let tau = params.tau;
    let c = sqrt(tau / params.sigma);
    let guard = BRACKET_GUARD * PI / ell;
    let f = |k: f64| kappa_c * sin(k * ell) + tau * k * cos(k * ell);
    let mut k_roots = Vec::with_capacity(params.n_modes);
    for n in 1..=params.n_modes {
        let lo = ((n as f64) - 0.5) * PI / ell + guard;
        let hi = (n as f64) * PI / ell - guard;
        if f(lo) * f(hi) > 0.0 {
            return Err(Error::BracketFailure { index: n });
        }
        let mut root = brent(f, lo, hi, TOL_ROOT, 0.0).ok_or(Error::BracketFailure { index: n })?;
        // Newton polish against the same pole-free form lands the root on
        // the nearest representable double.
        for _ in 0..2 {
            let kl = root * ell;
            let (s, co) = (sin(kl), cos(kl));
            let value = kappa_c * s + tau * root * co;
            let slope = kappa_c * ell * co + tau * co - tau * root * ell * s;
            if slope != 0.0 {
                let step = value / slope;
                let next = root - step;
                if next > lo && next < hi {
                    root = next;
                }
            }
        }
        k_roots.push(root);
    }
    let omega: Vec<f64> = k_roots.iter().map(|&k| c * k).collect();
    let a_norm: Vec<f64> = k_roots.iter().map(|&k| mode_norm(k, ell)).collect();
    Ok(StringModes { k: k_roots, omega, gamma: Vec::new(), a_norm })
}

/// Mode-shape normalization A_n = sqrt(2/ell)/sqrt(1 - sin(2 k ell)/(2 k ell)).
fn mode_norm(k: f64, ell: f64) -> f64 {
    let kl = k * ell;
    sqrt(2.0 / ell) / sqrt(1.0 - sin(2.0 * kl) / (2.0 * kl))
}

/// Coupling of one string mode to the bead vibron, in closed form:
///
/// gamma = omega_s sqrt(nu/omega_0) sqrt(x/(x^2 + z^2)) / sqrt(1 + z/(x^2 + z^2)),
///
/// with x = k ell and z = k_s ell. The plus sign under the last square root
/// follows from the identity sin(2x)/(2x) = -z/(x^2 + z^2), which holds on
/// the dispersion relation tan x = -x/z; a minus-signed variant fails the
/// first-principles cross-check by tens of percent (see the unit tests).
pub fn gamma_closed(omega_s: f64, nu: f64, omega_0: f64, k_ell: f64, ks_ell: f64) -> f64 {
    let denom = k_ell * k_ell + ks_ell * ks_ell;
    let shape = ks_ell / denom;
    omega_s * sqrt(nu / omega_0) * sqrt(k_ell / denom) / sqrt(1.0 + shape)
}

/// Fill the couplings gamma_n for every solved mode, using the canonical
/// positive sign convention. Cross-check against `gamma_first_principles`,
/// which evaluates the same quantity from the mode shapes directly.
pub fn coupling_gammas(
    params: &PhysicalParams,
    scales: &DerivedScales,
    mut modes: StringModes,
) -> StringModes {
    let ks_ell = scales.k_s * params.ell;
    modes.gamma = modes
        .k
        .iter()
        .map(|&k| gamma_closed(scales.omega_s, scales.nu, scales.omega_0, k * params.ell, ks_ell))
        .collect();
    modes
}

/// The couplings evaluated from first principles: the coupling spring force
/// kappa_c times the mode amplitude at the attachment point, normalized by
/// the zero-point lengths of bead and mode,
///
/// gamma_n = kappa_c A_n |sin(k_n ell)| / (2 sqrt(m sigma omega_0 omega_n)).
pub fn gamma_first_principles(
    params: &PhysicalParams,
    scales: &DerivedScales,
    modes: &StringModes,
) -> Vec<f64> {
    modes
        .k
        .iter()
        .zip(&modes.omega)
        .zip(&modes.a_norm)
        .map(|((&k, &w), &a)| {
            params.kappa_c * a * fabs(sin(k * params.ell))
                / (2.0 * sqrt(params.m * params.sigma * scales.omega_0 * w))
        })
        .collect()
}

/// Dimensionless coupling strength: the discrete sum
/// g = (4/omega_0) sum_n gamma_n^2/omega_n, together with its large-N
/// closed form g_infinity for comparison.
pub fn coupling_strength(scales: &DerivedScales, modes: &StringModes) -> (f64, f64) {
    let mut g = 0.0;
    for (gamma, omega) in modes.gamma.iter().zip(&modes.omega) {
        g += gamma * gamma / omega;
    }
    g *= 4.0 / scales.omega_0;
    let stiffness_ratio = scales.omega_d / (PI * scales.omega_s);
    (g, g_infinity(scales.omega_c, scales.omega_0, stiffness_ratio))
}

/// Large-N limit of the coupling strength,
/// g_infinity = (2/pi) (omega_c/omega_0)^2 arctan(pi y),
/// as a function of the stiffness ratio y = tau/(kappa_c d) = omega_d/(pi omega_s).
/// Accepts y = 0 and y = infinity, where it returns the exact endpoints
/// 0 and (omega_c/omega_0)^2.
pub fn g_infinity(omega_c: f64, omega_0: f64, stiffness_ratio: f64) -> f64 {
    let ratio = omega_c / omega_0;
    (2.0 / PI) * ratio * ratio * atan(PI * stiffness_ratio)
}
