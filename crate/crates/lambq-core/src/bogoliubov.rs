//! The Bogoliubov transformation that diagonalizes the coupled Hamiltonian.
//!
//! Each normal-mode operator is a linear mix of every original mode and its
//! conjugate, b_beta = sum_a (M_{beta a} a_a + N_{beta a} a_a^dag). Closing
//! the commutator [H, b_beta] = -Omega_beta b_beta fixes the coefficient
//! rows up to normalization, and boson commutation relations make the block
//! matrix T = [[M, N], [N, M]] symplectic. This module builds M and N in
//! closed form from the solved spectrum, exposes the inverse-transformation
//! blocks U = M^T and V = -N^T, the squeeze matrix xi = M^{-1} N of the
//! ground state, and a residual report for the full symplectic identity
//! suite.

use alloc::vec;
use alloc::vec::Vec;
use libm::{fabs, sqrt};

use crate::error::Result;
use crate::linalg::{Lu, Mat};
use crate::spectrum::{BogoliubovSpectrum, SecularProblem};

/// Max-norm tolerance for the symplectic identity suite at N <= 200.
pub const TOL_ID: f64 = 1e-10;

/// Denominator gap below which a Table-style coefficient is flagged as
/// ill-conditioned, in units of omega_0.
pub const CONDITIONING_GAP: f64 = 1e-8;

/// The Bogoliubov coefficient matrices and derived scalars.
///
/// Rows are normal modes beta (ascending frequency), columns are original
/// modes: column 0 the bead vibron, column k the k-th string mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    /// Coefficients of the annihilation operators.
    pub m: Mat,
    /// Coefficients of the creation operators.
    pub n: Mat,
    /// Row normalizations D_beta = sqrt(S'(Omega_beta^2)); all >= 1.
    pub norm_factors: Vec<f64>,
    /// Signed determinant of M. Its sign is a gauge artifact (flipping the
    /// sign convention of one coupling flips one column of M), so physical
    /// formulas use the absolute value.
    pub det_m: f64,
    /// Ground-state normalization 1/sqrt(|det M|).
    pub ground_norm: f64,
    /// (beta, k) pairs whose denominator |Omega_beta - omega_k| fell below
    /// `CONDITIONING_GAP * omega_0`; coefficients there carry fewer correct
    /// digits than usual.
    pub conditioning: Vec<(usize, usize)>,
}

/// The squeeze matrix xi = M^{-1} N parameterizing the squeezed-vacuum
/// ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeMatrix {
    /// The matrix xi; symmetric, with spectral radius below 1 for stable
    /// parameters.
    pub xi: Mat,
}

impl CoefficientSet {
    /// Number of modes N + 1.
    pub fn dim(&self) -> usize {
        self.m.rows
    }

    /// Inverse-transformation block U = M^T, exactly by construction.
    pub fn u(&self) -> Mat {
        self.m.transpose()
    }

    /// Inverse-transformation block V = -N^T, exactly by construction.
    pub fn v(&self) -> Mat {
        let mut v = self.n.transpose();
        for entry in v.data.iter_mut() {
            *entry = -*entry;
        }
        v
    }
}

impl SqueezeMatrix {
    /// Largest absolute deviation from symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        self.xi.asymmetry()
    }
}

/// Build the coefficient matrices from a solved spectrum.
///
/// Every row follows the closed forms
///
/// M_{b0} = (Omega_b + omega_0) / (sqrt(4 omega_0 Omega_b) D_b)
/// N_{b0} = (Omega_b - omega_0) / (sqrt(4 omega_0 Omega_b) D_b)
/// M_{bk} = -2 omega_0 gamma_k / ((Omega_b - omega_k) sqrt(4 omega_0 Omega_b) D_b)
/// N_{bk} = -2 omega_0 gamma_k / ((Omega_b + omega_k) sqrt(4 omega_0 Omega_b) D_b)
///
/// with D_b^2 = 1 + 4 omega_0 sum_q gamma_q^2 omega_q / (Omega_b^2 - omega_q^2)^2.
/// A string mode with exactly zero coupling decouples; its row is the unit
/// row of that bare mode (the gamma -> 0 limit of the forms above).
pub fn build_coefficients(
    problem: &SecularProblem,
    spectrum: &BogoliubovSpectrum,
) -> CoefficientSet {
    let n_string = problem.omega.len();
    let dim = n_string + 1;
    assert_eq!(spectrum.frequencies.len(), dim, "spectrum size mismatch");
    let omega_0 = problem.omega_0;
    let mut m = Mat::zeros(dim, dim);
    let mut n = Mat::zeros(dim, dim);
    let mut norm_factors = vec![1.0; dim];
    let mut conditioning = Vec::new();
    for (beta, &big_omega) in spectrum.frequencies.iter().enumerate() {
        // A decoupled mode's frequency passes through the spectrum solver
        // bit-for-bit, so exact equality identifies its row.
        let decoupled = problem
            .gamma
            .iter()
            .zip(&problem.omega)
            .position(|(&g, &w)| g == 0.0 && w == big_omega);
        if let Some(q) = decoupled {
            *m.at_mut(beta, q + 1) = 1.0;
            continue;
        }
        let x = big_omega * big_omega;
        let mut d_sq = 1.0;
        for (&gamma, &omega) in problem.gamma.iter().zip(&problem.omega) {
            if gamma == 0.0 {
                continue;
            }
            let delta = x - omega * omega;
            d_sq += 4.0 * omega_0 * gamma * gamma * omega / (delta * delta);
        }
        let d = sqrt(d_sq);
        norm_factors[beta] = d;
        let scale = 1.0 / (sqrt(4.0 * omega_0 * big_omega) * d);
        *m.at_mut(beta, 0) = (big_omega + omega_0) * scale;
        *n.at_mut(beta, 0) = (big_omega - omega_0) * scale;
        for (k, (&gamma, &omega)) in problem.gamma.iter().zip(&problem.omega).enumerate() {
            if gamma == 0.0 {
                continue;
            }
            if fabs(big_omega - omega) < CONDITIONING_GAP * omega_0 {
                conditioning.push((beta, k + 1));
            }
            *m.at_mut(beta, k + 1) = -2.0 * omega_0 * gamma / (big_omega - omega) * scale;
            *n.at_mut(beta, k + 1) = -2.0 * omega_0 * gamma / (big_omega + omega) * scale;
        }
    }
    let det_m = match Lu::factor(&m) {
        Ok(lu) => lu.det(),
        // A singular M can only mean parameters at the instability edge;
        // record it honestly and let downstream solves report the error.
        Err(_) => 0.0,
    };
    let ground_norm = if det_m != 0.0 { 1.0 / sqrt(fabs(det_m)) } else { f64::INFINITY };
    CoefficientSet { m, n, norm_factors, det_m, ground_norm, conditioning }
}

/// Max-norm residuals of the symplectic identity suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticReport {
    /// max |T J T^T - J| with T = [[M, N], [N, M]] and J the boson form.
    pub t_symplectic: f64,
    /// max |M M^T - N N^T - I| (forward sum rule).
    pub mn_sum_rule: f64,
    /// max |U U^T - V V^T - I| (inverse sum rule).
    pub uv_sum_rule: f64,
    /// Asymmetry of N M^T.
    pub nmt_symmetry: f64,
    /// Asymmetry of U V^T.
    pub uvt_symmetry: f64,
    /// |det T - 1|.
    pub det_t_deviation: f64,
    /// max over rows of |M_{b0}^2 - N_{b0}^2 + sum_q (M_{bq}^2 - N_{bq}^2) - 1|.
    pub row_normalization: f64,
}

impl SymplecticReport {
    /// The single worst residual in the report.
    pub fn max_residual(&self) -> f64 {
        let all = [
            self.t_symplectic,
            self.mn_sum_rule,
            self.uv_sum_rule,
            self.nmt_symmetry,
            self.uvt_symmetry,
            self.det_t_deviation,
            self.row_normalization,
        ];
        all.iter().fold(0.0, |acc, &r| if r > acc { r } else { acc })
    }

    /// Name and value of the worst-offending identity, for error reports.
    pub fn worst(&self) -> (&'static str, f64) {
        let all = [
            ("T J T^T = J", self.t_symplectic),
            ("M M^T - N N^T = I", self.mn_sum_rule),
            ("U U^T - V V^T = I", self.uv_sum_rule),
            ("N M^T symmetric", self.nmt_symmetry),
            ("U V^T symmetric", self.uvt_symmetry),
            ("det T = 1", self.det_t_deviation),
            ("row normalization", self.row_normalization),
        ];
        let mut worst = all[0];
        for entry in all {
            if entry.1 > worst.1 {
                worst = entry;
            }
        }
        worst
    }
}

/// Subtract the identity in place and return the largest absolute entry.
fn minus_identity_max(mut a: Mat) -> f64 {
    let k = a.rows;
    for i in 0..k {
        *a.at_mut(i, i) -= 1.0;
    }
    a.max_abs()
}

/// Assemble T = [[M, N], [N, M]].
fn block_t(coeffs: &CoefficientSet) -> Mat {
    let k = coeffs.dim();
    let mut t = Mat::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let mv = coeffs.m.at(i, j);
            let nv = coeffs.n.at(i, j);
            *t.at_mut(i, j) = mv;
            *t.at_mut(i, j + k) = nv;
            *t.at_mut(i + k, j) = nv;
            *t.at_mut(i + k, j + k) = mv;
        }
    }
    t
}

/// The boson symplectic form J = [[0, I], [-I, 0]].
fn symplectic_form(k: usize) -> Mat {
    let mut j = Mat::zeros(2 * k, 2 * k);
    for i in 0..k {
        *j.at_mut(i, i + k) = 1.0;
        *j.at_mut(i + k, i) = -1.0;
    }
    j
}

/// Evaluate every symplectic identity and report the residuals. Purely
/// diagnostic: callers decide what to assert against `TOL_ID`.
pub fn check_symplectic(coeffs: &CoefficientSet) -> SymplecticReport {
    let k = coeffs.dim();
    let m_t = coeffs.m.transpose();
    let n_t = coeffs.n.transpose();
    // Forward sum rule M M^T - N N^T = I.
    let mut mm = coeffs.m.mul(&m_t);
    let nn = coeffs.n.mul(&n_t);
    for (a, b) in mm.data.iter_mut().zip(&nn.data) {
        *a -= b;
    }
    let mn_sum_rule = minus_identity_max(mm);
    // Inverse sum rule U U^T - V V^T = M^T M - N^T N = I.
    let mut mtm = m_t.mul(&coeffs.m);
    let ntn = n_t.mul(&coeffs.n);
    for (a, b) in mtm.data.iter_mut().zip(&ntn.data) {
        *a -= b;
    }
    let uv_sum_rule = minus_identity_max(mtm);
    // Symmetry of N M^T and of U V^T = -M^T N.
    let nmt_symmetry = coeffs.n.mul(&m_t).asymmetry();
    let uvt_symmetry = m_t.mul(&coeffs.n).asymmetry();
    // Full block form: T J T^T = J and det T = 1.
    let t = block_t(coeffs);
    let j = symplectic_form(k);
    let t_symplectic = t.mul(&j).mul(&t.transpose()).max_abs_diff(&j);
    let det_t_deviation = match Lu::factor(&t) {
        Ok(lu) => fabs(lu.det() - 1.0),
        Err(_) => f64::INFINITY,
    };
    // Per-row normalization.
    let mut row_normalization = 0.0;
    for beta in 0..k {
        let mut sum = 0.0;
        for a in 0..k {
            let mv = coeffs.m.at(beta, a);
            let nv = coeffs.n.at(beta, a);
            sum += mv * mv - nv * nv;
        }
        let dev = fabs(sum - 1.0);
        if dev > row_normalization {
            row_normalization = dev;
        }
    }
    SymplecticReport {
        t_symplectic,
        mn_sum_rule,
        uv_sum_rule,
        nmt_symmetry,
        uvt_symmetry,
        det_t_deviation,
        row_normalization,
    }
}

/// The squeeze matrix xi = M^{-1} N by factorized linear solve (never an
/// explicit inverse). Fails only when M is singular, i.e. at or beyond the
/// instability where the transformation degenerates.
pub fn squeeze_matrix(coeffs: &CoefficientSet) -> Result<SqueezeMatrix> {
    let lu = Lu::factor(&coeffs.m)?;
    Ok(SqueezeMatrix { xi: lu.solve_mat(&coeffs.n) })
}

/// Residual of the Schur identity (M^T)^{-1} = M - N M^{-1} N, evaluated
/// without inverses as max |M^T (M - N xi) - I|.
pub fn schur_residual(coeffs: &CoefficientSet, squeeze: &SqueezeMatrix) -> f64 {
    let mut inner = coeffs.n.mul(&squeeze.xi);
    for (a, b) in inner.data.iter_mut().zip(&coeffs.m.data) {
        *a = b - *a;
    }
    minus_identity_max(coeffs.m.transpose().mul(&inner))
}

/// Relative deviation of det(1 - xi^2) from 1/det(M)^2, a closed-form
/// consistency check tying the squeeze matrix to the transformation.
pub fn squeeze_determinant_residual(coeffs: &CoefficientSet, squeeze: &SqueezeMatrix) -> Result<f64> {
    let k = coeffs.dim();
    let xi_sq = squeeze.xi.mul(&squeeze.xi);
    let mut one_minus = Mat::identity(k);
    for (a, b) in one_minus.data.iter_mut().zip(&xi_sq.data) {
        *a -= b;
    }
    let det = Lu::factor(&one_minus)?.det();
    let expect = 1.0 / (coeffs.det_m * coeffs.det_m);
    Ok(fabs(det - expect) / expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_eigh;
    use crate::model::{coupling_gammas, derive_scales, solve_wavenumbers, Dimensionless};
    use crate::spectrum::solve_spectrum;
    use core::f64::consts::PI;

    fn solved(dims: Dimensionless) -> (SecularProblem, BogoliubovSpectrum) {
        let p = dims.to_params().unwrap();
        let s = derive_scales(&p).unwrap();
        let modes = coupling_gammas(&p, &s, solve_wavenumbers(&p).unwrap());
        let problem = SecularProblem::from_model(&s, &modes).unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        (problem, spectrum)
    }

    fn eight_mode() -> (SecularProblem, BogoliubovSpectrum) {
        solved(Dimensionless { r: 0.6, y: 1.2, n_modes: 8, big_l: 12.0 })
    }

    #[test]
    fn decoupled_limit_is_the_identity_transformation() {
        let problem = SecularProblem::new(1.3, vec![2.0, 3.0], vec![0.0, 0.0]).unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        assert!(coeffs.m.max_abs_diff(&Mat::identity(3)) < 1e-12);
        assert!(coeffs.n.max_abs() < 1e-12);
        assert!((coeffs.det_m - 1.0).abs() < 1e-12);
        assert!((coeffs.ground_norm - 1.0).abs() < 1e-12);
        let xi = squeeze_matrix(&coeffs).unwrap();
        assert!(xi.xi.max_abs() < 1e-12);
        let report = check_symplectic(&coeffs);
        assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn symplectic_suite_passes_at_moderate_size() {
        let (problem, spectrum) = eight_mode();
        let coeffs = build_coefficients(&problem, &spectrum);
        let report = check_symplectic(&coeffs);
        assert!(report.max_residual() < TOL_ID, "{report:?}");
        // Normalizations are genuine: D >= 1 for every row.
        assert!(coeffs.norm_factors.iter().all(|&d| d >= 1.0));
        assert!(coeffs.conditioning.is_empty());
    }

    #[test]
    fn perturbing_one_frequency_breaks_the_identities() {
        let (problem, mut spectrum) = eight_mode();
        spectrum.frequencies[0] *= 1.0 + 1e-4;
        let coeffs = build_coefficients(&problem, &spectrum);
        let report = check_symplectic(&coeffs);
        assert!(
            report.max_residual() > 1e-6,
            "perturbation went unnoticed: {report:?}"
        );
    }

    #[test]
    fn frozen_determinant_and_ground_norm() {
        let (problem, spectrum) =
            solved(Dimensionless { r: 0.45, y: 0.8, n_modes: 2, big_l: 2.0 * PI / 3.0 });
        let coeffs = build_coefficients(&problem, &spectrum);
        let det_expect = 1.0064411117921712;
        let norm_expect = 0.99679491903341977;
        assert!((coeffs.det_m - det_expect).abs() < 1e-11 * det_expect, "{}", coeffs.det_m);
        assert!((coeffs.ground_norm - norm_expect).abs() < 1e-11, "{}", coeffs.ground_norm);
        // N^2 |det M| = 1 ties the two together.
        assert!((coeffs.ground_norm * coeffs.ground_norm * coeffs.det_m.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn squeeze_matrix_is_symmetric_contractive_and_schur_consistent() {
        let (problem, spectrum) = eight_mode();
        let coeffs = build_coefficients(&problem, &spectrum);
        let squeeze = squeeze_matrix(&coeffs).unwrap();
        assert!(squeeze.symmetry_residual() < TOL_ID);
        // Spectral radius below 1: xi is symmetric, so Jacobi eigenvalues
        // are the singular values up to sign.
        let (evals, _) = jacobi_eigh(&squeeze.xi);
        let radius = evals.iter().fold(0.0, |acc: f64, &e| acc.max(e.abs()));
        assert!(radius < 1.0, "spectral radius {radius}");
        assert!(schur_residual(&coeffs, &squeeze) < TOL_ID);
        let det_resid = squeeze_determinant_residual(&coeffs, &squeeze).unwrap();
        assert!(det_resid < 1e-8, "det(1 - xi^2) relative residual {det_resid}");
    }

    #[test]
    fn coupling_sign_flip_leaves_observable_blocks_unchanged() {
        let (problem, spectrum) = eight_mode();
        let mut flipped_gamma = problem.gamma.clone();
        flipped_gamma[3] = -flipped_gamma[3];
        let flipped =
            SecularProblem::new(problem.omega_0, problem.omega.clone(), flipped_gamma).unwrap();
        let a = build_coefficients(&problem, &spectrum);
        let b = build_coefficients(&flipped, &solve_spectrum(&flipped).unwrap());
        // Column 4 of M and N flips sign; squared quantities cannot move.
        for beta in 0..a.dim() {
            assert_eq!(a.m.at(beta, 4), -b.m.at(beta, 4));
        }
        let occ = |c: &CoefficientSet, alpha: usize| -> f64 {
            (0..c.dim()).map(|beta| c.n.at(beta, alpha).powi(2)).sum()
        };
        for alpha in 0..a.dim() {
            assert_eq!(occ(&a, alpha), occ(&b, alpha));
        }
        // det M flips sign with the column, the physical norm does not.
        assert_eq!(a.det_m, -b.det_m);
        assert_eq!(a.ground_norm, b.ground_norm);
    }

    #[test]
    fn near_degenerate_denominators_are_flagged() {
        // A nearly decoupled mode parks a normal frequency almost exactly
        // on the bare frequency: the Table denominators degenerate.
        let problem = SecularProblem::new(1.0, vec![2.0, 3.0], vec![1e-9, 0.2]).unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        assert!(
            coeffs.conditioning.iter().any(|&(_, k)| k == 1),
            "expected a conditioning flag for the shy mode, got {:?}",
            coeffs.conditioning
        );
    }

    #[test]
    fn mixed_decoupling_keeps_unit_rows_for_silent_modes() {
        let problem = SecularProblem::new(1.0, vec![2.0, 3.0], vec![0.0, 0.2]).unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        // The silent mode at omega = 2 occupies one spectrum slot with a
        // pure unit row.
        let beta = spectrum.frequencies.iter().position(|&w| w == 2.0).unwrap();
        for a in 0..3 {
            let expect = if a == 1 { 1.0 } else { 0.0 };
            assert_eq!(coeffs.m.at(beta, a), expect);
            assert_eq!(coeffs.n.at(beta, a), 0.0);
        }
        // The suite still passes on the mixed set.
        assert!(check_symplectic(&coeffs).max_residual() < TOL_ID);
    }
}
