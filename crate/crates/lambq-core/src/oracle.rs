//! Brute-force checks of the analytic machinery.
//!
//! Two independent routes verify the Bogoliubov solution. The quadrature
//! route diagonalizes the position-space stiffness matrix, whose eigenvalues
//! are the squared normal frequencies, with plain Jacobi rotations. The Fock
//! route truncates each mode at a fixed occupancy and diagonalizes the full
//! Hamiltonian in the product number basis, knowing nothing about the
//! analytic structure. Both are deliberately simpler and slower than the
//! production code they check, and the coefficient equations are verified
//! term by term as a third, purely algebraic route.

use crate::bogoliubov::CoefficientSet;
use crate::error::{Error, Result};
use crate::linalg::{dot, jacobi_eigh, normalize, tridiag_eigenvector, tridiag_lowest_eigenvalues, tridiagonalize, Mat};
use crate::spectrum::{BogoliubovSpectrum, SecularProblem};
use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;

/// Largest truncated Fock basis the oracle will attempt.
pub const FOCK_DIMENSION_CAP: usize = 100_000;

/// Relative eigenvalue gap below which computed eigenvectors are
/// re-orthogonalized against their cluster before use.
const CLUSTER_GAP: f64 = 1e-8;

/// Per-mode occupancy cap of the truncated Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockTruncation {
    /// Highest phonon number kept in each mode.
    pub cutoff: usize,
}

impl Default for FockTruncation {
    fn default() -> Self {
        FockTruncation { cutoff: 12 }
    }
}

/// Ground-state and one-phonon data from the truncated Fock diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FockReport {
    /// Dimension of the truncated basis, (cutoff + 1)^(S + 1).
    pub dim: usize,
    /// Ground energy measured from the bare vacuum; equals the zero-point
    /// shift (1/2) sum (Omega_alpha - omega_alpha) in the exact model.
    pub ground_energy: f64,
    /// Mean phonon number of each bare mode in the ground state, bead first.
    pub occupations: Vec<f64>,
    /// Bead position variance <u_0^2> in the ground state.
    pub variance_u0: f64,
    /// Excitation energies of the lowest odd-parity eigenstates, one per
    /// mode, ascending; they converge to the normal frequencies.
    pub one_phonon_energies: Vec<f64>,
    /// Squared overlap of each of those eigenstates with the bare state
    /// holding a single bead quantum; converges to the emission weights.
    pub one_phonon_weights: Vec<f64>,
    /// Total squared amplitude the ground state leaks into the odd-parity
    /// sector; the Hamiltonian conserves parity, so this is pure numerical
    /// noise.
    pub parity_defect: f64,
    /// Total squared ground-state amplitude on basis states with any mode at
    /// the occupancy cutoff; large values mean the truncation is too tight.
    pub top_level_weight: f64,
}

/// Stiffness matrix of the position-momentum quadratures: diagonal squared
/// bare frequencies with off-diagonal couplings -2 gamma_q sqrt(omega_0
/// omega_q) in the first row and column. Its eigenvalues are the squared
/// normal frequencies, and a non-positive eigenvalue is the instability.
pub fn quadrature_matrix(problem: &SecularProblem) -> Mat {
    let modes = problem.omega.len();
    let mut k = Mat::zeros(modes + 1, modes + 1);
    *k.at_mut(0, 0) = problem.omega_0 * problem.omega_0;
    for q in 0..modes {
        let w = problem.omega[q];
        *k.at_mut(q + 1, q + 1) = w * w;
        let coupling = -2.0 * problem.gamma[q] * sqrt(problem.omega_0 * w);
        *k.at_mut(0, q + 1) = coupling;
        *k.at_mut(q + 1, 0) = coupling;
    }
    k
}

/// Normal frequencies by brute-force Jacobi diagonalization of the
/// quadrature stiffness matrix, ascending. Fails with `Instability` when
/// the smallest eigenvalue is not strictly positive.
pub fn quadrature_spectrum(problem: &SecularProblem) -> Result<Vec<f64>> {
    let (eigenvalues, _) = jacobi_eigh(&quadrature_matrix(problem));
    if eigenvalues[0] <= 0.0 {
        return Err(Error::Instability { g: problem.coupling_strength() });
    }
    Ok(eigenvalues.iter().map(|&x| sqrt(x)).collect())
}

/// Largest absolute residual of the coefficient equations across all normal
/// modes: each row of (M, N) must satisfy, for every string mode q,
///
/// (Omega_beta - omega_0) M_{beta 0} = sum_q gamma_q (N_{beta q} - M_{beta q})
/// (Omega_beta + omega_0) N_{beta 0} = sum_q gamma_q (N_{beta q} - M_{beta q})
/// (Omega_beta - omega_q) M_{beta q} = gamma_q (N_{beta 0} - M_{beta 0})
/// (Omega_beta + omega_q) N_{beta q} = gamma_q (N_{beta 0} - M_{beta 0})
///
/// which is the eigenvalue problem the closed forms claim to solve.
pub fn verify_coefficient_system(
    problem: &SecularProblem,
    coeffs: &CoefficientSet,
    spectrum: &BogoliubovSpectrum,
) -> f64 {
    let dim = coeffs.dim();
    let modes = problem.omega.len();
    let mut worst = 0.0_f64;
    for beta in 0..dim {
        let big_omega = spectrum.frequencies[beta];
        let m0 = coeffs.m.at(beta, 0);
        let n0 = coeffs.n.at(beta, 0);
        let mut drive = 0.0;
        for q in 0..modes {
            drive += problem.gamma[q] * (coeffs.n.at(beta, q + 1) - coeffs.m.at(beta, q + 1));
        }
        worst = fmax(worst, ((big_omega - problem.omega_0) * m0 - drive).abs());
        worst = fmax(worst, ((big_omega + problem.omega_0) * n0 - drive).abs());
        let back = n0 - m0;
        for q in 0..modes {
            let w = problem.omega[q];
            let g = problem.gamma[q];
            worst = fmax(
                worst,
                ((big_omega - w) * coeffs.m.at(beta, q + 1) - g * back).abs(),
            );
            worst = fmax(
                worst,
                ((big_omega + w) * coeffs.n.at(beta, q + 1) - g * back).abs(),
            );
        }
    }
    worst
}

/// Diagonalize the full Hamiltonian in a truncated product Fock basis and
/// read off the ground state and the lowest one-phonon excitations.
///
/// The basis holds every product state with at most `trunc.cutoff` phonons
/// per mode, the bead index varying slowest. Fails with `DimensionCap` when
/// the basis would exceed `FOCK_DIMENSION_CAP` states. The reported
/// `top_level_weight` tells whether the cutoff was generous enough; cutting
/// the reported quantities off against a rerun at a lower cutoff estimates
/// the truncation error directly.
pub fn fock_ground_state(
    problem: &SecularProblem,
    mass: f64,
    trunc: FockTruncation,
) -> Result<FockReport> {
    let string_modes = problem.omega.len();
    let modes = string_modes + 1;
    let base = trunc.cutoff + 1;
    let mut dim: usize = 1;
    for _ in 0..modes {
        dim = match dim.checked_mul(base) {
            Some(d) if d <= FOCK_DIMENSION_CAP => d,
            _ => return Err(Error::DimensionCap { dim: usize::MAX }),
        };
    }

    // Strides of the mixed-radix state index, bead slowest.
    let mut strides = vec![1usize; modes];
    for j in (0..modes - 1).rev() {
        strides[j] = strides[j + 1] * base;
    }
    let bead_stride = strides[0];

    let frequency = |mode: usize| -> f64 {
        if mode == 0 {
            problem.omega_0
        } else {
            problem.omega[mode - 1]
        }
    };
    let occupancy = |state: usize, mode: usize| -> usize { state / strides[mode] % base };

    let mut h = Mat::zeros(dim, dim);
    for state in 0..dim {
        let mut diagonal = 0.0;
        for mode in 0..modes {
            diagonal += occupancy(state, mode) as f64 * frequency(mode);
        }
        *h.at_mut(state, state) = diagonal;

        let n0 = occupancy(state, 0);
        for q in 0..string_modes {
            let gamma = problem.gamma[q];
            if gamma == 0.0 {
                continue;
            }
            let nq = occupancy(state, q + 1);
            let stride = strides[q + 1];
            // -gamma (a_0 + a_0^dag)(a_q + a_q^dag), one target per branch.
            if n0 > 0 && nq > 0 {
                *h.at_mut(state - bead_stride - stride, state) -=
                    gamma * sqrt((n0 * nq) as f64);
            }
            if n0 > 0 && nq < trunc.cutoff {
                *h.at_mut(state - bead_stride + stride, state) -=
                    gamma * sqrt((n0 * (nq + 1)) as f64);
            }
            if n0 < trunc.cutoff && nq > 0 {
                *h.at_mut(state + bead_stride - stride, state) -=
                    gamma * sqrt(((n0 + 1) * nq) as f64);
            }
            if n0 < trunc.cutoff && nq < trunc.cutoff {
                *h.at_mut(state + bead_stride + stride, state) -=
                    gamma * sqrt(((n0 + 1) * (nq + 1)) as f64);
            }
        }
    }

    let (diag, off, basis) = tridiagonalize(&h);
    let wanted = usize::min(dim, 6 * (modes + 2));
    let eigenvalues = tridiag_lowest_eigenvalues(&diag, &off, wanted);
    let mut scale = 0.0_f64;
    for &lambda in &eigenvalues {
        scale = fmax(scale, lambda.abs());
    }

    // Back-transform the eigenvectors, re-orthogonalizing within clusters of
    // nearly equal eigenvalues where inverse iteration cannot separate them.
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        let partial = tridiag_eigenvector(&diag, &off, lambda);
        let mut full = basis.mul_vec(&partial);
        let mut j = i;
        while j > 0 && (eigenvalues[i] - eigenvalues[j - 1]).abs() <= CLUSTER_GAP * fmax(scale, 1.0)
        {
            j -= 1;
            let overlap = dot(&vectors[j], &full);
            for (slot, &prev) in full.iter_mut().zip(&vectors[j]) {
                *slot -= overlap * prev;
            }
        }
        normalize(&mut full);
        vectors.push(full);
    }

    let parity = |state: usize| -> usize {
        let mut total = 0;
        for mode in 0..modes {
            total += occupancy(state, mode);
        }
        total % 2
    };

    let ground = &vectors[0];
    let ground_energy = eigenvalues[0];
    let mut occupations = vec![0.0; modes];
    let mut parity_defect = 0.0;
    let mut top_level_weight = 0.0;
    for (state, &amp) in ground.iter().enumerate() {
        let weight = amp * amp;
        for mode in 0..modes {
            occupations[mode] += weight * occupancy(state, mode) as f64;
        }
        if parity(state) == 1 {
            parity_defect += weight;
        }
        if (0..modes).any(|mode| occupancy(state, mode) == trunc.cutoff) {
            top_level_weight += weight;
        }
    }

    // <u_0^2> = |(a_0 + a_0^dag)|ground>|^2 / (2 m omega_0).
    let mut displaced = vec![0.0; dim];
    for (state, &amp) in ground.iter().enumerate() {
        let n0 = occupancy(state, 0);
        if n0 > 0 {
            displaced[state - bead_stride] += amp * sqrt(n0 as f64);
        }
        if n0 < trunc.cutoff {
            displaced[state + bead_stride] += amp * sqrt((n0 + 1) as f64);
        }
    }
    let variance_u0 = dot(&displaced, &displaced) / (2.0 * mass * problem.omega_0);

    // The lowest odd-parity eigenstates are the one-phonon levels; their
    // amplitude on |1, 0, ..., 0> gives the emission weights.
    let mut one_phonon_energies = Vec::with_capacity(modes);
    let mut one_phonon_weights = Vec::with_capacity(modes);
    for (i, vector) in vectors.iter().enumerate().skip(1) {
        let mut odd_weight = 0.0;
        for (state, &amp) in vector.iter().enumerate() {
            if parity(state) == 1 {
                odd_weight += amp * amp;
            }
        }
        if odd_weight > 0.5 {
            one_phonon_energies.push(eigenvalues[i] - ground_energy);
            let amp = vector[bead_stride];
            one_phonon_weights.push(amp * amp);
            if one_phonon_energies.len() == modes {
                break;
            }
        }
    }
    if one_phonon_energies.len() < modes {
        return Err(Error::Domain(
            "eigenpair budget ended before every one-phonon level was found",
        ));
    }

    Ok(FockReport {
        dim,
        ground_energy,
        occupations,
        variance_u0,
        one_phonon_energies,
        one_phonon_weights,
        parity_defect,
        top_level_weight,
    })
}

fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::build_coefficients;
    use crate::observables::{bead_variance, emission_spectrum, occupation_numbers};
    use crate::spectrum::solve_spectrum;

    fn single_mode_problem() -> SecularProblem {
        SecularProblem::new(1.0, vec![1.3], vec![0.12]).unwrap()
    }

    #[test]
    fn quadrature_route_reproduces_the_secular_spectrum() {
        let problem = SecularProblem::new(
            1.0,
            vec![0.6, 1.1, 1.45, 2.0, 2.6, 3.05, 3.5, 4.2],
            vec![0.11, 0.14, 0.09, 0.12, 0.08, 0.07, 0.1, 0.06],
        )
        .unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        let brute = quadrature_spectrum(&problem).unwrap();
        for (have, want) in brute.iter().zip(&spectrum.frequencies) {
            assert!(
                (have - want).abs() < 1e-10 * want,
                "quadrature {have} vs secular {want}"
            );
        }
    }

    #[test]
    fn quadrature_route_flags_the_instability() {
        // Strong single coupling: g = 4 gamma^2 / (omega_0 omega_1) > 1.
        let problem = SecularProblem::new(1.0, vec![1.0], vec![0.6]).unwrap();
        match quadrature_spectrum(&problem) {
            Err(Error::Instability { g }) => assert!(g > 1.0),
            other => panic!("expected instability, got {other:?}"),
        }
        let (eigenvalues, _) = jacobi_eigh(&quadrature_matrix(&problem));
        assert!(eigenvalues[0] < 0.0);
    }

    #[test]
    fn coefficient_equations_hold_on_a_frozen_instance() {
        let problem = SecularProblem::new(
            1.0,
            vec![1.1366740124406898, 2.4652967809284134],
            vec![0.14126708548272007, 0.13275193357213916],
        )
        .unwrap();
        let spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        let residual = verify_coefficient_system(&problem, &coeffs, &spectrum);
        assert!(residual < 1e-11, "residual {residual}");
    }

    #[test]
    fn coefficient_equations_reject_a_perturbed_spectrum() {
        let problem = single_mode_problem();
        let mut spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        spectrum.frequencies[0] *= 1.0 + 1e-6;
        let residual = verify_coefficient_system(&problem, &coeffs, &spectrum);
        assert!(residual > 1e-8, "perturbation went unnoticed: {residual}");
    }

    #[test]
    fn fock_route_confirms_the_analytic_ground_state() {
        let problem = single_mode_problem();
        let spectrum = solve_spectrum(&problem).unwrap();
        let coeffs = build_coefficients(&problem, &spectrum);
        let report = fock_ground_state(&problem, 1.0, FockTruncation::default()).unwrap();

        assert_eq!(report.dim, 169);
        let shift = 0.5
            * (spectrum.frequencies.iter().sum::<f64>()
                - problem.omega_0
                - problem.omega.iter().sum::<f64>());
        assert!((report.ground_energy - shift).abs() < 1e-10);
        assert!((report.ground_energy - -0.006349328858368364).abs() < 1e-12);

        let occ = occupation_numbers(&coeffs);
        for (fock, analytic) in report.occupations.iter().zip(&occ) {
            assert!((fock - analytic).abs() < 1e-10);
        }
        let (variance, _) = bead_variance(&coeffs, &spectrum, 1.0, problem.omega_0);
        assert!((report.variance_u0 - variance).abs() < 1e-10);
        assert!((report.variance_u0 - 0.5092887778078766).abs() < 1e-12);

        let emission = emission_spectrum(&coeffs).unwrap();
        for ((fock, analytic), (gap, frequency)) in report
            .one_phonon_weights
            .iter()
            .zip(&emission.p1)
            .zip(report.one_phonon_energies.iter().zip(&spectrum.frequencies))
        {
            assert!((fock - analytic).abs() < 1e-9, "weights {fock} vs {analytic}");
            assert!((gap - frequency).abs() < 1e-9, "gaps {gap} vs {frequency}");
        }

        assert!(report.parity_defect < 1e-10);
        assert!(report.top_level_weight < 1e-8);
    }

    #[test]
    fn fock_report_converges_as_the_cutoff_grows() {
        let problem = single_mode_problem();
        let coarse = fock_ground_state(&problem, 1.0, FockTruncation { cutoff: 6 }).unwrap();
        let fine = fock_ground_state(&problem, 1.0, FockTruncation { cutoff: 8 }).unwrap();
        assert!((coarse.ground_energy - fine.ground_energy).abs() < 1e-8);
        assert!((coarse.variance_u0 - fine.variance_u0).abs() < 1e-8);
        assert!(fine.top_level_weight < coarse.top_level_weight || coarse.top_level_weight == 0.0);
    }

    #[test]
    fn fock_route_rejects_an_oversized_basis() {
        let problem = SecularProblem::new(
            1.0,
            vec![1.1, 1.2, 1.3, 1.4, 1.5],
            vec![0.01, 0.01, 0.01, 0.01, 0.01],
        )
        .unwrap();
        match fock_ground_state(&problem, 1.0, FockTruncation::default()) {
            Err(Error::DimensionCap { .. }) => {}
            other => panic!("expected DimensionCap, got {other:?}"),
        }
    }

    #[test]
    fn decoupled_fock_ground_state_is_the_bare_vacuum() {
        let problem = SecularProblem::new(1.0, vec![2.0], vec![0.0]).unwrap();
        let report = fock_ground_state(&problem, 1.0, FockTruncation { cutoff: 5 }).unwrap();
        assert!(report.ground_energy.abs() < 1e-12);
        assert!(report.occupations[0].abs() < 1e-20);
        assert!(report.occupations[1].abs() < 1e-20);
        assert!((report.variance_u0 - 0.5).abs() < 1e-12);
        assert!((report.one_phonon_energies[0] - 1.0).abs() < 1e-10);
        assert!((report.one_phonon_energies[1] - 2.0).abs() < 1e-10);
        assert!((report.one_phonon_weights[0] - 1.0).abs() < 1e-10);
        assert!(report.one_phonon_weights[1].abs() < 1e-12);
    }
}
