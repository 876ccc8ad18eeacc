//! Randomized invariant checks across the stable parameter region.
//!
//! Every draw builds a full model instance from dimensionless inputs and
//! checks the structural invariants that must hold for any stable set:
//! bracketed wavenumbers, interlaced spectra, symplectic coefficients, and
//! normalized spectral weights. The input region keeps the coupling bounded
//! away from the instability, so every draw must succeed outright.

use lambq_core::{
    build_coefficients, check_symplectic, coupling_gammas, derive_scales, emission_spectrum,
    occupation_numbers, quadrature_spectrum, solve_spectrum, solve_wavenumbers, spectral_density,
    squeeze_matrix, verify_coefficient_system, BogoliubovSpectrum, CoefficientSet, Dimensionless,
    SecularProblem,
};
use proptest::prelude::*;

const TOL_ID: f64 = 1e-10;

fn assemble(
    r: f64,
    y: f64,
    n_modes: usize,
    length_per_mode: f64,
) -> (SecularProblem, BogoliubovSpectrum, CoefficientSet, f64) {
    let big_l = n_modes as f64 * length_per_mode;
    let params = Dimensionless { r, y, n_modes, big_l }.to_params().unwrap();
    let scales = derive_scales(&params).unwrap();
    let modes = solve_wavenumbers(&params).unwrap();
    let modes = coupling_gammas(&params, &scales, modes);
    let problem = SecularProblem::from_model(&scales, &modes).unwrap();
    let spectrum = solve_spectrum(&problem).unwrap();
    let coeffs = build_coefficients(&problem, &spectrum);
    (problem, spectrum, coeffs, params.ell)
}

fn draw() -> impl Strategy<Value = (f64, f64, usize, f64)> {
    (0.15..0.85f64, 0.1..4.0f64, 3usize..24, 0.8..4.0f64)
}

proptest! {
    #[test]
    fn wavenumbers_stay_bracketed_and_ordered((r, y, n, u) in draw()) {
        let big_l = n as f64 * u;
        let params = Dimensionless { r, y, n_modes: n, big_l }.to_params().unwrap();
        let modes = solve_wavenumbers(&params).unwrap();
        let pi = std::f64::consts::PI;
        for (i, &k) in modes.k.iter().enumerate() {
            let index = (i + 1) as f64;
            prop_assert!(k > (index - 0.5) * pi / params.ell);
            prop_assert!(k < index * pi / params.ell);
            if i > 0 {
                prop_assert!(k > modes.k[i - 1]);
            }
        }
    }

    #[test]
    fn spectrum_interlaces_the_string_frequencies((r, y, n, u) in draw()) {
        let (problem, spectrum, _, _) = assemble(r, y, n, u);
        let big = &spectrum.frequencies;
        prop_assert_eq!(big.len(), problem.omega.len() + 1);
        prop_assert!(big[0] > 0.0);
        prop_assert!(big[0] < problem.omega[0]);
        for (q, &w) in problem.omega.iter().enumerate() {
            prop_assert!(big[q] < w && w < big[q + 1], "interlacing broken at {}", q);
        }
    }

    #[test]
    fn coefficients_stay_symplectic((r, y, n, u) in draw()) {
        let (_, _, coeffs, _) = assemble(r, y, n, u);
        let report = check_symplectic(&coeffs);
        prop_assert!(
            report.max_residual() < TOL_ID,
            "worst identity {:?}",
            report.worst()
        );
        let squeeze = squeeze_matrix(&coeffs).unwrap();
        prop_assert!(squeeze.symmetry_residual() < TOL_ID);
    }

    #[test]
    fn coefficient_equations_hold_on_every_row((r, y, n, u) in draw()) {
        let (problem, spectrum, coeffs, _) = assemble(r, y, n, u);
        let residual = verify_coefficient_system(&problem, &coeffs, &spectrum);
        prop_assert!(residual < 1e-9, "system residual {}", residual);
    }

    #[test]
    fn quadrature_route_matches_the_secular_route((r, y, n, u) in draw()) {
        let (problem, spectrum, _, _) = assemble(r, y, n, u);
        let brute = quadrature_spectrum(&problem).unwrap();
        for (have, want) in brute.iter().zip(&spectrum.frequencies) {
            prop_assert!((have - want).abs() < 1e-10 * want);
        }
    }

    #[test]
    fn spectral_weights_form_a_distribution((r, y, n, u) in draw()) {
        let (_, spectrum, coeffs, _) = assemble(r, y, n, u);
        let density = spectral_density(&coeffs, &spectrum);
        let mut sum = 0.0;
        for &weight in &density.rho {
            prop_assert!(weight > 0.0);
            sum += weight;
        }
        prop_assert!((sum - 1.0).abs() < TOL_ID);
    }

    #[test]
    fn ground_state_is_occupied_but_emission_stays_subnormalized((r, y, n, u) in draw()) {
        let (_, _, coeffs, _) = assemble(r, y, n, u);
        for occupation in occupation_numbers(&coeffs) {
            prop_assert!(occupation >= 0.0);
        }
        let emission = emission_spectrum(&coeffs).unwrap();
        for &weight in &emission.p1 {
            prop_assert!(weight >= 0.0);
        }
        prop_assert!(emission.total_p1 > 0.0);
        prop_assert!(emission.total_p1 <= 1.0 + TOL_ID);
    }
}
