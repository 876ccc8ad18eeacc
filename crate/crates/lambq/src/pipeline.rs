//! Assembly of a full model instance from physical parameters.

use lambq_core::{
    build_coefficients, coupling_gammas, derive_scales, solve_spectrum, solve_wavenumbers,
    BogoliubovSpectrum, CoefficientSet, DerivedScales, PhysicalParams, SecularProblem,
    StringModes,
};

/// A solved instance: parameters, derived scales, string modes, the secular
/// problem, its spectrum, and the Bogoliubov coefficients.
pub struct ModelInstance {
    pub params: PhysicalParams,
    pub scales: DerivedScales,
    pub modes: StringModes,
    pub problem: SecularProblem,
    pub spectrum: BogoliubovSpectrum,
    pub coeffs: CoefficientSet,
}

/// Solve everything for the given parameters. `gamma_scale` multiplies all
/// couplings after they are derived, the knob used to explore the approach
/// to the instability; 1.0 reproduces the physical model.
pub fn assemble(params: PhysicalParams, gamma_scale: f64) -> lambq_core::Result<ModelInstance> {
    let scales = derive_scales(&params)?;
    let modes = solve_wavenumbers(&params)?;
    let mut modes = coupling_gammas(&params, &scales, modes);
    if gamma_scale != 1.0 {
        for gamma in &mut modes.gamma {
            *gamma *= gamma_scale;
        }
    }
    let problem = SecularProblem::from_model(&scales, &modes)?;
    let spectrum = solve_spectrum(&problem)?;
    let coeffs = build_coefficients(&problem, &spectrum);
    Ok(ModelInstance { params, scales, modes, problem, spectrum, coeffs })
}
