//! Exact quantum mechanics of a bead-on-a-string oscillator bath.
//!
//! The model: a bead of mass `m`, held by a spring of constant `kappa`, is
//! coupled through a second spring `kappa_c` to one end of a taut string of
//! tension `tau`, lineal density `sigma`, and length `ell` (fixed at the far
//! end). Expanding the string in its first `N` transverse modes and
//! quantizing gives a quadratic boson Hamiltonian (hbar = 1 throughout):
//!
//! ```text
//! H = sum_a omega_a a_a^dag a_a - (a_0 + a_0^dag) sum_n gamma_n (a_n + a_n^dag)
//! ```
//!
//! where index 0 is the bead vibration at `omega_0 = sqrt((kappa+kappa_c)/m)`
//! and n = 1..N are string modes. The crate diagonalizes `H` exactly with a
//! multimode Bogoliubov transformation and derives every observable of
//! interest from the coefficient matrices:
//!
//! - [`spectrum`]: the N+1 normal-mode (bogoliubon) frequencies from the
//!   secular equation, with guaranteed bracketing between the bath poles.
//! - [`bogoliubov`]: the coefficient matrices M and N, the symplectic
//!   identity suite, and the squeeze matrix of the ground state.
//! - [`observables`]: ground-state occupations, bead position variance,
//!   displacement relaxation, spectral weight distribution, and the
//!   one-bogoliubon emission spectrum of an injected vibration quantum.
//! - [`decay`]: the quasicontinuum description, resonance shift, and the
//!   closed-form amplitude decay rate, cross-checked by envelope fits of the
//!   discrete dynamics.
//! - [`oracle`]: independent brute-force verifiers (position-space normal
//!   modes, defining linear system, truncated Fock diagonalization) used by
//!   the test suite to certify each analytic formula.
//!
//! The crate is `no_std` (with `alloc`); all floating-point special
//! functions come from `libm`. Everything is deterministic: no randomness,
//! no global state, and results depend only on inputs.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bogoliubov;
pub mod decay;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod rootfind;
pub mod spectrum;

pub use bogoliubov::{
    build_coefficients, check_symplectic, schur_residual, squeeze_determinant_residual,
    squeeze_matrix, CoefficientSet, SqueezeMatrix, SymplecticReport,
};
pub use decay::{decay_rate, envelope_fit, ContinuumBath, DecayReport};
pub use error::{Error, Result};
pub use model::{
    coupling_gammas, coupling_strength, derive_scales, g_infinity, solve_wavenumbers,
    DerivedScales, Dimensionless, PhysicalParams, StringModes,
};
pub use observables::{
    bead_variance, default_time_grid, displacement_trace, emission_spectrum,
    ground_state_report, occupation_numbers, relative_variance, spectral_density,
    EmissionSpectrum, GroundStateReport, SpectralDensity,
};
pub use oracle::{
    fock_ground_state, quadrature_matrix, quadrature_spectrum, verify_coefficient_system,
    FockReport, FockTruncation,
};
pub use spectrum::{solve_spectrum, yurke_check, BogoliubovSpectrum, SecularProblem};
