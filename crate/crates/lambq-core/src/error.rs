//! Error type shared by every module of the crate.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building or solving the model.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter failed validation; carries a message naming
    /// the offending field.
    InvalidParameter(&'static str),
    /// The coupling strength reached or exceeded the stability bound g = 1,
    /// where the quadratic Hamiltonian stops being positive definite.
    Instability {
        /// The offending coupling strength.
        g: f64,
    },
    /// A root bracket did not contain a sign change; indicates a bracketing
    /// bug rather than bad user input.
    BracketFailure {
        /// Index of the bracket that failed.
        index: usize,
    },
    /// A secular-function evaluation was requested too close to a bath pole.
    PoleProximity {
        /// Index of the nearest pole.
        pole: usize,
    },
    /// The coefficient matrix M could not be factorized; the parameters sit
    /// at or beyond the instability where the transformation degenerates.
    SingularMatrix,
    /// An input lay outside a function's mathematical domain.
    Domain(&'static str),
    /// The quasicontinuum resonance equation x = g(x) had no root below the
    /// band edge.
    ResonanceNotFound,
    /// A truncated Fock computation would exceed the dimension cap.
    DimensionCap {
        /// The requested basis dimension.
        dim: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(message) => {
                write!(f, "invalid parameter: {message}")
            }
            Error::Instability { g } => write!(
                f,
                "unstable parameters: coupling strength g = {g} >= 1, the Hamiltonian is no longer positive definite"
            ),
            Error::BracketFailure { index } => {
                write!(f, "internal error: no sign change in root bracket {index}")
            }
            Error::PoleProximity { pole } => {
                write!(f, "evaluation point too close to bath pole {pole}")
            }
            Error::SingularMatrix => write!(f, "coefficient matrix M is numerically singular"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::ResonanceNotFound => {
                write!(f, "no resonance: x = g(x) has no root inside the band")
            }
            Error::DimensionCap { dim } => {
                write!(f, "Fock basis dimension {dim} exceeds the cap of 100000")
            }
        }
    }
}

impl core::error::Error for Error {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_names_the_field() {
        let msg = alloc::format!("{}", Error::InvalidParameter("tau"));
        assert!(msg.contains("tau"));
    }

    #[test]
    fn instability_reports_g() {
        let msg = alloc::format!("{}", Error::Instability { g: 1.25 });
        assert!(msg.contains("1.25"));
    }
}
