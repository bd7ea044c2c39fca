use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every operator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller combined incompatible values (e.g. jets at different base points).
    #[error("usage error: {0}")]
    Usage(String),

    /// A parameter or evaluation point lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A derivative or denominator vanished, or a branch cut was hit.
    #[error("singular evaluation at {z}: {reason}")]
    Singular { z: Complex64, reason: String },

    /// The dilatation reached the unit circle, so the map is not sense-preserving there.
    #[error("sense-preservation lost at {z}: |omega| = {modulus}")]
    SensePreservation { z: Complex64, modulus: f64 },

    /// An iterative numerical procedure did not converge.
    #[error("numeric failure at {z}: {reason}")]
    Numeric { z: Complex64, reason: String },
}

impl Error {
    pub(crate) fn singular(z: Complex64, reason: impl Into<String>) -> Self {
        Error::Singular {
            z,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
