use crate::classical::PathClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("no bounce path reaches the target")]
    NoBouncePath,
    #[error("bounce-time root selection failed: {0}")]
    RootSelectionFailure(String),
    #[error("branch {0:?} is not admissible here")]
    BranchNotAdmissible(PathClass),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("integration of trajectory {index} failed: {reason}")]
    StepFailure { index: usize, reason: String },
    #[error("no sign change of dx/dp0 found in the family")]
    EnvelopeNotFound,
    #[error("argument {0} is outside the supported range")]
    RangeExceeded(f64),
    #[error("finite-difference stencil leaves the admissible domain")]
    StencilOutOfDomain,
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootSelectionFailure(_)
                | Error::QuadratureNonConvergence(_)
                | Error::StepFailure { .. }
                | Error::EnvelopeNotFound
                | Error::RangeExceeded(_)
        )
    }
}

pub(crate) fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}

pub(crate) fn require_nonnegative(name: &str, v: f64) -> Result<()> {
    require_finite(name, v)?;
    if v < 0.0 {
        return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
    }
    Ok(())
}

pub(crate) fn require_positive(name: &str, v: f64) -> Result<()> {
    require_finite(name, v)?;
    if v <= 0.0 {
        return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}
