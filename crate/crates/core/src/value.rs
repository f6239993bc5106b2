use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Where a propagator value sits relative to the classical structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Regular,
    /// On a closed endpoint of a classification interval.
    Boundary,
    /// Within tolerance of the critical (fold) set.
    Critical,
    /// No classical path; the value is zero by convention.
    Forbidden,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorValue {
    pub value: Complex64,
    pub regime: Regime,
}

impl PropagatorValue {
    pub fn new(value: Complex64, regime: Regime) -> Self {
        Self { value, regime }
    }

    pub fn forbidden() -> Self {
        Self { value: Complex64::new(0.0, 0.0), regime: Regime::Forbidden }
    }

    pub fn is_forbidden(&self) -> bool {
        self.regime == Regime::Forbidden
    }
}
