//! Semiclassical propagators for a particle in a uniform field below a
//! reflecting ceiling.
//!
//! Units throughout: `hbar = 1`, mass `1/2`, field slope `1`, so the
//! potential is `V(q) = -q` with the ceiling at `q = 0` and the physical
//! region `q >= 0`.

// negated float comparisons reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod ode;
pub mod oracle;
pub mod packets;
pub mod quadrature;
pub mod soft_ceiling;
pub mod value;
pub mod wkb_momentum;
pub mod wkb_position;

pub use error::{Error, Result};
pub use value::{PropagatorValue, Regime};

/// Reduced Planck constant.
pub const HBAR: f64 = 1.0;
/// Particle mass.
pub const MASS: f64 = 0.5;
/// Slope of the linear potential.
pub const FIELD: f64 = 1.0;
