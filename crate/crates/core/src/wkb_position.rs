//! Semiclassical propagator between two positions.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::classical::{
    bounce_time_position, classify_position, trajectory_position, ClassifiedPaths, PathClass,
    CRITICAL_TOL,
};
use crate::error::{Error, Result};
use crate::value::{PropagatorValue, Regime};

pub use crate::classical::segment_action as action_segment;

fn quarter_turn() -> Complex64 {
    Complex64::from_polar(1.0, -FRAC_PI_4)
}

fn regime_of(cls: &ClassifiedPaths) -> Regime {
    if cls.is_critical() {
        Regime::Critical
    } else if cls.boundary {
        Regime::Boundary
    } else {
        Regime::Regular
    }
}

fn direct_class(cls: &ClassifiedPaths) -> Option<PathClass> {
    cls.direct().or(cls.is_critical().then_some(PathClass::Critical))
}

/// Action of the unreflected path.
pub fn action_direct_y(y: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_position(y, x, t)?;
    let branch = direct_class(&cls).ok_or(Error::BranchNotAdmissible(PathClass::TypeI))?;
    Ok(trajectory_position(y, x, t, branch)?.action())
}

/// Action of the reflected path.
pub fn action_bounce_y(y: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_position(y, x, t)?;
    let branch = if cls.is_critical() { PathClass::Critical } else { PathClass::Bounce };
    Ok(trajectory_position(y, x, t, branch)?.action())
}

pub fn amplitude_direct_y(t: f64) -> Result<Complex64> {
    crate::error::require_positive("t", t)?;
    Ok(quarter_turn() / (4.0 * PI * t).sqrt())
}

/// Denominator of the reflected amplitude, positive in the allowed region.
fn bounce_jacobian_denominator(b: f64, y: f64, x: f64, t: f64) -> f64 {
    -3.0 * t * b * b + 2.0 * (t * t - x - y) * b + 3.0 * y * t
}

/// Prefactor of the reflected path; exactly zero within tolerance of the critical curve.
pub fn amplitude_bounce_y(y: f64, x: f64, t: f64) -> Result<Complex64> {
    let cls = classify_position(y, x, t)?;
    if cls.is_critical() || cls.critical_distance.abs() <= CRITICAL_TOL {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !cls.has_bounce() {
        return Err(Error::BranchNotAdmissible(PathClass::Bounce));
    }
    let b = bounce_time_position(y, x, t)?;
    if y == 0.0 {
        return amplitude_direct_y(t);
    }
    let density = ((b * b - y) / (2.0 * bounce_jacobian_denominator(b, y, x, t))).abs();
    Ok(quarter_turn() * (density / (2.0 * PI)).sqrt())
}

pub fn propagator_direct_y(y: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    let cls = classify_position(y, x, t)?;
    if cls.is_forbidden() {
        return Ok(PropagatorValue::forbidden());
    }
    let s = action_direct_y(y, x, t)?;
    let a = amplitude_direct_y(t)?;
    Ok(PropagatorValue::new(a * Complex64::from_polar(1.0, s), regime_of(&cls)))
}

pub fn propagator_bounce_y(y: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    let cls = classify_position(y, x, t)?;
    if cls.is_forbidden() {
        return Ok(PropagatorValue::forbidden());
    }
    let s = action_bounce_y(y, x, t)?;
    let a = amplitude_bounce_y(y, x, t)?;
    Ok(PropagatorValue::new(a * Complex64::from_polar(1.0, s), regime_of(&cls)))
}

fn combine(y: f64, x: f64, t: f64, sign: f64) -> Result<PropagatorValue> {
    let direct = propagator_direct_y(y, x, t)?;
    if direct.is_forbidden() {
        return Ok(direct);
    }
    let bounce = propagator_bounce_y(y, x, t)?;
    Ok(PropagatorValue::new(direct.value + sign * bounce.value, direct.regime))
}

/// Propagator with a perfectly reflecting (vanishing) ceiling.
pub fn propagator_dirichlet_y(y: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    combine(y, x, t, -1.0)
}

/// Propagator with vanishing normal derivative at the ceiling.
pub fn propagator_neumann_y(y: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    combine(y, x, t, 1.0)
}
