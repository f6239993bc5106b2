//! Semiclassical propagator from an initial momentum to a final position.
//!
//! The phase is the Lagrangian action of the path plus `p q(0)`, so that
//! its derivative with respect to `p` is the starting position.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{classify_momentum, trajectory_momentum, ClassifiedPaths, PathClass};
use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::value::{PropagatorValue, Regime};

fn regime_of(cls: &ClassifiedPaths) -> Regime {
    if cls.is_critical() {
        Regime::Critical
    } else if cls.is_forbidden() {
        Regime::Forbidden
    } else if cls.boundary {
        Regime::Boundary
    } else {
        Regime::Regular
    }
}

fn generating_phase(p: f64, x: f64, t: f64, branch: PathClass) -> Result<f64> {
    let tr = trajectory_momentum(p, x, t, branch)?;
    Ok(tr.action() + p * tr.initial_position())
}

/// Phase of the unreflected branch, `-t^3/3 - p t (p + t) + x (p + t)`.
pub fn action_direct_p(p: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_momentum(p, x, t)?;
    let branch = match cls.direct() {
        Some(b) => b,
        None if cls.is_critical() => PathClass::Critical,
        None => return Err(Error::BranchNotAdmissible(PathClass::TypeIII)),
    };
    if branch == PathClass::Critical {
        // the grazing path is the limit of the direct family
        return Ok(-t.powi(3) / 3.0 - p * t * (p + t) + x * (p + t));
    }
    generating_phase(p, x, t, branch)
}

/// Phase of the reflected branch, composed segment by segment.
pub fn action_bounce_p(p: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_momentum(p, x, t)?;
    let branch = if cls.is_critical() { PathClass::Critical } else { PathClass::Bounce };
    if !cls.contains(branch) {
        return Err(Error::BranchNotAdmissible(PathClass::Bounce));
    }
    generating_phase(p, x, t, branch)
}

pub fn amplitude_direct_p() -> f64 {
    (2.0 * PI).sqrt().recip()
}

/// Prefactor of the reflected branch; vanishes at the grazing momentum.
pub fn amplitude_bounce_p(p: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_momentum(p, x, t)?;
    if cls.is_critical() {
        return Ok(0.0);
    }
    if !cls.has_bounce() {
        return Err(Error::BranchNotAdmissible(PathClass::Bounce));
    }
    let b = crate::classical::bounce_time_momentum(p, x, t)?;
    let root = ((p + t) * (p + t) + 3.0 * x).sqrt();
    Ok(amplitude_direct_p() * ((p + b).abs() / root).sqrt())
}

pub fn propagator_direct_p(p: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    let cls = classify_momentum(p, x, t)?;
    if cls.direct().is_none() && !cls.is_critical() {
        return Ok(PropagatorValue::forbidden());
    }
    let s = action_direct_p(p, x, t)?;
    Ok(PropagatorValue::new(
        amplitude_direct_p() * Complex64::from_polar(1.0, s),
        regime_of(&cls),
    ))
}

pub fn propagator_bounce_p(p: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    let cls = classify_momentum(p, x, t)?;
    if !cls.has_bounce() && !cls.is_critical() {
        return Ok(PropagatorValue::forbidden());
    }
    let s = action_bounce_p(p, x, t)?;
    let a = amplitude_bounce_p(p, x, t)?;
    Ok(PropagatorValue::new(a * Complex64::from_polar(1.0, s), regime_of(&cls)))
}

/// Reflecting-ceiling propagator: direct minus reflected, over whichever
/// branches exist. Zero and `Forbidden` when neither does.
pub fn propagator_dirichlet_p(p: f64, x: f64, t: f64) -> Result<PropagatorValue> {
    let cls = classify_momentum(p, x, t)?;
    if cls.is_forbidden() {
        return Ok(PropagatorValue::forbidden());
    }
    let mut total = Complex64::new(0.0, 0.0);
    let direct = propagator_direct_p(p, x, t)?;
    if !direct.is_forbidden() {
        total += direct.value;
    }
    let bounce = propagator_bounce_p(p, x, t)?;
    if !bounce.is_forbidden() {
        total -= bounce.value;
    }
    Ok(PropagatorValue::new(total, regime_of(&cls)))
}

/// Which branches are admissible on an open momentum interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumWindow {
    pub lower: f64,
    pub upper: f64,
    pub direct: Option<PathClass>,
    pub bounce: bool,
}

/// Partition of the momentum axis into intervals of constant branch content.
///
/// Intervals with no admissible branch are omitted. Ends may be infinite.
pub fn momentum_windows(x: f64, t: f64) -> Result<Vec<MomentumWindow>> {
    require_nonnegative("x", x)?;
    require_positive("t", t)?;
    let mut cuts = vec![-t, 0.0];
    if x < t * t {
        cuts.push(x.sqrt() - t);
    } else {
        cuts.push((x - t * t) / (2.0 * t));
        cuts.push((t * t - x) / (2.0 * t));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend(cuts);
    edges.push(f64::INFINITY);

    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let probe = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, true) => hi - 1.0,
            (true, false) => lo + 1.0,
            (false, false) => 0.0,
        };
        let cls = classify_momentum(probe, x, t)?;
        let window = MomentumWindow { lower: lo, upper: hi, direct: cls.direct(), bounce: cls.has_bounce() };
        if window.direct.is_some() || window.bounce {
            out.push(window);
        }
    }
    Ok(out)
}
