//! Classical paths of `H = p^2 - q` below a reflecting ceiling at `q = 0`.
//!
//! A free segment is a parabola `q(s) = q0 + 2 p0 s + s^2`, `p(s) = p0 + s`
//! with `s` the time since the segment started. A reflected path is two
//! segments joined at the ceiling with the momentum flipped.

mod cubic;
mod trajectory;

pub use cubic::{
    bounce_cubic, bounce_quadratic, bounce_time_momentum, bounce_time_position, cubic_discriminant,
    CubicSolution,
};
pub use trajectory::{segment_action, trajectory_momentum, trajectory_position, Segment, Trajectory};

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_nonnegative, require_positive, Result};

/// Distance from the critical set below which a point is reported as critical.
pub const CRITICAL_TOL: f64 = 1e-8;

const BOUNDARY_TOL: f64 = 1e-12;

/// Branch label of a classical path.
///
/// `TypeI` moves away from the ceiling throughout, `TypeII` moves toward it
/// throughout, `TypeIII` turns around in between. `Bounce` reflects once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathClass {
    TypeI,
    TypeII,
    TypeIII,
    Bounce,
    Critical,
    Forbidden,
}

impl PathClass {
    pub fn is_direct(self) -> bool {
        matches!(self, PathClass::TypeI | PathClass::TypeII | PathClass::TypeIII)
    }
}

/// Admissible branches at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPaths {
    pub branches: Vec<PathClass>,
    /// Set when the point lies on a closed end of a classification interval.
    pub boundary: bool,
    /// Signed distance to the critical set; positive on the forbidden side.
    /// `+inf` when no critical point exists for these parameters.
    pub critical_distance: f64,
}

impl ClassifiedPaths {
    pub fn contains(&self, class: PathClass) -> bool {
        self.branches.contains(&class)
    }

    pub fn direct(&self) -> Option<PathClass> {
        self.branches.iter().copied().find(|c| c.is_direct())
    }

    pub fn has_bounce(&self) -> bool {
        self.contains(PathClass::Bounce)
    }

    pub fn is_critical(&self) -> bool {
        self.contains(PathClass::Critical)
    }

    /// No classical path at all.
    pub fn is_forbidden(&self) -> bool {
        self.branches.is_empty() || self.contains(PathClass::Forbidden)
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Time at which the unreflected parabola from `y` to `x` reaches its turning point.
pub fn turning_time(y: f64, x: f64, t: f64) -> f64 {
    0.5 * ((y - x) / t + t)
}

/// Classify paths from position `y` to position `x` in time `t`.
pub fn classify_position(y: f64, x: f64, t: f64) -> Result<ClassifiedPaths> {
    require_nonnegative("y", y)?;
    require_nonnegative("x", x)?;
    require_positive("t", t)?;

    let gap = t - (x.sqrt() + y.sqrt());
    if gap.abs() <= CRITICAL_TOL {
        return Ok(ClassifiedPaths {
            branches: vec![PathClass::Critical],
            boundary: true,
            critical_distance: gap,
        });
    }
    if gap > 0.0 {
        return Ok(ClassifiedPaths {
            branches: vec![PathClass::Forbidden],
            boundary: false,
            critical_distance: gap,
        });
    }

    let turn = turning_time(y, x, t);
    let direct = if turn <= 0.0 {
        PathClass::TypeI
    } else if turn >= t {
        PathClass::TypeII
    } else {
        PathClass::TypeIII
    };
    let boundary = near(turn, 0.0) || near(turn, t) || y == 0.0 || x == 0.0;
    Ok(ClassifiedPaths {
        branches: vec![direct, PathClass::Bounce],
        boundary,
        critical_distance: gap,
    })
}

/// Largest initial momentum (exclusive) that still yields a reflected path.
fn bounce_momentum_limit(x: f64, t: f64) -> f64 {
    if x < t * t {
        x.sqrt() - t
    } else {
        (t * t - x) / (2.0 * t)
    }
}

/// Classify paths with initial momentum `p` reaching position `x` at time `t`.
///
/// The result may be empty: some momenta cannot reach `x` at all.
pub fn classify_momentum(p: f64, x: f64, t: f64) -> Result<ClassifiedPaths> {
    require_finite("p", p)?;
    require_nonnegative("x", x)?;
    require_positive("t", t)?;

    let grazing = x.sqrt() - t;
    let critical_distance = if x < t * t { p - grazing } else { f64::INFINITY };
    if critical_distance.abs() <= CRITICAL_TOL {
        return Ok(ClassifiedPaths {
            branches: vec![PathClass::Critical],
            boundary: true,
            critical_distance,
        });
    }

    let mut branches = Vec::with_capacity(2);
    let mut boundary = x == 0.0;

    let start = x - t * t - 2.0 * p * t;
    if p > 0.0 {
        if start >= 0.0 {
            branches.push(PathClass::TypeI);
            boundary |= near(start, 0.0);
        }
    } else if p == 0.0 {
        if x >= t * t {
            branches.push(PathClass::TypeI);
            boundary = true;
        }
    } else if p <= -t {
        branches.push(PathClass::TypeII);
        boundary |= near(p, -t);
    } else if p <= grazing {
        branches.push(PathClass::TypeIII);
        boundary |= near(p, grazing);
    }

    let limit = bounce_momentum_limit(x, t);
    if p < limit || (x >= t * t && p == limit) {
        branches.push(PathClass::Bounce);
        boundary |= near(p, limit);
    }

    Ok(ClassifiedPaths { branches, boundary, critical_distance })
}

/// Starting position on the critical curve for target `(x, t)`.
///
/// Every `y` above this value is reachable; zero when `t < sqrt(x)`.
pub fn critical_position(x: f64, t: f64) -> Result<f64> {
    require_nonnegative("x", x)?;
    require_positive("t", t)?;
    let r = x.sqrt();
    Ok(if t >= r { (t - r) * (t - r) } else { 0.0 })
}
