use serde::{Deserialize, Serialize};

use super::{classify_momentum, classify_position, CRITICAL_TOL};
use crate::error::{Error, Result};

/// Cubic whose middle root is the reflection time for position data.
pub fn bounce_cubic(b: f64, y: f64, x: f64, t: f64) -> f64 {
    ((b - 1.5 * t) * b + 0.5 * (t * t - x - y)) * b + 0.5 * y * t
}

fn bounce_cubic_slope(b: f64, y: f64, x: f64, t: f64) -> f64 {
    (3.0 * b - 3.0 * t) * b + 0.5 * (t * t - x - y)
}

/// Quadratic whose smaller root is the reflection time for momentum data.
pub fn bounce_quadratic(b: f64, p: f64, x: f64, t: f64) -> f64 {
    (3.0 * b - 2.0 * (2.0 * t - p)) * b + t * t - 2.0 * p * t - x
}

/// Trigonometric solution of the reflection-time cubic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicSolution {
    /// `-t^2/12 - (x+y)/6`.
    pub q: f64,
    /// `t (x - y) / 8`.
    pub r: f64,
    /// `r^2 + q^3`; negative means three real roots.
    pub discriminant: f64,
    /// `acos(r / sqrt(-q^3))`, NaN when the discriminant is non-negative.
    pub angle: f64,
    /// Real roots in descending order (NaN entries when fewer exist).
    pub roots: [f64; 3],
    /// Local extrema of the cubic, `t/2 -/+ sqrt(-q)`.
    pub extrema: [f64; 2],
}

pub fn cubic_discriminant(y: f64, x: f64, t: f64) -> Result<CubicSolution> {
    crate::error::require_nonnegative("y", y)?;
    crate::error::require_nonnegative("x", x)?;
    crate::error::require_positive("t", t)?;

    let q = -t * t / 12.0 - (x + y) / 6.0;
    let r = t * (x - y) / 8.0;
    let discriminant = r * r + q * q * q;
    let sq = (-q).sqrt();
    let extrema = [0.5 * t - sq, 0.5 * t + sq];

    let (angle, roots) = if discriminant < 0.0 {
        let angle = (r / (sq * sq * sq)).clamp(-1.0, 1.0).acos();
        let root = |k: f64| 0.5 * t + 2.0 * sq * ((angle + k * std::f64::consts::TAU) / 3.0).cos();
        (angle, [root(0.0), root(2.0), root(1.0)])
    } else {
        let s = discriminant.sqrt();
        let single = 0.5 * t + (r + s).cbrt() + (r - s).cbrt();
        (f64::NAN, [single, f64::NAN, f64::NAN])
    };

    Ok(CubicSolution { q, r, discriminant, angle, roots, extrema })
}

/// Closed form of the middle root.
fn middle_root_closed_form(y: f64, x: f64, t: f64) -> f64 {
    let w = t * t + 2.0 * (x + y);
    let arg = (3.0 * 3f64.sqrt() * t * (y - x) / w.powf(1.5)).clamp(-1.0, 1.0);
    0.5 * t + (w / 3.0).sqrt() * (arg.asin() / 3.0).sin()
}

/// Bracketed Newton refinement of a root of the reflection cubic on `[0, t]`.
fn polish(mut b: f64, y: f64, x: f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, t);
    for _ in 0..100 {
        let f = bounce_cubic(b, y, x, t);
        if f == 0.0 {
            return b;
        }
        // f(0) > 0 and f(t) < 0
        if f > 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let slope = bounce_cubic_slope(b, y, x, t);
        let mut next = b - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - b).abs() <= 4.0 * f64::EPSILON * t.max(1.0) || hi - lo <= f64::EPSILON * t {
            return next;
        }
        b = next;
    }
    b
}

/// Reflection time of the bounce path from position `y` to position `x`.
///
/// On the critical curve this is the grazing time `sqrt(y)`.
pub fn bounce_time_position(y: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_position(y, x, t)?;
    if cls.is_critical() {
        return Ok(y.sqrt());
    }
    if !cls.has_bounce() {
        return Err(Error::NoBouncePath);
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Ok(t);
    }

    let sol = cubic_discriminant(y, x, t)?;
    let scale = t.powi(3).max(1.0);
    let candidate = sol
        .roots
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > 0.0 && *b < t && b * b <= y * (1.0 + 1e-12))
        .min_by(|a, b| {
            let fa = bounce_cubic(*a, y, x, t).abs();
            let fb = bounce_cubic(*b, y, x, t).abs();
            fa.total_cmp(&fb)
        });

    let closed = middle_root_closed_form(y, x, t);
    let seed = match candidate {
        Some(b) => {
            if (b - closed).abs() > 1e-6 * t.max(1.0) {
                return Err(Error::RootSelectionFailure(format!(
                    "filtered root {b} disagrees with closed form {closed}"
                )));
            }
            b
        }
        None if closed > 0.0 && closed < t => closed,
        None => 0.5 * t,
    };

    let b = polish(seed, y, x, t);
    if !(b > 0.0 && b < t) || bounce_cubic(b, y, x, t).abs() > 1e-10 * scale {
        return Err(Error::RootSelectionFailure(format!("no admissible root near {seed}")));
    }
    if b * b > y * (1.0 + CRITICAL_TOL) {
        return Err(Error::RootSelectionFailure(format!(
            "root {b} reaches the ceiling after the start allows (b^2 > y = {y})"
        )));
    }
    Ok(b)
}

/// Reflection time of the bounce path with initial momentum `p` ending at `x`.
pub fn bounce_time_momentum(p: f64, x: f64, t: f64) -> Result<f64> {
    let cls = classify_momentum(p, x, t)?;
    if cls.is_critical() {
        return Ok(-p);
    }
    if !cls.has_bounce() {
        return Err(Error::NoBouncePath);
    }
    let root = ((p + t) * (p + t) + 3.0 * x).sqrt();
    // rationalised form of (2t - p - root) / 3; the denominator is positive here
    let b = (t * t - 2.0 * p * t - x) / (2.0 * t - p + root);
    Ok(b.clamp(0.0, t))
}
