//! Brute-force root finding on the exact launch-to-arrival map.

use serde::{Deserialize, Serialize};

use crate::classical::{PathClass, Segment};
use crate::error::{require_finite, require_nonnegative, require_positive, Error, Result};

/// Outcome of launching from `start_position` with `start_momentum` for time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Launch {
    pub final_position: f64,
    pub reflected: bool,
}

/// Follow the free parabola, reflecting once if it would cross the ceiling.
pub fn propagate_launch(start_position: f64, start_momentum: f64, t: f64) -> Launch {
    let free = Segment { start_time: 0.0, end_time: t, start_position, start_momentum };
    if free.min_position() >= 0.0 {
        return Launch { final_position: free.position(t), reflected: false };
    }
    let speed = (start_momentum * start_momentum - start_position).max(0.0).sqrt();
    let hit = -start_momentum - speed;
    let after = Segment { start_time: hit, end_time: t, start_position: 0.0, start_momentum: speed };
    Launch { final_position: after.position(t), reflected: true }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingRoot {
    /// Launch momentum (position data) or launch position (momentum data).
    pub launch: f64,
    pub branch: PathClass,
}

fn direct_branch(start_momentum: f64, t: f64) -> PathClass {
    let turn = -start_momentum;
    if turn <= 0.0 {
        PathClass::TypeI
    } else if turn >= t {
        PathClass::TypeII
    } else {
        PathClass::TypeIII
    }
}

/// Full-precision bisection of `g` on `[a, b]` with a sign change.
fn bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return if ga.abs() <= g(b).abs() { a } else { b };
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
}

/// Locate the switch between direct and reflected launches inside `[a, b]`.
fn bisect_status<S: Fn(f64) -> bool>(reflected: &S, mut a: f64, mut b: f64) -> f64 {
    let ra = reflected(a);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return m;
        }
        if reflected(m) == ra {
            a = m;
        } else {
            b = m;
        }
    }
}

/// Scan `[lo, hi]` with `resolution` cells, split at every direct/reflected
/// switch, and bisect each sign change of `launch(s).final_position - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Arrival {
    Direct,
    Reflected,
    Grazing,
}

fn scan<L: Fn(f64) -> Launch>(launch: &L, x: f64, lo: f64, hi: f64, resolution: usize) -> Vec<(f64, Arrival)> {
    let reflected = |s: f64| launch(s).reflected;
    let mut points: Vec<f64> = (0..=resolution).map(|i| lo + (hi - lo) * i as f64 / resolution as f64).collect();
    let mut kinks = Vec::new();
    for w in points.windows(2) {
        if reflected(w[0]) != reflected(w[1]) {
            kinks.push(bisect_status(&reflected, w[0], w[1]));
        }
    }
    points.extend(kinks.iter().copied());
    points.sort_by(f64::total_cmp);
    points.dedup();

    let g = |s: f64| launch(s).final_position - x;
    let arrival = |s: f64| if reflected(s) { Arrival::Reflected } else { Arrival::Direct };
    let mut roots: Vec<(f64, Arrival)> = Vec::new();
    // a grazing arrival touches x without a sign change
    for &k in &kinks {
        if g(k).abs() <= 1e-12 * x.abs().max(1.0) {
            roots.push((k, Arrival::Grazing));
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        let (ga, gb) = (g(w[0]), g(w[1]));
        if ga == 0.0 && i == 0 {
            roots.push((w[0], arrival(w[0])));
        }
        if gb == 0.0 {
            roots.push((w[1], arrival(w[1])));
        } else if ga != 0.0 && (ga > 0.0) != (gb > 0.0) {
            let r = bisect(&g, w[0], w[1]);
            roots.push((r, arrival(r)));
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots
}

/// Merge roots that coincide to within `tol` into one grazing root.
fn label(roots: Vec<(f64, Arrival)>, tol: f64, direct: impl Fn(f64) -> PathClass) -> Vec<ShootingRoot> {
    let mut out: Vec<ShootingRoot> = Vec::new();
    for (s, kind) in roots {
        if let Some(last) = out.last_mut() {
            if (s - last.launch).abs() <= tol {
                last.branch = PathClass::Critical;
                continue;
            }
        }
        let branch = match kind {
            Arrival::Reflected => PathClass::Bounce,
            Arrival::Direct => direct(s),
            Arrival::Grazing => PathClass::Critical,
        };
        out.push(ShootingRoot { launch: s, branch });
    }
    out
}

/// Launch momenta from position `y` that arrive at `x` after time `t`.
pub fn shooting_solve_position(y: f64, x: f64, t: f64, resolution: usize) -> Result<Vec<ShootingRoot>> {
    require_nonnegative("y", y)?;
    require_nonnegative("x", x)?;
    require_positive("t", t)?;
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    let reach = (x + y) / t + 2.0 * t + 1.0;
    let launch = |p0: f64| propagate_launch(y, p0, t);
    let roots = scan(&launch, x, -reach, reach, resolution);
    Ok(label(roots, 1e-9 * reach, |p0| direct_branch(p0, t)))
}

/// Launch positions for initial momentum `p` that arrive at `x` after time `t`.
pub fn shooting_solve_momentum(p: f64, x: f64, t: f64, resolution: usize) -> Result<Vec<ShootingRoot>> {
    require_finite("p", p)?;
    require_nonnegative("x", x)?;
    require_positive("t", t)?;
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    let reach = x + 2.0 * p.abs() * t + p * p + t * t + 1.0;
    let launch = |y0: f64| propagate_launch(y0, p, t);
    let roots = scan(&launch, x, 0.0, reach, resolution);
    Ok(label(roots, 1e-9 * reach, |_| direct_branch(p, t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_roots_below_critical_time() {
        let roots = shooting_solve_position(1.0, 4.0, 1.0, 200).unwrap();
        let branches: Vec<_> = roots.iter().map(|r| r.branch).collect();
        assert_eq!(branches, vec![PathClass::Bounce, PathClass::TypeI]);
    }

    #[test]
    fn forbidden_has_none() {
        assert!(shooting_solve_position(1.0, 1.0, 3.0, 200).unwrap().is_empty());
    }

    #[test]
    fn grazing_is_single_root() {
        let roots = shooting_solve_position(1.0, 1.0, 2.0, 200).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].branch, PathClass::Critical);
    }

    #[test]
    fn momentum_roots() {
        let roots = shooting_solve_momentum(-3.0, 1.0, 2.0, 200).unwrap();
        let branches: Vec<_> = roots.iter().map(|r| r.branch).collect();
        assert_eq!(branches, vec![PathClass::Bounce, PathClass::TypeII]);
    }
}
