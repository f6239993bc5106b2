use serde::{Deserialize, Serialize};

use super::{
    bounce_time_momentum, bounce_time_position, classify_momentum, classify_position, PathClass,
};
use crate::error::{require_finite, Error, Result};

/// One free parabolic arc: `q(s) = start_position + 2 start_momentum s + s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start_time: f64,
    pub end_time: f64,
    pub start_position: f64,
    pub start_momentum: f64,
}

impl Segment {
    /// Arc joining `(q0, t0)` to `(q1, t1)`; requires `t1 > t0`.
    pub fn through(q0: f64, t0: f64, q1: f64, t1: f64) -> Self {
        let dt = t1 - t0;
        Segment {
            start_time: t0,
            end_time: t1,
            start_position: q0,
            start_momentum: 0.5 * ((q1 - q0) / dt - dt),
        }
    }

    pub fn duration(&self) -> f64 {
        self.end_time - self.start_time
    }

    pub fn position(&self, time: f64) -> f64 {
        let s = time - self.start_time;
        self.start_position + (2.0 * self.start_momentum + s) * s
    }

    pub fn momentum(&self, time: f64) -> f64 {
        self.start_momentum + (time - self.start_time)
    }

    pub fn energy(&self) -> f64 {
        self.start_momentum * self.start_momentum - self.start_position
    }

    /// Smallest position reached on the arc.
    pub fn min_position(&self) -> f64 {
        let turn = -self.start_momentum;
        let end = self.position(self.end_time);
        if turn > 0.0 && turn < self.duration() {
            (self.start_position - self.start_momentum * self.start_momentum).min(end)
        } else {
            self.start_position.min(end)
        }
    }

    pub fn action(&self) -> f64 {
        let dt = self.duration();
        let p = self.start_momentum;
        dt * (p * p + self.start_position) + 2.0 * p * dt * dt + 2.0 / 3.0 * dt * dt * dt
    }
}

/// Lagrangian action of the free arc from `(q0, t0)` to `(q1, t1)`.
///
/// A zero-length arc contributes nothing.
pub fn segment_action(q0: f64, t0: f64, q1: f64, t1: f64) -> Result<f64> {
    for (name, v) in [("q0", q0), ("t0", t0), ("q1", q1), ("t1", t1)] {
        require_finite(name, v)?;
    }
    if t1 < t0 {
        return Err(Error::Domain(format!("segment ends before it starts: {t0} > {t1}")));
    }
    if t1 == t0 {
        return Ok(0.0);
    }
    let dt = t1 - t0;
    let c = (q1 - q0) / dt - dt;
    Ok(2.0 / 3.0 * dt * dt * dt + dt * dt * c + dt * (0.25 * c * c + q0))
}

/// A classical path made of one or two arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub branch: PathClass,
    pub segments: Vec<Segment>,
    pub bounce_time: Option<f64>,
    pub initial_momentum: f64,
}

impl Trajectory {
    fn segment_at(&self, time: f64) -> &Segment {
        self.segments
            .iter()
            .find(|s| time <= s.end_time)
            .unwrap_or_else(|| self.segments.last().expect("trajectory has a segment"))
    }

    pub fn position(&self, time: f64) -> f64 {
        self.segment_at(time).position(time)
    }

    /// Momentum at `time`; at the reflection instant this is the incoming value.
    pub fn momentum(&self, time: f64) -> f64 {
        if time <= 0.0 {
            return self.initial_momentum;
        }
        self.segment_at(time).momentum(time)
    }

    pub fn initial_position(&self) -> f64 {
        self.segments[0].start_position
    }

    pub fn final_position(&self) -> f64 {
        let last = self.segments.last().expect("trajectory has a segment");
        last.position(last.end_time)
    }

    pub fn final_momentum(&self) -> f64 {
        let last = self.segments.last().expect("trajectory has a segment");
        last.momentum(last.end_time)
    }

    pub fn energy(&self) -> f64 {
        self.segments[0].energy()
    }

    pub fn min_position(&self) -> f64 {
        self.segments.iter().map(Segment::min_position).fold(f64::INFINITY, f64::min)
    }

    /// Lagrangian action `int (p^2 + q) dt` along the path.
    pub fn action(&self) -> f64 {
        self.segments.iter().map(Segment::action).sum()
    }
}

fn reflected_pair(first: Option<Segment>, second: Option<Segment>) -> Vec<Segment> {
    first.into_iter().chain(second).collect()
}

/// Path from `y` to `x` in time `t` on the requested branch.
pub fn trajectory_position(y: f64, x: f64, t: f64, branch: PathClass) -> Result<Trajectory> {
    let cls = classify_position(y, x, t)?;
    if branch == PathClass::Forbidden || !cls.contains(branch) {
        return Err(Error::BranchNotAdmissible(branch));
    }
    if branch.is_direct() {
        let seg = Segment::through(y, 0.0, x, t);
        return Ok(Trajectory {
            branch,
            initial_momentum: seg.start_momentum,
            segments: vec![seg],
            bounce_time: None,
        });
    }

    let b = bounce_time_position(y, x, t)?;
    let first = (b > 0.0).then(|| Segment::through(y, 0.0, 0.0, b));
    let second = (b < t).then(|| Segment::through(0.0, b, x, t));
    let initial_momentum = match (&first, &second) {
        (Some(s), _) => s.start_momentum,
        (None, Some(s)) => -s.start_momentum,
        (None, None) => 0.0,
    };
    Ok(Trajectory {
        branch,
        segments: reflected_pair(first, second),
        bounce_time: Some(b),
        initial_momentum,
    })
}

/// Path with initial momentum `p` reaching `x` at time `t` on the requested branch.
pub fn trajectory_momentum(p: f64, x: f64, t: f64, branch: PathClass) -> Result<Trajectory> {
    let cls = classify_momentum(p, x, t)?;
    if branch == PathClass::Forbidden || !cls.contains(branch) {
        return Err(Error::BranchNotAdmissible(branch));
    }
    if branch.is_direct() {
        let seg = Segment {
            start_time: 0.0,
            end_time: t,
            start_position: x - t * t - 2.0 * p * t,
            start_momentum: p,
        };
        return Ok(Trajectory { branch, segments: vec![seg], bounce_time: None, initial_momentum: p });
    }

    let b = bounce_time_momentum(p, x, t)?;
    let first = (b > 0.0).then_some(Segment {
        start_time: 0.0,
        end_time: b,
        start_position: -b * (b + 2.0 * p),
        start_momentum: p,
    });
    let second = (b < t).then_some(Segment {
        start_time: b,
        end_time: t,
        start_position: 0.0,
        start_momentum: -(p + b),
    });
    Ok(Trajectory {
        branch,
        segments: reflected_pair(first, second),
        bounce_time: Some(b),
        initial_momentum: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounce_reflects_momentum_and_keeps_energy() {
        let tr = trajectory_position(3.0, 2.0, 1.5, PathClass::Bounce).unwrap();
        let b = tr.bounce_time.unwrap();
        let (s1, s2) = (tr.segments[0], tr.segments[1]);
        assert!(s1.position(b).abs() < 1e-13);
        assert!((s1.momentum(b) + s2.momentum(b)).abs() < 1e-12);
        assert!((s1.energy() - s2.energy()).abs() < 1e-12);
        assert!((tr.final_position() - 2.0).abs() < 1e-12);
        assert!(tr.min_position() > -1e-12);
    }

    #[test]
    fn momentum_paths_hit_target() {
        for (p, branch) in [(-3.0, PathClass::TypeII), (-3.0, PathClass::Bounce), (-1.5, PathClass::TypeIII)] {
            let tr = trajectory_momentum(p, 1.0, 2.0, branch).unwrap();
            assert!((tr.final_position() - 1.0).abs() < 1e-12);
            assert!(tr.min_position() > -1e-12);
            assert_eq!(tr.initial_momentum, p);
        }
    }

    #[test]
    fn segment_action_matches_arc() {
        let seg = Segment::through(1.0, 0.5, 3.0, 2.0);
        let direct = segment_action(1.0, 0.5, 3.0, 2.0).unwrap();
        assert!((seg.action() - direct).abs() < 1e-13);
        assert_eq!(segment_action(0.0, 1.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(segment_action(0.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn forbidden_branch_rejected() {
        assert_eq!(
            trajectory_position(1.0, 1.0, 3.0, PathClass::TypeI),
            Err(Error::BranchNotAdmissible(PathClass::TypeI))
        );
        assert!(trajectory_position(1.0, 4.0, 1.0, PathClass::TypeII).is_err());
    }
}
