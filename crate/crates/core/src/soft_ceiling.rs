//! Classical trajectories under a steep but smooth ceiling, and the fold
//! (caustic) of a launched family.
//!
//! Geometry here is flipped relative to the rest of the crate: the particle
//! starts at `x = 0`, is pulled back by a unit force, and meets the ceiling
//! potential `x^n` near `x = 1`. With `H = p^2 + x + x^n` the equations are
//! `x' = 2 p`, `p' = -(1 + n x^(n-1))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::critical_position;
use crate::error::{Error, Result};
use crate::ode::{integrate_sampled, OdeError, StepControl};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftCeilingConfig {
    /// Even exponent of the ceiling potential.
    pub exponent: u32,
    pub launch_momenta: Vec<f64>,
    pub duration: f64,
    pub sample_step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Trajectories are cut once they fall below this position.
    pub floor: Option<f64>,
}

/// `count` evenly spaced launch momenta `max * k / count`, `k = 1..=count`.
pub fn launch_grid(count: usize, max: f64) -> Vec<f64> {
    (1..=count).map(|k| max * k as f64 / count as f64).collect()
}

impl SoftCeilingConfig {
    pub fn new(exponent: u32) -> Self {
        SoftCeilingConfig {
            exponent,
            launch_momenta: launch_grid(60, 2.0),
            duration: 3.0,
            sample_step: 0.005,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            floor: Some(-0.99),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponent < 2 || !self.exponent.is_multiple_of(2) {
            return Err(Error::Domain(format!("exponent must be even and >= 2, got {}", self.exponent)));
        }
        if self.launch_momenta.len() < 3 {
            return Err(Error::Domain("need at least three launch momenta".into()));
        }
        if self.launch_momenta.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("launch momenta must be strictly increasing".into()));
        }
        if self.launch_momenta.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("launch momenta must be finite".into()));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Domain("duration must be positive".into()));
        }
        if !(self.sample_step > 0.0 && self.sample_step <= self.duration) {
            return Err(Error::Domain("sample_step must be in (0, duration]".into()));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let n = (self.duration / self.sample_step).round() as usize;
        (0..=n).map(|i| (i as f64 * self.sample_step).min(self.duration)).collect()
    }
}

pub fn soft_energy(x: f64, p: f64, exponent: u32) -> f64 {
    p * p + x + x.powi(exponent as i32)
}

fn force(x: f64, exponent: u32) -> f64 {
    -(1.0 + exponent as f64 * x.powi(exponent as i32 - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledTrajectory {
    pub launch_momentum: f64,
    /// Positions at the family's sample times; shorter when truncated.
    pub positions: Vec<f64>,
    pub momenta: Vec<f64>,
    pub truncated: bool,
    /// Largest `|H - H0| / max(1, |H0|)` over the samples.
    pub energy_drift: f64,
}

fn step_failure(index: usize, e: OdeError) -> Error {
    Error::StepFailure { index, reason: e.to_string() }
}

fn integrate_one(index: usize, launch_momentum: f64, cfg: &SoftCeilingConfig, times: &[f64]) -> Result<SampledTrajectory> {
    let n = cfg.exponent;
    let ctl = StepControl { abs_tol: cfg.abs_tol, rel_tol: cfg.rel_tol, ..Default::default() };
    let floor = cfg.floor.unwrap_or(f64::NEG_INFINITY);
    let run = integrate_sampled(
        |_, s: &[f64; 2]| [2.0 * s[1], force(s[0], n)],
        [0.0, launch_momentum],
        times,
        &ctl,
        |s| s[0] < floor,
    )
    .map_err(|e| step_failure(index, e))?;

    let h0 = soft_energy(0.0, launch_momentum, n);
    let drift = run
        .states
        .iter()
        .map(|s| (soft_energy(s[0], s[1], n) - h0).abs() / h0.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(SampledTrajectory {
        launch_momentum,
        positions: run.states.iter().map(|s| s[0]).collect(),
        momenta: run.states.iter().map(|s| s[1]).collect(),
        truncated: run.stopped,
        energy_drift: drift,
    })
}

/// Integrate one trajectory launched from `x = 0` with momentum `launch_momentum`.
pub fn integrate_soft(launch_momentum: f64, cfg: &SoftCeilingConfig) -> Result<SampledTrajectory> {
    cfg.validate()?;
    crate::error::require_finite("launch_momentum", launch_momentum)?;
    integrate_one(0, launch_momentum, cfg, &cfg.sample_times())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFamily {
    pub exponent: u32,
    pub times: Vec<f64>,
    pub trajectories: Vec<SampledTrajectory>,
    /// Indices `k` where trajectory `k` overtakes the more energetic `k + 1`
    /// while both are still rising, which a correct integration never does.
    pub overtaking: Vec<usize>,
}

impl TrajectoryFamily {
    /// Position of trajectory `k` at sample `j`, if it has not been truncated.
    pub fn position(&self, k: usize, j: usize) -> Option<f64> {
        self.trajectories.get(k)?.positions.get(j).copied()
    }
}

pub fn sweep_family(cfg: &SoftCeilingConfig) -> Result<TrajectoryFamily> {
    cfg.validate()?;
    let times = cfg.sample_times();
    let trajectories = cfg
        .launch_momenta
        .par_iter()
        .enumerate()
        .map(|(i, &p0)| integrate_one(i, p0, cfg, &times))
        .collect::<Result<Vec<_>>>()?;

    let mut overtaking = Vec::new();
    for k in 0..trajectories.len() - 1 {
        let (lo, hi) = (&trajectories[k], &trajectories[k + 1]);
        let n = lo.positions.len().min(hi.positions.len());
        let bad = (1..n).any(|j| lo.momenta[j] > 0.0 && hi.momenta[j] > 0.0 && lo.positions[j] > hi.positions[j] + 1e-12);
        if bad {
            overtaking.push(k);
        }
    }
    Ok(TrajectoryFamily { exponent: cfg.exponent, times, trajectories, overtaking })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub time: f64,
    pub position: f64,
    /// Launch momentum at the fold, interpolated between neighbours.
    pub launch_momentum: f64,
    /// Index `k` of the middle trajectory in the bracketing triple.
    pub pair_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausticCurve {
    pub exponent: u32,
    pub points: Vec<EnvelopePoint>,
}

impl CausticCurve {
    /// Highest envelope position with time in `[t_lo, t_hi]`.
    pub fn plateau(&self, t_lo: f64, t_hi: f64) -> Option<f64> {
        self.points
            .iter()
            .filter(|p| p.time >= t_lo && p.time <= t_hi)
            .map(|p| p.position)
            .reduce(f64::max)
    }

    /// Largest distance from `reference(t)` over envelope points in `[t_lo, t_hi]`.
    /// Only the outermost point at each time is considered.
    pub fn distance_to<F: Fn(f64) -> f64>(&self, reference: F, t_lo: f64, t_hi: f64) -> Option<f64> {
        self.outermost()
            .into_iter()
            .filter(|p| p.time >= t_lo && p.time <= t_hi)
            .map(|p| (p.position - reference(p.time)).abs())
            .reduce(f64::max)
    }

    /// The envelope point of largest position at each sample time.
    pub fn outermost(&self) -> Vec<EnvelopePoint> {
        let mut out: Vec<EnvelopePoint> = Vec::new();
        for p in &self.points {
            match out.last_mut() {
                Some(last) if last.time == p.time => {
                    if p.position > last.position {
                        *last = *p;
                    }
                }
                _ => out.push(*p),
            }
        }
        out
    }
}

/// Locate zeros of `dx/dp0` across the family at every sample time.
///
/// A fold sits where consecutive differences `x_{k+1} - x_k` change sign
/// from positive to non-positive; its position is the vertex of the
/// parabola through the three bracketing trajectories.
pub fn detect_envelope(family: &TrajectoryFamily) -> Result<CausticCurve> {
    let mut points = Vec::new();
    let n = family.trajectories.len();
    for (j, &time) in family.times.iter().enumerate() {
        for k in 1..n.saturating_sub(1) {
            let (Some(a), Some(b), Some(c)) =
                (family.position(k - 1, j), family.position(k, j), family.position(k + 1, j))
            else {
                continue;
            };
            let (d1, d2) = (b - a, c - b);
            if !(d1 > 0.0 && d2 <= 0.0) {
                continue;
            }
            let p = [
                family.trajectories[k - 1].launch_momentum,
                family.trajectories[k].launch_momentum,
                family.trajectories[k + 1].launch_momentum,
            ];
            let (s1, s2) = (d1 / (p[1] - p[0]), d2 / (p[2] - p[1]));
            let (m1, m2) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]));
            let curvature = (s2 - s1) / (m2 - m1);
            let (launch, position) = if curvature < 0.0 {
                let pv = m1 - s1 / curvature;
                let rise = s1 * (pv - p[1]) + 0.5 * curvature * ((pv - m1).powi(2) - (p[1] - m1).powi(2));
                (pv, b + rise)
            } else {
                (p[1], b)
            };
            points.push(EnvelopePoint { time, position, launch_momentum: launch, pair_index: k });
        }
    }
    if points.is_empty() {
        return Err(Error::EnvelopeNotFound);
    }
    Ok(CausticCurve { exponent: family.exponent, points })
}

/// Fold of the hard-wall problem in these coordinates: the wall itself
/// until the grazing path touches it at `t = 1`, then that path's descent.
pub fn hard_wall_envelope(t: f64) -> Result<f64> {
    Ok(1.0 - critical_position(1.0, t)?)
}
