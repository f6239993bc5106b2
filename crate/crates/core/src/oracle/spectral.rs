//! Exact ceiling propagator from its energy eigenfunctions.
//!
//! The eigenfunction vanishing at the ceiling is a combination of
//! `Ai(-(q + E))` and `Bi(-(q + E))`. The energy integral of
//! `psi_E(y) psi_E(x) exp(-i E t)` does not converge absolutely, so it is
//! damped by `exp(-eps E^2)` for a short ladder of regulators and the
//! results are extrapolated to `eps = 0`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::airy::{airy_eval, AIRY_MIN};
use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Explicit regulators, largest first. Overrides the automatic ladder.
    pub regulators: Option<Vec<f64>>,
    pub ladder_length: usize,
    /// Largest automatic regulator is `suppression / energy_scale^2`.
    pub suppression: f64,
    /// The energy range ends where `eps_min E^2` reaches this value.
    pub tail: f64,
    /// Lowest energy is `-(max(x, y) + floor_margin)`.
    pub floor_margin: f64,
    pub nodes_per_panel: usize,
    pub tolerance: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            regulators: None,
            ladder_length: 3,
            suppression: 0.05,
            tail: 40.0,
            floor_margin: 15.0,
            nodes_per_panel: 16,
            tolerance: 1e-3,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = &self.regulators {
            if r.is_empty() || r.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
                return Err(Error::Domain("regulators must be positive and finite".into()));
            }
            if r.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(Error::Domain("regulators must be strictly decreasing".into()));
            }
        } else if self.ladder_length == 0 {
            return Err(Error::Domain("ladder_length must be positive".into()));
        }
        for (name, v) in [("suppression", self.suppression), ("tail", self.tail), ("tolerance", self.tolerance)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.floor_margin >= 0.0 && self.floor_margin.is_finite()) {
            return Err(Error::Domain("floor_margin must be nonnegative".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(Error::Domain("nodes_per_panel must be at least 2".into()));
        }
        Ok(())
    }

    fn ladder(&self, scale: f64) -> Vec<f64> {
        match &self.regulators {
            Some(r) => r.clone(),
            None => {
                let top = self.suppression / (scale * scale);
                (0..self.ladder_length).map(|k| top * 0.5f64.powi(k as i32)).collect()
            }
        }
    }
}

/// Typical energy of the classical paths joining `y` to `x` in time `t`.
pub fn energy_scale(y: f64, x: f64, t: f64) -> f64 {
    let v = (x + y) / (2.0 * t) + 0.5 * t;
    v * v + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegulatedValue {
    pub regulator: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: Complex64,
    /// Gap between the last two extrapolation orders.
    pub error_estimate: f64,
    pub converged: bool,
    pub regulated: Vec<RegulatedValue>,
    pub energy_range: (f64, f64),
    pub nodes: usize,
}

/// Local oscillation rate of the integrand in energy.
fn rate(e: f64, y: f64, x: f64, t: f64) -> f64 {
    let ep = e.max(0.0);
    let s = ep.sqrt();
    t + ((ep + x).sqrt() - s) + ((ep + y).sqrt() - s) + 1.0
}

fn density_product(e: f64, y: f64, x: f64) -> Result<f64> {
    let wall = airy_eval(-e)?;
    let at_x = airy_eval(-(x + e))?;
    let at_y = airy_eval(-(y + e))?;
    let (a, b) = (wall.ai, wall.bi);
    let fx = b * at_x.ai - a * at_x.bi;
    let fy = b * at_y.ai - a * at_y.bi;
    Ok(fx * fy / (a * a + b * b))
}

/// Neville extrapolation of `values[i]` at `nodes[i]` to zero.
fn extrapolate_to_zero(nodes: &[f64], values: &[Complex64]) -> Complex64 {
    let mut p = values.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (a, b) = (nodes[i], nodes[i + m]);
            p[i] = (p[i + 1] * a - p[i] * b) / (a - b);
        }
    }
    p[0]
}

/// Propagator from `y` to `x` in time `t` with a hard ceiling at zero.
pub fn exact_propagator_ceiling(y: f64, x: f64, t: f64, cfg: &SpectralConfig) -> Result<SpectralEstimate> {
    require_nonnegative("y", y)?;
    require_nonnegative("x", x)?;
    require_positive("t", t)?;
    cfg.validate()?;

    let scale = energy_scale(y, x, t);
    let regulators = cfg.ladder(scale);
    let smallest = regulators[regulators.len() - 1];
    let e_lo = -(x.max(y) + cfg.floor_margin);
    let e_hi = (cfg.tail / smallest).sqrt();
    if -(x.max(y) + e_hi) < AIRY_MIN {
        return Err(Error::RangeExceeded(-(x.max(y) + e_hi)));
    }

    let mut edges = vec![e_lo];
    let mut e = e_lo;
    while e < e_hi {
        e = (e + std::f64::consts::PI / rate(e, y, x, t)).min(e_hi);
        edges.push(e);
    }
    let (gx, gw) = gauss_legendre(cfg.nodes_per_panel);

    let panels: Vec<Vec<Complex64>> = edges
        .par_windows(2)
        .map(|w| {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            let mut sums = vec![Complex64::new(0.0, 0.0); regulators.len()];
            for (&u, &wt) in gx.iter().zip(&gw) {
                let en = mid + half * u;
                let base = Complex64::from_polar(half * wt * density_product(en, y, x)?, -en * t);
                for (s, eps) in sums.iter_mut().zip(&regulators) {
                    *s += base * (-eps * en * en).exp();
                }
            }
            Ok(sums)
        })
        .collect::<Result<_>>()?;

    let mut totals = vec![Complex64::new(0.0, 0.0); regulators.len()];
    for p in &panels {
        for (t, v) in totals.iter_mut().zip(p) {
            *t += v;
        }
    }

    let value = extrapolate_to_zero(&regulators, &totals);
    let error_estimate = if totals.len() > 1 {
        (value - extrapolate_to_zero(&regulators[1..], &totals[1..])).norm()
    } else {
        f64::INFINITY
    };
    let converged = error_estimate.is_finite() && error_estimate <= cfg.tolerance;
    Ok(SpectralEstimate {
        value,
        error_estimate,
        converged,
        regulated: regulators.iter().zip(&totals).map(|(&regulator, &value)| RegulatedValue { regulator, value }).collect(),
        energy_range: (e_lo, e_hi),
        nodes: (edges.len() - 1) * cfg.nodes_per_panel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_is_exact_for_polynomials() {
        let nodes = [0.4, 0.2, 0.1];
        let vals: Vec<Complex64> = nodes.iter().map(|&e| Complex64::new(1.0 + 2.0 * e - e * e, 3.0 * e)).collect();
        let v = extrapolate_to_zero(&nodes, &vals);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SpectralConfig { regulators: Some(vec![1e-3, 2e-3]), ..Default::default() };
        assert!(exact_propagator_ceiling(1.0, 1.0, 1.0, &cfg).is_err());
        assert!(exact_propagator_ceiling(1.0, 1.0, 0.0, &SpectralConfig::default()).is_err());
    }
}
