//! Gaussian wave packets evolved with the semiclassical propagators.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::critical_position;
use crate::error::{require_finite, require_positive, Error, Result};
use crate::quadrature::{integrate, Integral, QuadratureConfig};
use crate::wkb_momentum::{
    action_bounce_p, action_direct_p, momentum_windows, propagator_bounce_p, propagator_direct_p,
};
use crate::wkb_position::{action_bounce_y, action_direct_y, propagator_bounce_y, propagator_direct_y};

/// `psi(y) ~ exp(-(y - center)^2 / spread + i momentum y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub center: f64,
    pub momentum: f64,
    pub spread: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, momentum: f64, spread: f64) -> Result<Self> {
        require_finite("center", center)?;
        require_finite("momentum", momentum)?;
        require_positive("spread", spread)?;
        Ok(GaussianPacket { center, momentum, spread })
    }

    pub fn position_width(&self) -> f64 {
        (0.5 * self.spread).sqrt()
    }

    pub fn momentum_width(&self) -> f64 {
        (2.0 / self.spread).sqrt()
    }

    pub fn psi(&self, y: f64) -> Complex64 {
        let norm = (2.0 / (self.spread * PI)).powf(0.25);
        let d = y - self.center;
        Complex64::from_polar(norm * (-d * d / self.spread).exp(), self.momentum * y)
    }

    /// Momentum amplitude, `(2 pi)^{-1/2} int psi(y) exp(-i p y) dy`.
    pub fn phi(&self, p: f64) -> Complex64 {
        let norm = (self.spread / (2.0 * PI)).powf(0.25);
        let d = p - self.momentum;
        Complex64::from_polar(norm * (-0.25 * self.spread * d * d).exp(), -self.center * d)
    }

    /// Bound on `int |psi|` outside `center +/- k * position_width`.
    fn position_tail(&self, k: f64) -> f64 {
        let norm = (2.0 / (self.spread * PI)).powf(0.25);
        let u = k * self.position_width() / self.spread.sqrt();
        norm * (PI * self.spread).sqrt() * erfc_bound(u)
    }

    /// Bound on `int |phi|` outside `momentum +/- k * momentum_width`.
    fn momentum_tail(&self, k: f64) -> f64 {
        let norm = (self.spread / (2.0 * PI)).powf(0.25);
        let scale = 2.0 / self.spread.sqrt();
        let u = k * self.momentum_width() / scale;
        norm * scale * PI.sqrt() * erfc_bound(u)
    }
}

/// Upper bound on `erfc(u)` for `u > 0`.
fn erfc_bound(u: f64) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    ((-u * u).exp() / (u * PI.sqrt())).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketConfig {
    pub quadrature: QuadratureConfig,
    /// Half-width of the integration window in packet widths.
    pub truncation: f64,
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig { quadrature: QuadratureConfig::default(), truncation: 6.0 }
    }
}

impl PacketConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if !(self.truncation >= 4.0) || !self.truncation.is_finite() {
            return Err(Error::Domain(format!("truncation must be >= 4, got {}", self.truncation)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    Direct,
    Bounce,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationInterval {
    pub lower: f64,
    pub upper: f64,
    pub branch: BranchKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PacketWarning {
    /// Packet centre is not large compared with its spread.
    OutsideSemiclassicalRegime,
}

/// Evolved amplitude at one target point. `total = direct - bounce`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketResult {
    pub direct: Complex64,
    pub bounce: Complex64,
    pub total: Complex64,
    /// Quadrature error plus a bound on the truncated Gaussian tails.
    pub error_estimate: f64,
    pub intervals: Vec<IntegrationInterval>,
    pub warnings: Vec<PacketWarning>,
}

fn warnings_for(packet: &GaussianPacket) -> Vec<PacketWarning> {
    if packet.center < packet.spread {
        vec![PacketWarning::OutsideSemiclassicalRegime]
    } else {
        Vec::new()
    }
}

fn check_target(x: f64, t: f64) -> Result<()> {
    crate::error::require_nonnegative("x", x)?;
    require_positive("t", t)
}

/// Evolve in the position representation, integrating over starting points.
pub fn evolve_position(packet: &GaussianPacket, x: f64, t: f64, cfg: &PacketConfig) -> Result<PacketResult> {
    check_target(x, t)?;
    cfg.validate()?;
    let half = cfg.truncation * packet.position_width();
    let lo = (packet.center - half).max(critical_position(x, t)?).max(0.0);
    let hi = packet.center + half;

    let mut result = PacketResult {
        direct: Complex64::new(0.0, 0.0),
        bounce: Complex64::new(0.0, 0.0),
        total: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        intervals: Vec::new(),
        warnings: warnings_for(packet),
    };

    if hi > lo {
        let kp = packet.momentum;
        let direct = integrate(
            |y| match propagator_direct_y(y, x, t) {
                Ok(u) => u.value * packet.psi(y),
                Err(_) => Complex64::new(0.0, 0.0),
            },
            lo,
            hi,
            Some(|y: f64| action_direct_y(y, x, t).unwrap_or(0.0) + kp * y),
            &cfg.quadrature,
        )?;
        let bounce = integrate(
            |y| match propagator_bounce_y(y, x, t) {
                Ok(u) => u.value * packet.psi(y),
                Err(_) => Complex64::new(0.0, 0.0),
            },
            lo,
            hi,
            Some(|y: f64| action_bounce_y(y, x, t).unwrap_or(0.0) + kp * y),
            &cfg.quadrature,
        )?;
        accumulate(&mut result, direct, bounce, lo, hi, lo, hi);
    }

    // direct and reflected amplitudes are both bounded by (4 pi t)^{-1/2}
    let amp = (4.0 * PI * t).sqrt().recip();
    result.error_estimate += 2.0 * amp * packet.position_tail(cfg.truncation);
    Ok(result)
}

/// Evolve in the momentum representation, integrating over initial momenta.
pub fn evolve_momentum(packet: &GaussianPacket, x: f64, t: f64, cfg: &PacketConfig) -> Result<PacketResult> {
    check_target(x, t)?;
    cfg.validate()?;
    let half = cfg.truncation * packet.momentum_width();
    let (plo, phi) = (packet.momentum - half, packet.momentum + half);

    let mut result = PacketResult {
        direct: Complex64::new(0.0, 0.0),
        bounce: Complex64::new(0.0, 0.0),
        total: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        intervals: Vec::new(),
        warnings: warnings_for(packet),
    };

    let yc = packet.center;
    let windows = momentum_windows(x, t)?;
    for w in &windows {
        let lo = w.lower.max(plo);
        let hi = w.upper.min(phi);
        if hi <= lo {
            continue;
        }
        let direct = if w.direct.is_some() {
            integrate(
                |p| match propagator_direct_p(p, x, t) {
                    Ok(u) => u.value * packet.phi(p),
                    Err(_) => Complex64::new(0.0, 0.0),
                },
                lo,
                hi,
                Some(|p: f64| action_direct_p(p, x, t).unwrap_or(0.0) - yc * p),
                &cfg.quadrature,
            )?
        } else {
            Integral::zero()
        };
        let bounce = if w.bounce {
            integrate(
                |p| match propagator_bounce_p(p, x, t) {
                    Ok(u) => u.value * packet.phi(p),
                    Err(_) => Complex64::new(0.0, 0.0),
                },
                lo,
                hi,
                Some(|p: f64| action_bounce_p(p, x, t).unwrap_or(0.0) - yc * p),
                &cfg.quadrature,
            )?
        } else {
            Integral::zero()
        };
        let (dlo, dhi) = if w.direct.is_some() { (lo, hi) } else { (0.0, 0.0) };
        let (blo, bhi) = if w.bounce { (lo, hi) } else { (0.0, 0.0) };
        accumulate(&mut result, direct, bounce, dlo, dhi, blo, bhi);
    }

    result.error_estimate += 2.0 * crate::wkb_momentum::amplitude_direct_p() * packet.momentum_tail(cfg.truncation);
    Ok(result)
}

fn accumulate(
    result: &mut PacketResult,
    direct: Integral,
    bounce: Integral,
    dlo: f64,
    dhi: f64,
    blo: f64,
    bhi: f64,
) {
    result.direct += direct.value;
    result.bounce += bounce.value;
    result.total = result.direct - result.bounce;
    result.error_estimate += direct.error + bounce.error;
    if dhi > dlo {
        result.intervals.push(IntegrationInterval { lower: dlo, upper: dhi, branch: BranchKind::Direct });
    }
    if bhi > blo {
        result.intervals.push(IntegrationInterval { lower: blo, upper: bhi, branch: BranchKind::Bounce });
    }
}

/// Largest deviation between the closed-form momentum amplitude and a
/// numerical transform of the position amplitude, over a spread of momenta.
pub fn fourier_pair_check(packet: &GaussianPacket, cfg: &PacketConfig) -> Result<f64> {
    cfg.validate()?;
    let half = cfg.truncation * packet.position_width();
    let (lo, hi) = (packet.center - half, packet.center + half);
    let norm = (2.0 * PI).sqrt().recip();
    let mut worst: f64 = 0.0;
    for k in -4..=4 {
        let p = packet.momentum + 0.75 * k as f64 * packet.momentum_width();
        let shift = packet.momentum - p;
        let numeric = integrate(
            |y| packet.psi(y) * Complex64::from_polar(norm, -p * y),
            lo,
            hi,
            Some(|y: f64| shift * y),
            &cfg.quadrature,
        )?;
        worst = worst.max((numeric.value - packet.phi(p)).norm());
    }
    Ok(worst)
}
