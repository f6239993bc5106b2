//! Airy functions `Ai`, `Bi` and their derivatives on the real line.
//!
//! Large `|z|` uses the standard asymptotic expansions. In between, values
//! are carried from an anchor by Taylor steps of the Airy equation
//! `w'' = z w`. `Ai` on the positive axis is always carried downward from
//! the asymptotic anchor, the direction in which it grows.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported argument.
pub const AIRY_MIN: f64 = -1e6;
/// Largest supported argument (`Bi` overflows shortly beyond).
pub const AIRY_MAX: f64 = 100.0;

const ASYMPTOTIC: f64 = 9.0;
const SERIES: f64 = 2.0;
const STEP: f64 = 0.5;

#[allow(clippy::excessive_precision)]
const AI0: f64 = 0.355_028_053_887_817_239_260;
#[allow(clippy::excessive_precision)]
const AIP0: f64 = -0.258_819_403_792_806_798_405;
#[allow(clippy::excessive_precision)]
const BI0: f64 = 0.614_926_627_446_000_735_150;
#[allow(clippy::excessive_precision)]
const BIP0: f64 = 0.448_288_357_353_826_357_915;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryPair {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

/// One Taylor step of `w'' = z w` from `z0` to `z0 + h`.
fn taylor_step(z0: f64, w: f64, dw: f64, h: f64) -> (f64, f64) {
    let (mut prev2, mut prev1) = (w, dw);
    let mut value = w + dw * h;
    let mut slope = dw;
    let mut hk = h;
    let mut prev0 = 0.0;
    let mut quiet = 0;
    for k in 2..400 {
        // a_k = (z0 a_{k-2} + a_{k-3}) / (k (k - 1))
        let a = (z0 * prev2 + prev0) / (k as f64 * (k - 1) as f64);
        let dterm = k as f64 * a * hk;
        hk *= h;
        let term = a * hk;
        value += term;
        slope += dterm;
        prev0 = prev2;
        prev2 = prev1;
        prev1 = a;
        // the recurrence has step 3, so wait for several small terms in a row
        let scale = value.abs() + slope.abs() * h.abs() + w.abs();
        if term.abs() <= 1e-18 * scale && dterm.abs() * h.abs() <= 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (value, slope)
}

fn carry(mut z: f64, mut w: f64, mut dw: f64, target: f64) -> (f64, f64) {
    while z != target {
        let h = (target - z).clamp(-STEP, STEP);
        let next = if (target - z).abs() <= STEP { target } else { z + h };
        let (a, b) = taylor_step(z, w, dw, next - z);
        w = a;
        dw = b;
        z = next;
    }
    (w, dw)
}

fn coefficient_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u: f64 = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sums `sum u_k s^k` and `sum v_k s^k`, stopping at the smallest term.
fn asymptotic_sums(s: f64) -> (f64, f64) {
    let (mut su, mut sv) = (0.0, 0.0);
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for &(u, v) in coefficient_table() {
        let mag = (u * pow).abs();
        if mag > last {
            break;
        }
        su += u * pow;
        sv += v * pow;
        if mag < 1e-17 {
            break;
        }
        last = mag;
        pow *= s;
    }
    (su, sv)
}

fn asymptotic_positive(z: f64) -> AiryPair {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let q = z.sqrt().sqrt();
    let (du, dv) = asymptotic_sums(-1.0 / zeta);
    let (gu, gv) = asymptotic_sums(1.0 / zeta);
    let decay = (-zeta).exp() / (2.0 * PI.sqrt());
    let growth = zeta.exp() / PI.sqrt();
    AiryPair {
        ai: decay / q * du,
        ai_prime: -decay * q * dv,
        bi: growth / q * gu,
        bi_prime: growth * q * gv,
    }
}

/// Even/odd split of the oscillatory sums: `sum (-1)^m c_{2m} s^{2m}` and
/// `sum (-1)^m c_{2m+1} s^{2m+1}` for the u and v coefficients.
fn oscillatory_sums(s: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in coefficient_table().iter().enumerate() {
        let mag = u * pow;
        if mag > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        out[k % 2] += sign * mag;
        out[2 + k % 2] += sign * v * pow;
        if mag < 1e-17 {
            break;
        }
        last = mag;
        pow *= s;
    }
    out
}

fn asymptotic_negative(z: f64) -> AiryPair {
    let x = -z;
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let q = x.sqrt().sqrt();
    let [ue, uo, ve, vo] = oscillatory_sums(1.0 / zeta);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let norm = PI.sqrt().recip();
    AiryPair {
        ai: norm / q * (c * ue + s * uo),
        ai_prime: norm * q * (s * ve - c * vo),
        bi: norm / q * (-s * ue + c * uo),
        bi_prime: norm * q * (c * ve + s * vo),
    }
}

fn anchors() -> &'static (AiryPair, AiryPair) {
    static ANCHORS: OnceLock<(AiryPair, AiryPair)> = OnceLock::new();
    ANCHORS.get_or_init(|| (asymptotic_positive(ASYMPTOTIC), asymptotic_negative(-ASYMPTOTIC)))
}

/// `Ai`, `Ai'`, `Bi`, `Bi'` at `z`.
pub fn airy_eval(z: f64) -> Result<AiryPair> {
    if !z.is_finite() || !(AIRY_MIN..=AIRY_MAX).contains(&z) {
        return Err(Error::RangeExceeded(z));
    }
    if z >= ASYMPTOTIC {
        return Ok(asymptotic_positive(z));
    }
    if z <= -ASYMPTOTIC {
        return Ok(asymptotic_negative(z));
    }
    let (pos, neg) = anchors();
    let (ai, ai_prime) = if z > SERIES {
        carry(ASYMPTOTIC, pos.ai, pos.ai_prime, z)
    } else if z < -0.5 * ASYMPTOTIC {
        carry(-ASYMPTOTIC, neg.ai, neg.ai_prime, z)
    } else {
        carry(0.0, AI0, AIP0, z)
    };
    let (bi, bi_prime) = if z < -0.5 * ASYMPTOTIC {
        carry(-ASYMPTOTIC, neg.bi, neg.bi_prime, z)
    } else {
        carry(0.0, BI0, BIP0, z)
    };
    Ok(AiryPair { ai, ai_prime, bi, bi_prime })
}
