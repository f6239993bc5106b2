//! Adaptive Gauss-Kronrod integration of complex-valued functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Largest phase change allowed across one initial panel.
    pub max_phase_per_panel: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 20_000,
            max_phase_per_panel: FRAC_PI_2,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || self.abs_tol + self.rel_tol == 0.0 {
            return Err(Error::Domain("quadrature tolerances must be >= 0 and not both zero".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        if !(self.max_phase_per_panel > 0.0) {
            return Err(Error::Domain("max_phase_per_panel must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

impl Integral {
    pub fn zero() -> Self {
        Integral { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.lo.total_cmp(&self.lo))
    }
}

fn kronrod21<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for (j, &node) in XGK[..10].iter().enumerate() {
        let dx = half * node;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { lo, hi, value, error }
}

fn split_by_phase<P: Fn(f64) -> f64>(phase: &P, lo: f64, hi: f64, limit: f64, depth: u32, out: &mut Vec<(f64, f64)>) {
    let mid = 0.5 * (lo + hi);
    let (a, m, b) = (phase(lo), phase(mid), phase(hi));
    let swing = (m - a).abs() + (b - m).abs();
    if depth == 0 || !swing.is_finite() || swing <= limit {
        out.push((lo, hi));
        return;
    }
    split_by_phase(phase, lo, mid, limit, depth - 1, out);
    split_by_phase(phase, mid, hi, limit, depth - 1, out);
}

/// Integrate `f` over `[lo, hi]`.
///
/// When `phase` is given, the interval is first cut so that the phase varies
/// by at most `max_phase_per_panel` across each piece.
pub fn integrate<F, P>(f: F, lo: f64, hi: f64, phase: Option<P>, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
    P: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("integration limits must be finite: [{lo}, {hi}]")));
    }
    if hi <= lo {
        return Ok(Integral::zero());
    }

    let mut pieces = Vec::new();
    match phase {
        Some(ph) => split_by_phase(&ph, lo, hi, cfg.max_phase_per_panel, 16, &mut pieces),
        None => pieces.push((lo, hi)),
    }
    if pieces.len() > cfg.max_subdivisions {
        return Err(Error::QuadratureNonConvergence(format!(
            "{} phase panels exceed the subdivision limit {}",
            pieces.len(),
            cfg.max_subdivisions
        )));
    }

    let mut heap: BinaryHeap<Panel> = pieces.iter().map(|&(a, b)| kronrod21(&f, a, b)).collect();
    let mut total: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::QuadratureNonConvergence("integrand produced a non-finite value".into()));
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if error <= target {
            return Ok(finish(heap));
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::QuadratureNonConvergence(format!(
                "error {error:.3e} above target {target:.3e} after {} panels",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // cannot split further; accept what we have
            heap.push(worst);
            return Ok(finish(heap));
        }
        let left = kronrod21(&f, worst.lo, mid);
        let right = kronrod21(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error = (error + left.error + right.error - worst.error).max(0.0);
        heap.push(left);
        heap.push(right);
    }
}

fn finish(heap: BinaryHeap<Panel>) -> Integral {
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Integral {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
        panels: panels.len(),
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let kf = k as f64;
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * kf + 1.0) * z * p1 - kf * p2) / (kf + 1.0);
            }
            deriv = nf * (z * p0 - p1) / (z * z - 1.0);
            let step = p0 / deriv;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
