//! Dormand-Prince 8(5,3) explicit Runge-Kutta integrator with adaptive steps.

use serde::{Deserialize, Serialize};

const STAGES: usize = 12;

#[allow(clippy::excessive_precision)]
const C: [f64; STAGES] = [
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
];

#[allow(clippy::excessive_precision)]
const A: [[f64; STAGES]; STAGES] = [
    [0.0; STAGES],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402,
        0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671,
        20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193,
        15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0,
    ],
    [
        -0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927,
        -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0,
    ],
    [
        2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188,
        27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636,
        0.0,
    ],
];

#[allow(clippy::excessive_precision)]
const B: [f64; STAGES] = [
    0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585,
    0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259,
];

#[allow(clippy::excessive_precision)]
const E3: [f64; STAGES] = [
    -0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585,
    -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082,
];

#[allow(clippy::excessive_precision)]
const E5: [f64; STAGES] = [
    0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864,
    -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { abs_tol: 1e-9, rel_tol: 1e-9, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("step budget exhausted at t = {0}")]
    TooManySteps(f64),
}

/// Result of a sampled integration. `states[i]` is the state at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// Set when `stop` ended the run before the last sample time.
    pub stopped: bool,
    pub steps: usize,
}

fn rms<const N: usize>(v: &[f64; N]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / N as f64).sqrt()
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[[f64; N]; STAGES], coeff: &[f64; STAGES], upto: usize) -> [f64; N] {
    let mut out = *y;
    for (s, c) in coeff.iter().enumerate().take(upto) {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[s][i];
            }
        }
    }
    out
}

fn is_finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn initial_step<const N: usize, F>(f: &mut F, t0: f64, y0: &[f64; N], f0: &[f64; N], ctl: &StepControl) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let scale: [f64; N] = std::array::from_fn(|i| ctl.abs_tol + y0[i].abs() * ctl.rel_tol);
    let d0 = rms::<N>(&std::array::from_fn(|i| y0[i] / scale[i]));
    let d1 = rms::<N>(&std::array::from_fn(|i| f0[i] / scale[i]));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: [f64; N] = std::array::from_fn(|i| y0[i] + h0 * f0[i]);
    let f1 = f(t0 + h0, &y1);
    let d2 = rms::<N>(&std::array::from_fn(|i| (f1[i] - f0[i]) / scale[i])) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    (100.0 * h0).min(h1)
}

/// Integrate `y' = f(t, y)` from `times[0]`, recording the state at every
/// entry of `times` (ascending). Steps are clipped to land on sample times.
/// `stop` is evaluated at each sample; when it returns true the run ends
/// and that sample is not recorded.
pub fn integrate_sampled<const N: usize, F, S>(
    mut f: F,
    y0: [f64; N],
    times: &[f64],
    ctl: &StepControl,
    stop: S,
) -> Result<Sampled<N>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: Fn(&[f64; N]) -> bool,
{
    let mut out = Sampled { times: Vec::with_capacity(times.len()), states: Vec::with_capacity(times.len()), stopped: false, steps: 0 };
    if times.is_empty() {
        return Ok(out);
    }
    let mut t = times[0];
    let mut y = y0;
    if stop(&y) {
        out.stopped = true;
        return Ok(out);
    }
    out.times.push(t);
    out.states.push(y);

    let mut fy = f(t, &y);
    let mut h_next = initial_step(&mut f, t, &y, &fy, ctl);
    let mut k = [[0.0; N]; STAGES];
    let mut step_rejected = false;

    for &target in &times[1..] {
        while t < target {
            if out.steps >= ctl.max_steps {
                return Err(OdeError::TooManySteps(t));
            }
            let min_step = 10.0 * f64::EPSILON * t.abs().max(1.0);
            if h_next < min_step {
                return Err(OdeError::StepUnderflow(t));
            }
            let clipped = target - t <= h_next;
            let h = if clipped { target - t } else { h_next };

            k[0] = fy;
            for s in 1..STAGES {
                let ys = axpy(&y, h, &k, &A[s], s);
                k[s] = f(t + C[s] * h, &ys);
            }
            let y_new = axpy(&y, h, &k, &B, STAGES);
            let f_new = f(t + h, &y_new);

            let err_norm = if is_finite(&y_new) && is_finite(&f_new) {
                let scale: [f64; N] = std::array::from_fn(|i| ctl.abs_tol + y[i].abs().max(y_new[i].abs()) * ctl.rel_tol);
                let mut e5 = 0.0;
                let mut e3 = 0.0;
                for i in 0..N {
                    let (mut a5, mut a3) = (0.0, 0.0);
                    for s in 0..STAGES {
                        a5 += E5[s] * k[s][i];
                        a3 += E3[s] * k[s][i];
                    }
                    e5 += (a5 / scale[i]).powi(2);
                    e3 += (a3 / scale[i]).powi(2);
                }
                if e5 == 0.0 && e3 == 0.0 {
                    0.0
                } else {
                    h.abs() * e5 / ((e5 + 0.01 * e3) * N as f64).sqrt()
                }
            } else {
                f64::INFINITY
            };

            if err_norm < 1.0 {
                let mut factor = if err_norm == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err_norm.powf(ERROR_EXPONENT)).min(MAX_FACTOR)
                };
                if step_rejected {
                    factor = factor.min(1.0);
                }
                if !clipped || factor < 1.0 {
                    h_next = h * factor;
                }
                step_rejected = false;
                t = if clipped { target } else { t + h };
                y = y_new;
                fy = f_new;
                out.steps += 1;
            } else {
                let factor = if err_norm.is_finite() {
                    (SAFETY * err_norm.powf(ERROR_EXPONENT)).max(MIN_FACTOR)
                } else {
                    MIN_FACTOR
                };
                h_next = h * factor;
                step_rejected = true;
            }
        }
        if stop(&y) {
            out.stopped = true;
            return Ok(out);
        }
        out.times.push(target);
        out.states.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let ctl = StepControl { abs_tol: 1e-12, rel_tol: 1e-12, ..Default::default() };
        let r = integrate_sampled(|_, y: &[f64; 2]| [y[1], -y[0]], [1.0, 0.0], &times, &ctl, |_| false).unwrap();
        for (t, s) in r.times.iter().zip(&r.states) {
            assert!((s[0] - t.cos()).abs() < 1e-10, "{t}");
        }
        assert_eq!(r.times.len(), times.len());
    }

    #[test]
    fn stop_condition() {
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let r = integrate_sampled(|_, _y: &[f64; 1]| [-1.0], [1.0], &times, &StepControl::default(), |y| y[0] < -0.55).unwrap();
        assert!(r.stopped);
        assert_eq!(r.times.len(), 16);
    }
}
