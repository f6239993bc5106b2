//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stdout,
//! bypassing the test harness capture so the verdicts show up in plain
//! `cargo test` output, and then asserts the verdict.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ceiling_core::classical::{
    bounce_cubic, bounce_quadratic, bounce_time_momentum, bounce_time_position, classify_momentum,
    classify_position, cubic_discriminant, trajectory_momentum, trajectory_position, PathClass,
};
use ceiling_core::oracle::{
    exact_propagator_ceiling, free_propagator, image_method_falsifiers, schrodinger_residual,
    shooting_solve_momentum, shooting_solve_position, SpectralConfig,
};
use ceiling_core::packets::{evolve_momentum, evolve_position, GaussianPacket, PacketConfig};
use ceiling_core::soft_ceiling::{detect_envelope, sweep_family, SoftCeilingConfig};
use ceiling_core::wkb_momentum::{
    action_bounce_p, action_direct_p, amplitude_bounce_p, amplitude_direct_p,
};
use ceiling_core::wkb_position::{
    amplitude_bounce_y, amplitude_direct_y, propagator_bounce_y, propagator_direct_y,
};

fn verdict(name: &str, pass: bool, detail: String) {
    let line = format!("acceptance {} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "{name}: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Same classification at the point and at every `+/- margin` offset.
fn stable_position(y: f64, x: f64, t: f64, margin: f64) -> bool {
    let here = classify_position(y, x, t).unwrap();
    if here.is_forbidden() || here.is_critical() || here.boundary {
        return false;
    }
    for (dy, dx, dt) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)] {
        for s in [-margin, margin] {
            let (yy, xx, tt) = (y + s * dy, x + s * dx, t + s * dt);
            if yy < 0.0 || xx < 0.0 || tt <= 0.0 {
                return false;
            }
            let c = classify_position(yy, xx, tt).unwrap();
            if c.branches != here.branches {
                return false;
            }
        }
    }
    true
}

fn stable_momentum(p: f64, x: f64, t: f64, margin: f64) -> bool {
    let here = classify_momentum(p, x, t).unwrap();
    if here.branches.is_empty() || here.is_critical() || here.boundary {
        return false;
    }
    for (dp, dx, dt) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)] {
        for s in [-margin, margin] {
            let (pp, xx, tt) = (p + s * dp, x + s * dx, t + s * dt);
            if xx < 0.0 || tt <= 0.0 {
                return false;
            }
            if classify_momentum(pp, xx, tt).unwrap().branches != here.branches {
                return false;
            }
        }
    }
    true
}

#[test]
fn free_propagator_identity() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for it in 0..10 {
        let t = 0.1 + (5.0 - 0.1) * it as f64 / 9.0;
        for iy in 1..=50 {
            for ix in 1..=50 {
                let (y, x) = (0.4 * iy as f64, 0.4 * ix as f64);
                let u = propagator_direct_y(y, x, t).unwrap();
                if u.is_forbidden() {
                    continue;
                }
                let free = free_propagator(y, x, t).unwrap();
                worst = worst.max((u.value - free).norm() / free.norm());
                count += 1;
            }
        }
    }
    verdict("free-propagator-identity", worst <= 1e-12, format!("max rel err {worst:.3e} over {count} points"));
}

#[test]
fn dirichlet_vanishes_at_ceiling() {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let y: f64 = r.gen_range(0.01..20.0);
        let t: f64 = r.gen_range(0.01..5.0);
        if t >= y.sqrt() {
            continue;
        }
        let d = propagator_direct_y(y, 0.0, t).unwrap().value;
        let b = propagator_bounce_y(y, 0.0, t).unwrap().value;
        worst = worst.max((d - b).norm() / d.norm());
        n += 1;
    }
    verdict("dirichlet-boundary", worst <= 1e-10, format!("max |U_d - U_b| / |U_d| = {worst:.3e} over {n} samples"));
}

#[test]
fn critical_curve_degeneracy() {
    let mut r = rng(2);
    let (mut amp, mut root, mut mom): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let y: f64 = r.gen_range(0.01..16.0);
        let x: f64 = r.gen_range(0.0..16.0);
        let t = x.sqrt() + y.sqrt();
        amp = amp.max(amplitude_bounce_y(y, x, t).unwrap().norm());
        let b = bounce_time_position(y, x, t).unwrap();
        root = root.max((b * b - y).abs());

        // grazing momentum exists when x < t^2
        let p = x.sqrt() - t;
        let bp = bounce_time_momentum(p, x, t).unwrap();
        mom = mom.max((bp + p).abs()).max(amplitude_bounce_p(p, x, t).unwrap());
    }
    let pass = amp <= 1e-8 && root <= 1e-8 && mom <= 1e-10;
    verdict(
        "critical-curve-degeneracy",
        pass,
        format!("max |A_b| {amp:.2e}, max |b^2 - y| {root:.2e}, momentum max(|b + p|, |A|) {mom:.2e}"),
    );
}

#[test]
fn root_residuals() {
    let mut r = rng(3);
    let (mut cubic, mut quad): (f64, f64) = (0.0, 0.0);
    let mut positive_disc = 0;
    let mut n = 0;
    while n < 10_000 {
        let y: f64 = r.gen_range(0.0..25.0);
        let x: f64 = r.gen_range(0.0..25.0);
        let t: f64 = r.gen_range(0.01..10.0);
        if !classify_position(y, x, t).unwrap().has_bounce() {
            continue;
        }
        let b = bounce_time_position(y, x, t).unwrap();
        cubic = cubic.max(bounce_cubic(b, y, x, t).abs() / t.powi(3).max(1.0));
        if cubic_discriminant(y, x, t).unwrap().discriminant >= 0.0 {
            positive_disc += 1;
        }

        let p: f64 = r.gen_range(-10.0..10.0);
        if classify_momentum(p, x, t).unwrap().has_bounce() {
            let bp = bounce_time_momentum(p, x, t).unwrap();
            quad = quad.max(bounce_quadratic(bp, p, x, t).abs() / (t * t).max(1.0));
        }
        n += 1;
    }
    let pass = cubic <= 1e-10 && quad <= 1e-12 && positive_disc == 0;
    verdict(
        "root-residuals",
        pass,
        format!("cubic {cubic:.2e}, quadratic {quad:.2e}, D >= 0 on {positive_disc} of {n}"),
    );
}

fn rel(numeric: f64, analytic: f64) -> f64 {
    (numeric - analytic).abs() / analytic.abs().max(1.0)
}

#[test]
fn generating_function_gradients() {
    const H: f64 = 1e-5;
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let y: f64 = r.gen_range(0.0..10.0);
        let x: f64 = r.gen_range(0.0..10.0);
        let t: f64 = r.gen_range(0.3..5.0);
        if !stable_position(y, x, t, 0.1) {
            continue;
        }
        for &branch in &classify_position(y, x, t).unwrap().branches {
            let s = |yy: f64, xx: f64, tt: f64| trajectory_position(yy, xx, tt, branch).unwrap().action();
            let tr = trajectory_position(y, x, t, branch).unwrap();
            let dx = (s(y, x + H, t) - s(y, x - H, t)) / (2.0 * H);
            let dt = (s(y, x, t + H) - s(y, x, t - H)) / (2.0 * H);
            let dy = (s(y + H, x, t) - s(y - H, x, t)) / (2.0 * H);
            worst = worst
                .max(rel(dx, tr.final_momentum()))
                .max(rel(dt, -tr.energy()))
                .max(rel(dy, -tr.initial_momentum));
        }

        let p: f64 = r.gen_range(-6.0..6.0);
        if stable_momentum(p, x, t, 0.1) {
            for &branch in &classify_momentum(p, x, t).unwrap().branches {
                let s = |pp: f64, xx: f64, tt: f64| {
                    if branch == PathClass::Bounce {
                        action_bounce_p(pp, xx, tt).unwrap()
                    } else {
                        action_direct_p(pp, xx, tt).unwrap()
                    }
                };
                let tr = trajectory_momentum(p, x, t, branch).unwrap();
                let dp = (s(p + H, x, t) - s(p - H, x, t)) / (2.0 * H);
                let dx = (s(p, x + H, t) - s(p, x - H, t)) / (2.0 * H);
                let dt = (s(p, x, t + H) - s(p, x, t - H)) / (2.0 * H);
                worst = worst
                    .max(rel(dp, tr.initial_position()))
                    .max(rel(dx, tr.final_momentum()))
                    .max(rel(dt, -tr.energy()));
            }
        }
        n += 1;
    }
    verdict("generating-function-gradients", worst <= 1e-6, format!("max rel err {worst:.3e} over {n} samples"));
}

fn launch_of(roots: &[ceiling_core::oracle::ShootingRoot], branch: PathClass) -> Option<f64> {
    let mut it = roots.iter().filter(|r| r.branch == branch);
    let first = it.next()?;
    it.next().is_none().then_some(first.launch)
}

#[test]
fn jacobian_amplitude_law() {
    const H: f64 = 1e-5;
    let mut r = rng(5);
    let (mut worst_y, mut worst_p): (f64, f64) = (0.0, 0.0);
    let (mut ny, mut np) = (0, 0);
    while ny < 500 || np < 500 {
        let x: f64 = r.gen_range(0.2..10.0);
        let t: f64 = r.gen_range(0.3..4.0);
        let y: f64 = r.gen_range(0.0..10.0);
        if ny < 500 && stable_position(y, x, t, 0.1) {
            let lo = shooting_solve_position(y, x - H, t, 64).unwrap();
            let hi = shooting_solve_position(y, x + H, t, 64).unwrap();
            for &branch in &classify_position(y, x, t).unwrap().branches {
                let (a, b) = (launch_of(&lo, branch).unwrap(), launch_of(&hi, branch).unwrap());
                let jac = ((b - a) / (2.0 * H)).abs();
                let amp = if branch == PathClass::Bounce {
                    amplitude_bounce_y(y, x, t).unwrap()
                } else {
                    amplitude_direct_y(t).unwrap()
                };
                worst_y = worst_y.max((2.0 * std::f64::consts::PI * amp.norm_sqr() - jac).abs() / jac);
            }
            ny += 1;
        }
        let p: f64 = r.gen_range(-6.0..6.0);
        if np < 500 && stable_momentum(p, x, t, 0.1) {
            let lo = shooting_solve_momentum(p, x - H, t, 64).unwrap();
            let hi = shooting_solve_momentum(p, x + H, t, 64).unwrap();
            for &branch in &classify_momentum(p, x, t).unwrap().branches {
                let (a, b) = (launch_of(&lo, branch).unwrap(), launch_of(&hi, branch).unwrap());
                let jac = ((b - a) / (2.0 * H)).abs();
                let amp = if branch == PathClass::Bounce {
                    amplitude_bounce_p(p, x, t).unwrap()
                } else {
                    amplitude_direct_p()
                };
                worst_p = worst_p.max((2.0 * std::f64::consts::PI * amp * amp - jac).abs() / jac);
            }
            np += 1;
        }
    }
    let pass = worst_y <= 1e-5 && worst_p <= 1e-5;
    verdict(
        "jacobian-amplitude-law",
        pass,
        format!("position {worst_y:.3e} ({ny} samples), momentum {worst_p:.3e} ({np} samples)"),
    );
}

fn slope(hs: &[f64], rs: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[test]
fn residual_hierarchy() {
    let hs = [1e-2, 1e-3, 1e-4];
    let (y, x, t) = (0.5, 1.0, 0.05);
    let direct = |xx: f64, tt: f64| propagator_direct_y(y, xx, tt).ok().map(|u| u.value);
    let free = |xx: f64, tt: f64| free_propagator(y, xx, tt).ok();
    let rd: Vec<f64> = hs.iter().map(|&h| schrodinger_residual(direct, x, t, h).unwrap()).collect();
    let rf: Vec<f64> = hs.iter().map(|&h| schrodinger_residual(free, x, t, h).unwrap()).collect();
    let (sd, sf) = (slope(&hs, &rd), slope(&hs, &rf));

    // away from the critical curve the reflected term leaves a finite residual |A_xx|
    let (yb, xb, tb) = (4.0, 2.0, 1.0);
    let bounce = |xx: f64, tt: f64| propagator_bounce_y(yb, xx, tt).ok().map(|u| u.value);
    let limit = schrodinger_residual(bounce, xb, tb, 1e-4).unwrap();
    let amp = |xx: f64| amplitude_bounce_y(yb, xx, tb).unwrap();
    let hd = 1e-3;
    let axx = ((amp(xb + hd) - 2.0 * amp(xb) + amp(xb - hd)) / (hd * hd)).norm();
    let ratio = limit / axx;

    let pass = (sd - 2.0).abs() <= 0.1 && (sf - 2.0).abs() <= 0.1 && (ratio - 1.0).abs() <= 0.05;
    verdict(
        "residual-hierarchy",
        pass,
        format!("exponents direct {sd:.3} free {sf:.3}; reflected residual {limit:.4e} vs |A_xx| {axx:.4e}"),
    );
}

fn position_mask(y: f64, x: f64, t: f64) -> u8 {
    classify_position(y, x, t).unwrap().branches.iter().fold(0, |m, b| m | bit(*b))
}

fn momentum_mask(p: f64, x: f64, t: f64) -> u8 {
    classify_momentum(p, x, t).unwrap().branches.iter().fold(0, |m, b| m | bit(*b))
}

fn bit(b: PathClass) -> u8 {
    match b {
        PathClass::TypeI => 1,
        PathClass::TypeII => 2,
        PathClass::TypeIII => 4,
        PathClass::Bounce => 8,
        PathClass::Critical => 16,
        PathClass::Forbidden => 0,
    }
}

/// Compare a formula mask against an oracle mask on a 3-d grid, skipping
/// cells next to a classification boundary.
fn grid_disagreements<F, O>(dims: [usize; 3], coord: impl Fn(usize, usize, usize) -> (f64, f64, f64) + Sync, formula: F, oracle: O) -> (usize, usize)
where
    F: Fn(f64, f64, f64) -> u8 + Sync,
    O: Fn(f64, f64, f64) -> u8 + Sync,
{
    let [n0, n1, n2] = dims;
    let idx = |i: usize, j: usize, k: usize| (i * n1 + j) * n2 + k;
    let masks: Vec<u8> = (0..n0 * n1 * n2)
        .into_par_iter()
        .map(|m| {
            let (i, j, k) = (m / (n1 * n2), (m / n2) % n1, m % n2);
            let (a, b, c) = coord(i, j, k);
            formula(a, b, c)
        })
        .collect();
    (0..n0 * n1 * n2)
        .into_par_iter()
        .map(|m| {
            let (i, j, k) = (m / (n1 * n2), (m / n2) % n1, m % n2);
            let here = masks[m];
            let neighbours = [
                (i.wrapping_sub(1), j, k),
                (i + 1, j, k),
                (i, j.wrapping_sub(1), k),
                (i, j + 1, k),
                (i, j, k.wrapping_sub(1)),
                (i, j, k + 1),
            ];
            let near_boundary = neighbours
                .iter()
                .any(|&(a, b, c)| a < n0 && b < n1 && c < n2 && masks[idx(a, b, c)] != here);
            if near_boundary {
                return (0, 0);
            }
            let (a, b, c) = coord(i, j, k);
            (1, usize::from(oracle(a, b, c) != here))
        })
        .reduce(|| (0, 0), |p, q| (p.0 + q.0, p.1 + q.1))
}

#[test]
fn classification_matches_shooting() {
    let step = 0.05;
    let (checked_y, bad_y) = grid_disagreements(
        [120, 120, 120],
        |i, j, k| (step * (i + 1) as f64, step * (j + 1) as f64, step * (k + 1) as f64),
        position_mask,
        |y, x, t| shooting_solve_position(y, x, t, 32).unwrap().iter().fold(0, |m, r| m | bit(r.branch)),
    );
    let (checked_p, bad_p) = grid_disagreements(
        [241, 120, 120],
        |i, j, k| (-6.0 + step * i as f64, step * (j + 1) as f64, step * (k + 1) as f64),
        momentum_mask,
        |p, x, t| shooting_solve_momentum(p, x, t, 32).unwrap().iter().fold(0, |m, r| m | bit(r.branch)),
    );
    verdict(
        "classification-equivalence",
        bad_y == 0 && bad_p == 0,
        format!("position {bad_y} of {checked_y} disagree, momentum {bad_p} of {checked_p} disagree"),
    );
}

fn packet_totals(center: f64) -> (Complex64, Complex64, f64) {
    let packet = GaussianPacket::new(center, -6.0, 2.0).unwrap();
    let cfg = PacketConfig::default();
    let pos = evolve_position(&packet, 4.0, 5.0, &cfg).unwrap();
    let mom = evolve_momentum(&packet, 4.0, 5.0, &cfg).unwrap();
    (pos.total, mom.total, mom.error_estimate)
}

fn packet_agreement(center: f64) {
    let (pos, mom, _) = packet_totals(center);
    let gap = (pos - mom).norm() / pos.norm().max(mom.norm());
    verdict(
        &format!("packet-agreement-center-{center}"),
        gap <= 0.1,
        format!("|position| {:.4e}, |momentum| {:.4e}, relative gap {gap:.3}", pos.norm(), mom.norm()),
    );
}

#[test]
fn packet_agreement_center_11() {
    packet_agreement(11.0);
}

#[test]
fn packet_agreement_center_12() {
    packet_agreement(12.0);
}

#[test]
fn packet_agreement_center_13() {
    packet_agreement(13.0);
}

#[test]
fn packet_agreement_center_14() {
    packet_agreement(14.0);
}

#[test]
fn packet_near_ceiling_contrast() {
    let (pos5, mom5, err5) = packet_totals(5.0);
    let (pos13, _, _) = packet_totals(13.0);
    let pos_ratio = pos5.norm() / pos13.norm();
    let mom_margin = mom5.norm() / err5;
    verdict(
        "packet-near-ceiling-contrast",
        pos_ratio < 0.1 && mom_margin > 10.0,
        format!("position |U(5)|/|U(13)| = {pos_ratio:.3e}; momentum |U(5)| = {:.3e} is {mom_margin:.1}x its error", mom5.norm()),
    );
}

#[test]
fn caustic_convergence() {
    let mut plateaus = Vec::new();
    for n in [6, 30] {
        let family = sweep_family(&SoftCeilingConfig::new(n)).unwrap();
        let curve = detect_envelope(&family).unwrap();
        plateaus.push(curve.plateau(0.0, 1.0).unwrap());
    }
    let (p6, p30) = (plateaus[0], plateaus[1]);
    verdict(
        "caustic-convergence",
        (p30 - 1.0).abs() < (p6 - 1.0).abs(),
        format!("plateau n=6 {p6:.5}, n=30 {p30:.5}"),
    );
}

#[test]
fn image_method_falsified() {
    let f = image_method_falsifiers(4.0, 2.0, 1.0).unwrap();
    let ratio = f.mirrored_residual / f.baseline_residual;
    verdict(
        "image-method-falsifiers",
        f.boundary_mismatch > 1e-2 && ratio > 100.0,
        format!("boundary mismatch {:.3e}, mirrored residual {:.3e} = {ratio:.1}x baseline", f.boundary_mismatch, f.mirrored_residual),
    );
}

#[test]
fn spectral_oracle_against_free() {
    let (y, x, t) = (10.0, 10.0, 0.2);
    let est = exact_propagator_ceiling(y, x, t, &SpectralConfig::default()).unwrap();
    let free = free_propagator(y, x, t).unwrap();
    let gap = (est.value - free).norm();
    let pass = !est.converged || gap <= est.error_estimate;
    verdict(
        "spectral-oracle-vs-free",
        pass,
        format!(
            "exact {:.6}{:+.6}i (err {:.1e}, converged {}), free {:.6}{:+.6}i, gap {gap:.3e}",
            est.value.re, est.value.im, est.error_estimate, est.converged, free.re, free.im
        ),
    );
}

#[test]
fn spectral_oracle_against_semiclassical() {
    let (y, x, t) = (10.0, 10.0, 0.2);
    let est = exact_propagator_ceiling(y, x, t, &SpectralConfig::default()).unwrap();
    let wkb = ceiling_core::wkb_position::propagator_dirichlet_y(y, x, t).unwrap().value;
    let gap = (est.value - wkb).norm();
    verdict(
        "spectral-oracle-vs-semiclassical",
        est.converged && gap <= 1e-3,
        format!("exact {:.6}{:+.6}i, semiclassical {:.6}{:+.6}i, gap {gap:.3e}", est.value.re, est.value.im, wkb.re, wkb.im),
    );
}
