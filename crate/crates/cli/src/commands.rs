//! One function per subcommand, each returning the tables it emits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ceiling_core::classical::{
    bounce_time_momentum, bounce_time_position, classify_momentum, classify_position, ClassifiedPaths,
};
use ceiling_core::oracle::{free_propagator, image_method_falsifiers, schrodinger_residual};
use ceiling_core::packets::{evolve_momentum, evolve_position, GaussianPacket, PacketConfig};
use ceiling_core::quadrature::QuadratureConfig;
use ceiling_core::soft_ceiling::{
    detect_envelope, hard_wall_envelope, launch_grid, sweep_family, SoftCeilingConfig,
};
use ceiling_core::wkb_momentum::{propagator_bounce_p, propagator_direct_p, propagator_dirichlet_p};
use ceiling_core::wkb_position::{
    propagator_bounce_y, propagator_direct_y, propagator_dirichlet_y, propagator_neumann_y,
};
use ceiling_core::PropagatorValue;

use crate::config::{
    CausticSweepConfig, GridConfig, PacketEvolveConfig, PacketSweep, Representation, ResidualCheckConfig,
    RunConfig,
};
use crate::error::{CliError, CliResult};
use crate::output::{complex, float, optional, Table};

pub fn execute(config: &RunConfig) -> CliResult<Vec<Table>> {
    let tables = match config {
        RunConfig::Classify(c) => vec![classify(c)?],
        RunConfig::Propagate(c) => vec![propagate(c)?],
        RunConfig::PacketEvolve(c) => vec![packet_evolve(c)?],
        RunConfig::CausticSweep(c) => caustic_sweep(c)?,
        RunConfig::ResidualCheck(c) => residual_check(c)?,
    };
    let version = env!("CARGO_PKG_VERSION");
    Ok(tables
        .into_iter()
        .map(|t| {
            let mut meta = vec![("command".to_string(), config.command().to_string()), ("version".to_string(), version.to_string())];
            meta.extend(t.metadata);
            Table { metadata: meta, ..t }
        })
        .collect())
}

fn start_label(r: Representation) -> &'static str {
    match r {
        Representation::Position => "y",
        Representation::Momentum => "p",
    }
}

fn rep_name(r: Representation) -> &'static str {
    match r {
        Representation::Position => "position",
        Representation::Momentum => "momentum",
    }
}

fn branch_names(cls: &ClassifiedPaths) -> String {
    cls.branches.iter().map(|b| format!("{b:?}")).collect::<Vec<_>>().join("+")
}

pub fn classify(cfg: &GridConfig) -> CliResult<Table> {
    let points = cfg.points()?;
    let rep = cfg.representation;
    let rows = points
        .par_iter()
        .map(|&(s, x, t)| -> CliResult<Vec<String>> {
            let (cls, bounce) = match rep {
                Representation::Position => {
                    let cls = classify_position(s, x, t)?;
                    let b = (cls.has_bounce() || cls.is_critical()).then(|| bounce_time_position(s, x, t)).transpose()?;
                    (cls, b)
                }
                Representation::Momentum => {
                    let cls = classify_momentum(s, x, t)?;
                    let b = (cls.has_bounce() || cls.is_critical()).then(|| bounce_time_momentum(s, x, t)).transpose()?;
                    (cls, b)
                }
            };
            Ok(vec![
                float(s),
                float(x),
                float(t),
                branch_names(&cls),
                cls.boundary.to_string(),
                optional(bounce),
                float(cls.critical_distance),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(
        "classify.csv",
        &[start_label(rep), "x", "t", "branches", "boundary", "bounce_time", "critical_distance"],
    )
    .meta("representation", rep_name(rep));
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn value_or_zero(v: &PropagatorValue) -> Complex64 {
    if v.is_forbidden() {
        Complex64::new(0.0, 0.0)
    } else {
        v.value
    }
}

pub fn propagate(cfg: &GridConfig) -> CliResult<Table> {
    let points = cfg.points()?;
    let rep = cfg.representation;
    let rows = points
        .par_iter()
        .map(|&(s, x, t)| -> CliResult<Vec<String>> {
            let mut row = vec![float(s), float(x), float(t)];
            match rep {
                Representation::Position => {
                    let d = propagator_direct_y(s, x, t)?;
                    let b = propagator_bounce_y(s, x, t)?;
                    let dir = propagator_dirichlet_y(s, x, t)?;
                    let neu = propagator_neumann_y(s, x, t)?;
                    row.push(format!("{:?}", dir.regime));
                    for z in [value_or_zero(&d), value_or_zero(&b), dir.value, neu.value, free_propagator(s, x, t)?] {
                        row.extend(complex(z));
                    }
                }
                Representation::Momentum => {
                    let d = propagator_direct_p(s, x, t)?;
                    let b = propagator_bounce_p(s, x, t)?;
                    let dir = propagator_dirichlet_p(s, x, t)?;
                    row.push(format!("{:?}", dir.regime));
                    for z in [value_or_zero(&d), value_or_zero(&b), dir.value] {
                        row.extend(complex(z));
                    }
                }
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut header = vec![start_label(rep), "x", "t", "regime", "direct_re", "direct_im", "bounce_re", "bounce_im", "dirichlet_re", "dirichlet_im"];
    if rep == Representation::Position {
        header.extend(["neumann_re", "neumann_im", "free_re", "free_im"]);
    }
    let mut table = Table::new("propagate.csv", &header).meta("representation", rep_name(rep));
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn packet_evolve(cfg: &PacketEvolveConfig) -> CliResult<Table> {
    let values = cfg.values.values("values")?;
    let pcfg = PacketConfig {
        quadrature: QuadratureConfig { abs_tol: cfg.abs_tol, rel_tol: cfg.rel_tol, ..QuadratureConfig::default() },
        truncation: cfg.truncation,
    };
    let rows = values
        .par_iter()
        .map(|&v| -> CliResult<Vec<String>> {
            let (center, momentum) = match cfg.sweep {
                PacketSweep::Center => (v, cfg.momentum),
                PacketSweep::Momentum => (cfg.center, v),
            };
            let packet = GaussianPacket::new(center, momentum, cfg.spread)?;
            let pos = evolve_position(&packet, cfg.x, cfg.t, &pcfg)?;
            let mom = evolve_momentum(&packet, cfg.x, cfg.t, &pcfg)?;
            let scale = pos.total.norm().max(mom.total.norm());
            let gap = if scale > 0.0 { (pos.total - mom.total).norm() / scale } else { 0.0 };
            let mut row = vec![float(center), float(momentum)];
            for r in [&pos, &mom] {
                for z in [r.direct, r.bounce, r.total] {
                    row.extend(complex(z));
                }
                row.push(float(r.error_estimate));
            }
            row.push(float(gap));
            let warned = pos.warnings.iter().chain(&mom.warnings).next();
            row.push(warned.map(|w| format!("{w:?}")).unwrap_or_default());
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(
        "packet_evolve.csv",
        &[
            "center", "momentum",
            "position_direct_re", "position_direct_im", "position_bounce_re", "position_bounce_im",
            "position_total_re", "position_total_im", "position_error",
            "momentum_direct_re", "momentum_direct_im", "momentum_bounce_re", "momentum_bounce_im",
            "momentum_total_re", "momentum_total_im", "momentum_error",
            "relative_gap", "warning",
        ],
    )
    .meta("x", float(cfg.x))
    .meta("t", float(cfg.t))
    .meta("spread", float(cfg.spread));
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn caustic_sweep(cfg: &CausticSweepConfig) -> CliResult<Vec<Table>> {
    if cfg.exponents.is_empty() {
        return Err(CliError::Config("exponents must not be empty".into()));
    }
    let mut summary = Table::new(
        "caustic_summary.csv",
        &["exponent", "plateau", "late_distance", "max_energy_drift", "truncated_trajectories", "overtaking_pairs", "envelope_points"],
    );
    let mut tables = Vec::new();
    for &n in &cfg.exponents {
        let sc = SoftCeilingConfig {
            exponent: n,
            launch_momenta: launch_grid(cfg.launch_count, cfg.launch_max),
            duration: cfg.duration,
            sample_step: cfg.sample_step,
            abs_tol: cfg.tolerance,
            rel_tol: cfg.tolerance,
            floor: cfg.floor,
        };
        let family = sweep_family(&sc)?;
        let curve = detect_envelope(&family)?;

        let mut fam = Table::new(
            format!("family_n{n}.csv"),
            &["launch_index", "launch_momentum", "time", "position", "momentum", "truncated"],
        )
        .meta("exponent", n);
        for (k, tr) in family.trajectories.iter().enumerate() {
            for (j, (&q, &p)) in tr.positions.iter().zip(&tr.momenta).enumerate() {
                fam.push(vec![
                    k.to_string(),
                    float(tr.launch_momentum),
                    float(family.times[j]),
                    float(q),
                    float(p),
                    tr.truncated.to_string(),
                ]);
            }
        }

        let mut env = Table::new(
            format!("envelope_n{n}.csv"),
            &["time", "position", "launch_momentum", "pair_index", "hard_wall_position"],
        )
        .meta("exponent", n);
        for pt in &curve.points {
            let wall = if pt.time > 0.0 { Some(hard_wall_envelope(pt.time)?) } else { None };
            env.push(vec![float(pt.time), float(pt.position), float(pt.launch_momentum), pt.pair_index.to_string(), optional(wall)]);
        }

        let [p0, p1] = cfg.plateau_window;
        let [l0, l1] = cfg.late_window;
        let late = curve.distance_to(|t| hard_wall_envelope(t).unwrap_or(f64::NAN), l0.max(f64::MIN_POSITIVE), l1);
        summary.push(vec![
            n.to_string(),
            optional(curve.plateau(p0, p1)),
            optional(late),
            float(family.trajectories.iter().map(|t| t.energy_drift).fold(0.0, f64::max)),
            family.trajectories.iter().filter(|t| t.truncated).count().to_string(),
            family.overtaking.len().to_string(),
            curve.points.len().to_string(),
        ]);
        tables.push(fam);
        tables.push(env);
    }
    tables.push(summary);
    Ok(tables)
}

pub fn residual_check(cfg: &ResidualCheckConfig) -> CliResult<Vec<Table>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draw = |rng: &mut ChaCha8Rng, r: [f64; 2]| if r[0] == r[1] { r[0] } else { rng.gen_range(r[0]..r[1]) };
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut attempts = 0usize;
    while samples.len() < cfg.samples {
        attempts += 1;
        if attempts > 1000 * cfg.samples.max(1) {
            return Err(CliError::Config("ranges leave too few points away from the critical curve".into()));
        }
        let (y, x, t) = (draw(&mut rng, cfg.y_range), draw(&mut rng, cfg.x_range), draw(&mut rng, cfg.t_range));
        let cls = classify_position(y, x, t)?;
        if cls.has_bounce() && cls.critical_distance <= -cfg.margin {
            samples.push((y, x, t));
        }
    }

    let rows = samples
        .par_iter()
        .enumerate()
        .map(|(i, &(y, x, t))| -> CliResult<Vec<Vec<String>>> {
            let mut out = Vec::new();
            for &h in &cfg.steps {
                let direct = schrodinger_residual(|xx, tt| propagator_direct_y(y, xx, tt).ok().map(|u| u.value), x, t, h)?;
                let free = schrodinger_residual(|xx, tt| free_propagator(y, xx, tt).ok(), x, t, h)?;
                let bounce = schrodinger_residual(|xx, tt| propagator_bounce_y(y, xx, tt).ok().map(|u| u.value), x, t, h)?;
                let dirichlet = schrodinger_residual(|xx, tt| propagator_dirichlet_y(y, xx, tt).ok().map(|u| u.value), x, t, h)?;
                out.push(vec![i.to_string(), float(y), float(x), float(t), float(h), float(direct), float(free), float(bounce), float(dirichlet)]);
            }
            Ok(out)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut res = Table::new(
        "residuals.csv",
        &["sample", "y", "x", "t", "h", "direct_residual", "free_residual", "bounce_residual", "dirichlet_residual"],
    )
    .meta("seed", cfg.seed);
    rows.into_iter().flatten().for_each(|r| res.push(r));

    let [y, x, t] = cfg.falsifier_point;
    let f = image_method_falsifiers(y, x, t)?;
    let mut fal = Table::new(
        "falsifiers.csv",
        &["y", "x", "t", "boundary_mismatch", "mirrored_residual", "baseline_residual"],
    );
    fal.push(vec![float(y), float(x), float(t), float(f.boundary_mismatch), float(f.mirrored_residual), float(f.baseline_residual)]);
    Ok(vec![res, fal])
}
