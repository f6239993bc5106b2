//! Run configuration. Every field has a default so a partial JSON file is
//! enough; the effective configuration is echoed into the run record.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Grid axis: either explicit values or `count` evenly spaced points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Axis {
    pub fn single(v: f64) -> Self {
        Axis::Values(vec![v])
    }

    pub fn values(&self, name: &str) -> CliResult<Vec<f64>> {
        let out = match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
            },
        };
        if out.is_empty() {
            return Err(CliError::Config(format!("axis `{name}` is empty")));
        }
        if let Some(v) = out.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("axis `{name}` has non-finite value {v}")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Position,
    Momentum,
}

/// Grid over `(start, x, t)` where `start` is `y` or `p` depending on the representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub representation: Representation,
    pub start: Axis,
    pub x: Axis,
    pub t: Axis,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            representation: Representation::Position,
            start: Axis::Range { start: 0.0, stop: 15.0, count: 61 },
            x: Axis::single(4.0),
            t: Axis::single(5.0),
        }
    }
}

impl GridConfig {
    /// All grid points in row-major `(start, x, t)` order.
    pub fn points(&self) -> CliResult<Vec<(f64, f64, f64)>> {
        let (s, x, t) = (self.start.values("start")?, self.x.values("x")?, self.t.values("t")?);
        if self.representation == Representation::Position && s.iter().any(|v| *v < 0.0) {
            return Err(CliError::Config("starting positions must be >= 0".into()));
        }
        if x.iter().any(|v| *v < 0.0) {
            return Err(CliError::Config("x must be >= 0".into()));
        }
        if t.iter().any(|v| *v <= 0.0) {
            return Err(CliError::Config("t must be > 0".into()));
        }
        let mut out = Vec::with_capacity(s.len() * x.len() * t.len());
        for &a in &s {
            for &b in &x {
                for &c in &t {
                    out.push((a, b, c));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PacketSweep {
    Center,
    Momentum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketEvolveConfig {
    pub x: f64,
    pub t: f64,
    pub spread: f64,
    pub center: f64,
    pub momentum: f64,
    /// Which packet parameter `values` replaces.
    pub sweep: PacketSweep,
    pub values: Axis,
    pub truncation: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for PacketEvolveConfig {
    fn default() -> Self {
        PacketEvolveConfig {
            x: 4.0,
            t: 5.0,
            spread: 2.0,
            center: 13.0,
            momentum: -6.0,
            sweep: PacketSweep::Center,
            values: Axis::Range { start: 4.0, stop: 15.0, count: 45 },
            truncation: 6.0,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CausticSweepConfig {
    pub exponents: Vec<u32>,
    pub launch_count: usize,
    pub launch_max: f64,
    pub duration: f64,
    pub sample_step: f64,
    pub tolerance: f64,
    pub floor: Option<f64>,
    /// Time window for the envelope plateau.
    pub plateau_window: [f64; 2],
    /// Time window for the distance to the hard-wall envelope.
    pub late_window: [f64; 2],
}

impl Default for CausticSweepConfig {
    fn default() -> Self {
        CausticSweepConfig {
            exponents: vec![6, 30],
            launch_count: 60,
            launch_max: 2.0,
            duration: 3.0,
            sample_step: 0.005,
            tolerance: 1e-9,
            floor: Some(-0.99),
            plateau_window: [0.0, 1.0],
            late_window: [1.5, 2.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualCheckConfig {
    pub seed: u64,
    pub samples: usize,
    pub steps: Vec<f64>,
    pub y_range: [f64; 2],
    pub x_range: [f64; 2],
    pub t_range: [f64; 2],
    /// Samples closer than this to the critical curve are redrawn.
    pub margin: f64,
    /// `(y, x, t)` at which the image-method falsifiers are evaluated.
    pub falsifier_point: [f64; 3],
}

impl Default for ResidualCheckConfig {
    fn default() -> Self {
        ResidualCheckConfig {
            seed: 20_240_601,
            samples: 50,
            steps: vec![1e-2, 1e-3, 1e-4],
            y_range: [0.5, 10.0],
            x_range: [0.5, 10.0],
            t_range: [0.1, 2.0],
            margin: 0.1,
            falsifier_point: [4.0, 2.0, 1.0],
        }
    }
}

fn ordered(name: &str, r: [f64; 2]) -> CliResult<()> {
    if r.iter().all(|v| v.is_finite()) && r[0] <= r[1] {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{name}` must be a finite increasing pair, got {r:?}")))
    }
}

impl ResidualCheckConfig {
    pub fn validate(&self) -> CliResult<()> {
        ordered("y_range", self.y_range)?;
        ordered("x_range", self.x_range)?;
        ordered("t_range", self.t_range)?;
        if self.steps.is_empty() || self.steps.iter().any(|h| !(*h > 0.0)) {
            return Err(CliError::Config("steps must be positive".into()));
        }
        let widest = self.steps.iter().copied().fold(0.0, f64::max);
        if self.y_range[0] < 0.0 || self.x_range[0] < widest || self.t_range[0] <= widest {
            return Err(CliError::Config("ranges must keep every stencil inside x >= 0, t > 0".into()));
        }
        if !(self.margin >= widest) {
            return Err(CliError::Config("margin must be at least the widest step".into()));
        }
        Ok(())
    }
}

/// A complete, replayable run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Classify(GridConfig),
    Propagate(GridConfig),
    PacketEvolve(PacketEvolveConfig),
    CausticSweep(CausticSweepConfig),
    ResidualCheck(ResidualCheckConfig),
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Classify(_) => "classify",
            RunConfig::Propagate(_) => "propagate",
            RunConfig::PacketEvolve(_) => "packet-evolve",
            RunConfig::CausticSweep(_) => "caustic-sweep",
            RunConfig::ResidualCheck(_) => "residual-check",
        }
    }
}

fn parse_json(text: &str) -> CliResult<serde_json::Value> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Parse a tagged configuration (with a `command` field).
pub fn parse_run_config(text: &str) -> CliResult<RunConfig> {
    serde_json::from_value(parse_json(text)?).map_err(|e| CliError::Config(e.to_string()))
}

/// Parse the parameters of `command`. A `command` field, if present, must match.
pub fn parse_command_config(command: &str, text: Option<&str>) -> CliResult<RunConfig> {
    let mut value = match text {
        Some(t) => parse_json(t)?,
        None => serde_json::Value::Object(Default::default()),
    };
    let obj = value.as_object_mut().ok_or_else(|| CliError::Config("config must be a JSON object".into()))?;
    match obj.get("command") {
        Some(serde_json::Value::String(c)) if c != command => {
            return Err(CliError::Config(format!("config is for `{c}`, not `{command}`")));
        }
        Some(serde_json::Value::String(_)) | None => {}
        Some(other) => return Err(CliError::Config(format!("`command` must be a string, got {other}"))),
    }
    obj.insert("command".into(), command.into());
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}
