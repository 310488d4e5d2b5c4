//! Run configuration from flat text with dotted keys.
//!
//! ```text
//! nonlinearity.kind = "cubic"
//! nonlinearity.theta0 = 0.25
//! solver.dt = 1e-3
//! family.kind = "rect_width"
//! ```
//!
//! Values are JSON-compatible scalars and arrays. Every key is optional;
//! keys that no setting reads are rejected by name.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rdlab_core::classify::{ClassifierConfig, Followup};
use rdlab_core::energy::EnergyProbe;
use rdlab_core::evolve::{Scheme, SolverConfig};
use rdlab_core::field::Grid;
use rdlab_core::nonlin::{FamilySpec, Kind, Nonlinearity};
use rdlab_core::threshold::{FamilyKind, ThresholdConfig};
use sha2::{Digest, Sha256};
use toml::Value;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dx: f64,
    pub length: f64,
}

impl GridSpec {
    pub fn grid(&self) -> Result<Grid> {
        Grid::with_length(self.dx, self.length).map_err(|e| core_to_config("grid", e))
    }
}

/// Initial datum `φ_λ` of a family at a fixed `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSpec {
    pub family: FamilyKind,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    pub lambda_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdParams {
    pub tol_lambda: f64,
    pub lambda_min: f64,
    pub t_cap_factor: f64,
    pub verify_offsets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nonlinearity: FamilySpec,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    pub probe: EnergyProbe,
    pub initial: InitialSpec,
    pub family: FamilyConfig,
    pub classifier: ClassifierConfig,
    /// `false` integrates to `t_max` whatever the verdict.
    pub stop_at_verdict: bool,
    pub threshold: ThresholdParams,
    pub front_bracket: (f64, f64),
    pub spectral_length: f64,
    pub holder_time: f64,
    pub classify_input: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    /// Sorted `key = value` lines of the parsed input.
    pub canonical: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::parse("").expect("empty config is valid")
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let reason = e.message().to_string();
            let key = e.span().map_or_else(|| "<syntax>".to_string(), |s| format!("<syntax at byte {}>", s.start));
            LabError::config(key, reason)
        })?;
        let mut flat = BTreeMap::new();
        flatten("", &table, &mut flat);
        let canonical: String = flat.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let mut r = Reader { values: flat, used: BTreeSet::new() };

        let nonlinearity = read_nonlinearity(&mut r)?;
        let grid = GridSpec { dx: r.f64("grid.dx", 0.05)?, length: r.f64("grid.length", 40.0)? };
        let solver = read_solver(&mut r)?;
        let probe = EnergyProbe {
            wants_energy: r.bool("probes.energy", true)?,
            c_list: r.f64_list("probes.c_list", Vec::new())?,
            every: r.usize("probes.every", 1)?,
        };
        if probe.c_list.iter().any(|&c| !(c > 0.0)) {
            return Err(LabError::config("probes.c_list", "weights must be positive"));
        }
        let initial = InitialSpec {
            family: read_family_kind(&mut r, "initial", "initial.family")?,
            lambda: r.f64("initial.lambda", 1.0)?,
        };
        if !(initial.lambda >= 0.0) {
            return Err(LabError::config("initial.lambda", "must be non-negative"));
        }
        let family = FamilyConfig {
            kind: read_family_kind(&mut r, "family", "family.kind")?,
            lambda_max: r.f64("family.lambda_max", 4.0)?,
        };
        if !(family.lambda_max > 0.0) {
            return Err(LabError::config("family.lambda_max", "must be positive"));
        }
        let classifier = read_classifier(&mut r)?;
        let stop_at_verdict = r.bool("classifier.stop_at_verdict", true)?;
        let threshold = ThresholdParams {
            tol_lambda: r.f64("threshold.tol_lambda", 1e-3)?,
            lambda_min: r.f64("threshold.lambda_min", 1e-4)?,
            t_cap_factor: r.f64("threshold.t_cap_factor", 16.0)?,
            verify_offsets: r.f64_list("threshold.verify_offsets", vec![0.01])?,
        };
        if !(threshold.tol_lambda > 0.0) {
            return Err(LabError::config("threshold.tol_lambda", "must be positive"));
        }
        if !(threshold.lambda_min > 0.0 && threshold.lambda_min < family.lambda_max) {
            return Err(LabError::config("threshold.lambda_min", "must lie in (0, family.lambda_max)"));
        }
        let front_bracket = (r.f64("front.c_lo", 0.01)?, r.f64("front.c_hi", 2.0)?);
        let spectral_length = r.f64("spectral.length", 20.0)?;
        let holder_time = r.f64("energy.holder_time", 10.0)?;
        let classify_input = r.opt_string("classify.input")?.map(PathBuf::from);
        let output_dir = r.opt_string("output.dir")?.map(PathBuf::from);
        r.finish()?;

        let cfg = RunConfig {
            nonlinearity,
            grid,
            solver,
            probe,
            initial,
            family,
            classifier,
            stop_at_verdict,
            threshold,
            front_bracket,
            spectral_length,
            holder_time,
            classify_input,
            output_dir,
            canonical,
        };
        cfg.grid.grid()?;
        cfg.build_nonlinearity()?;
        cfg.solver.check().map_err(|e| core_to_config("solver", e))?;
        Ok(cfg)
    }

    pub fn build_nonlinearity(&self) -> Result<Nonlinearity> {
        self.nonlinearity.build().map_err(|e| core_to_config("nonlinearity", e))
    }

    pub fn threshold_config(&self) -> Result<ThresholdConfig> {
        let mut t = ThresholdConfig::new(self.grid.grid()?);
        t.tol_lambda = self.threshold.tol_lambda;
        t.lambda_min = self.threshold.lambda_min;
        t.t_cap_factor = self.threshold.t_cap_factor;
        t.verify_offsets = self.threshold.verify_offsets.clone();
        t.classifier = ClassifierConfig { decisive_only: true, followup: None, ..self.classifier.clone() };
        Ok(t)
    }

    /// Hex SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn core_to_config(section: &str, e: rdlab_core::Error) -> LabError {
    match e {
        rdlab_core::Error::InvalidParameter { name, reason } => LabError::config(format!("{section}.{name}"), reason),
        other => LabError::config(section, other.to_string()),
    }
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

struct Reader {
    values: BTreeMap<String, Value>,
    used: BTreeSet<String>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<&Value> {
        self.used.insert(key.to_string());
        self.values.get(key)
    }

    fn number(key: &str, v: &Value) -> Result<f64> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(LabError::config(key, "expected a number")),
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let x = match self.take(key) {
            Some(v) => Self::number(key, v)?,
            None => return Ok(default),
        };
        if !x.is_finite() {
            return Err(LabError::config(key, "must be finite"));
        }
        Ok(x)
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            Some(v) => Self::number(key, v).map(Some),
            None => Ok(None),
        }
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        Ok(self.opt_usize(key)?.unwrap_or(default))
    }

    fn opt_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(_) => Err(LabError::config(key, "expected a non-negative integer")),
            None => Ok(None),
        }
    }

    fn bool(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            Some(Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(LabError::config(key, "expected true or false")),
            None => Ok(default),
        }
    }

    fn opt_string(&mut self, key: &str) -> Result<Option<String>> {
        match self.take(key) {
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(LabError::config(key, "expected a string")),
            None => Ok(None),
        }
    }

    fn f64_list(&mut self, key: &str, default: Vec<f64>) -> Result<Vec<f64>> {
        match self.take(key) {
            Some(Value::Array(xs)) => xs.iter().map(|v| Self::number(key, v)).collect(),
            Some(_) => Err(LabError::config(key, "expected an array of numbers")),
            None => Ok(default),
        }
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().find(|k| !self.used.contains(*k)) {
            Some(k) => Err(LabError::config(k.clone(), "unknown key, or not used by the selected kind")),
            None => Ok(()),
        }
    }
}

fn parse_kind(key: &str, s: &str) -> Result<Kind> {
    match s {
        "bistable" => Ok(Kind::Bistable),
        "ignition" => Ok(Kind::Ignition),
        "monostable" => Ok(Kind::Monostable),
        _ => Err(LabError::config(key, format!("unknown kind `{s}`"))),
    }
}

fn read_nonlinearity(r: &mut Reader) -> Result<FamilySpec> {
    let kind = r.opt_string("nonlinearity.kind")?.unwrap_or_else(|| "cubic".into());
    Ok(match kind.as_str() {
        "cubic" => FamilySpec::CubicBistable { theta0: r.f64("nonlinearity.theta0", 0.25)? },
        "degenerate_cubic" => FamilySpec::DegenerateBistable {
            theta0: r.f64("nonlinearity.theta0", 0.25)?,
            p: r.f64("nonlinearity.p", 2.0)?,
        },
        "ignition" => FamilySpec::Ignition {
            theta0: r.f64("nonlinearity.theta0", 0.25)?,
            scale: r.f64("nonlinearity.scale", 8.0)?,
            order: r.f64("nonlinearity.order", 2.0)?,
        },
        "fisher" => FamilySpec::Fisher { p: r.f64("nonlinearity.p", 2.0)? },
        "arrhenius" => FamilySpec::Arrhenius { a: r.f64("nonlinearity.a", 5.0)? },
        "tabulated" => {
            let k = r
                .opt_string("nonlinearity.type")?
                .ok_or_else(|| LabError::config("nonlinearity.type", "required for tabulated"))?;
            FamilySpec::Tabulated {
                kind: parse_kind("nonlinearity.type", &k)?,
                theta0: r.opt_f64("nonlinearity.theta0")?,
                us: r.f64_list("nonlinearity.u", Vec::new())?,
                fs: r.f64_list("nonlinearity.f", Vec::new())?,
            }
        }
        other => return Err(LabError::config("nonlinearity.kind", format!("unknown kind `{other}`"))),
    })
}

fn read_family_kind(r: &mut Reader, section: &str, key: &str) -> Result<FamilyKind> {
    let kind = r.opt_string(key)?.unwrap_or_else(|| "rect_width".into());
    Ok(match kind.as_str() {
        "rect_width" => FamilyKind::RectWidth { height: r.f64(&format!("{section}.height"), 1.0)? },
        "rect_height" => FamilyKind::RectHeight { width: r.f64(&format!("{section}.width"), 2.0)? },
        "gaussian_amplitude" => FamilyKind::GaussianAmplitude { sigma: r.f64(&format!("{section}.sigma"), 1.0)? },
        "bump_scale" => FamilyKind::BumpScale,
        other => return Err(LabError::config(key, format!("unknown family `{other}`"))),
    })
}

fn read_solver(r: &mut Reader) -> Result<SolverConfig> {
    let d = SolverConfig::default();
    let scheme = match r.opt_string("solver.scheme")?.as_deref() {
        None | Some("crank_nicolson") => Scheme::CrankNicolson,
        Some("backward_euler") => Scheme::BackwardEuler,
        Some(other) => return Err(LabError::config("solver.scheme", format!("unknown scheme `{other}`"))),
    };
    Ok(SolverConfig {
        dt: r.f64("solver.dt", d.dt)?,
        scheme,
        t_max: r.f64("solver.t_max", d.t_max)?,
        expand_trigger: r.f64("solver.expand_trigger", d.expand_trigger)?,
        expand_factor: r.f64("solver.expand_factor", d.expand_factor)?,
        edge_delta: r.f64("solver.edge_delta", d.edge_delta)?,
        track_delta: r.f64("solver.track_delta", d.track_delta)?,
        record_every: r.usize("solver.record_every", d.record_every)?,
        snapshot_every: r.opt_usize("solver.snapshot_every")?,
        smoothing_steps: r.usize("solver.smoothing_steps", d.smoothing_steps)?,
        advection_limit: r.f64("solver.advection_limit", d.advection_limit)?,
    })
}

fn read_classifier(r: &mut Reader) -> Result<ClassifierConfig> {
    let d = ClassifierConfig::default();
    let fd = Followup::default();
    let followup = if r.bool("classifier.followup", true)? {
        Some(Followup { time_cap: r.f64("classifier.followup_time", fd.time_cap)?, ..fd })
    } else {
        None
    };
    Ok(ClassifierConfig {
        eps_u: r.f64("classifier.eps_u", d.eps_u)?,
        eps_ext: r.f64("classifier.eps_ext", d.eps_ext)?,
        trailing_window: r.usize("classifier.trailing_window", d.trailing_window)?,
        tol_bump: r.f64("classifier.tol_bump", d.tol_bump)?,
        tol_energy_bump: r.f64("classifier.tol_energy_bump", d.tol_energy_bump)?,
        tol_theta: r.f64("classifier.tol_theta", d.tol_theta)?,
        tol_energy_theta: r.f64("classifier.tol_energy_theta", d.tol_energy_theta)?,
        dwell: r.usize("classifier.dwell", d.dwell)?,
        decisive_only: r.bool("classifier.decisive_only", false)?,
        followup,
    })
}
