use std::fmt;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field_model::{DetectorConfig, FieldModelConfig};
use crate::matrix_models::{build_decoupled_blocks, build_friedrichs, build_two_level, ToyModel};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FreeDecay,
    Zeno,
    Direct,
    Indirect,
    NogoCheck,
    SemidirectCheck,
    WavezoneCheck,
    IntertwineCheck,
    Sweep,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::FreeDecay,
        Experiment::Zeno,
        Experiment::Direct,
        Experiment::Indirect,
        Experiment::NogoCheck,
        Experiment::SemidirectCheck,
        Experiment::WavezoneCheck,
        Experiment::IntertwineCheck,
        Experiment::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::FreeDecay => "free-decay",
            Experiment::Zeno => "zeno",
            Experiment::Direct => "direct",
            Experiment::Indirect => "indirect",
            Experiment::NogoCheck => "nogo-check",
            Experiment::SemidirectCheck => "semidirect-check",
            Experiment::WavezoneCheck => "wavezone-check",
            Experiment::IntertwineCheck => "intertwine-check",
            Experiment::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The system to simulate. Toy kinds are finite matrix models; `field` is
/// the atom + chiral-field model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    TwoLevel { omega: f64 },
    Friedrichs { modes: usize, coupling: f64, bandwidth: f64 },
    DecoupledBlocks { core_dim: usize, wave_dim: usize },
    Field(FieldModelConfig),
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::TwoLevel { .. } => "two-level",
            ModelSpec::Friedrichs { .. } => "friedrichs",
            ModelSpec::DecoupledBlocks { .. } => "decoupled-blocks",
            ModelSpec::Field(_) => "field",
        }
    }

    pub fn toy(&self) -> Option<Result<ToyModel>> {
        Some(match *self {
            ModelSpec::TwoLevel { omega } => build_two_level(omega),
            ModelSpec::Friedrichs { modes, coupling, bandwidth } => build_friedrichs(modes, coupling, bandwidth),
            ModelSpec::DecoupledBlocks { core_dim, wave_dim } => build_decoupled_blocks(core_dim, wave_dim),
            ModelSpec::Field(_) => return None,
        })
    }

    pub fn field(&self) -> Option<&FieldModelConfig> {
        match self {
            ModelSpec::Field(cfg) => Some(cfg),
            _ => None,
        }
    }
}

/// Run parameters. Which fields are required depends on the experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    /// Final time (toy models) or simulated horizon (field model).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Sample spacing, or measurement interval for `zeno`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Measurement counts `N` for `sweep`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_list: Option<Vec<usize>>,
    /// Direct-measurement strengths `g` for `direct`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<f64>>,
    /// Detector scales for `nogo-check` / `semidirect-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<f64>>,
    /// Single detector scale (`indirect`) or coupling `g` (`intertwine-check` on toys).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short_window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    /// Probe support, in cells beyond the atom edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reach: Option<usize>,
    /// Seed of the probe generator; runs are deterministic either way.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

fn all_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json, Format::Svg]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Not echoed into summaries, so outputs do not depend on where they land.
    #[serde(default, skip_serializing)]
    pub dir: Option<PathBuf>,
    #[serde(default = "all_formats")]
    pub formats: Vec<Format>,
    /// Logarithmic y axis in `plot.svg`.
    #[serde(default)]
    pub log_scale: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: None,
            formats: all_formats(),
            log_scale: false,
        }
    }
}

/// One experiment: what to run, on which model, and where to write it.
/// Parse with [`ExperimentConfig::from_json_str`], which validates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorConfig>,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Parse or validation failure, with the source location when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const SECTIONS: [&str; 5] = ["experiment", "model", "detector", "run", "output"];

/// Line of the first `"key":` in `src`, 1-based.
fn key_line(src: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let mut from = 0;
    while let Some(pos) = src[from..].find(&needle) {
        let end = from + pos + needle.len();
        if src[end..].trim_start().starts_with(':') {
            return Some(src[..end].matches('\n').count() + 1);
        }
        from = end;
    }
    None
}

fn section<T: DeserializeOwned>(obj: &serde_json::Map<String, Value>, key: &str, src: Option<&str>) -> std::result::Result<Option<T>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| ConfigError {
            line: src.and_then(|s| key_line(s, key)),
            message: format!("{key}: {e}"),
        }),
    }
}

impl ExperimentConfig {
    /// Parse a JSON document; errors carry the line of the offending section.
    pub fn from_json_str(src: &str) -> std::result::Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(src).map_err(|e| ConfigError {
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        Self::from_value_with_source(value, Some(src))
    }

    pub fn from_value(value: Value) -> std::result::Result<Self, ConfigError> {
        Self::from_value_with_source(value, None)
    }

    fn from_value_with_source(value: Value, src: Option<&str>) -> std::result::Result<Self, ConfigError> {
        let Value::Object(obj) = value else {
            return Err(ConfigError {
                line: Some(1),
                message: "config must be a JSON object".into(),
            });
        };
        if let Some(k) = obj.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
            return Err(ConfigError {
                line: src.and_then(|s| key_line(s, k)),
                message: format!("unknown top-level field `{k}`, expected one of {SECTIONS:?}"),
            });
        }
        let missing = |key: &str| ConfigError {
            line: None,
            message: format!("missing required field `{key}`"),
        };
        let cfg = Self {
            experiment: section(&obj, "experiment", src)?.ok_or_else(|| missing("experiment"))?,
            model: section(&obj, "model", src)?.ok_or_else(|| missing("model"))?,
            detector: section(&obj, "detector", src)?,
            run: section(&obj, "run", src)?.unwrap_or_default(),
            output: section(&obj, "output", src)?.unwrap_or_default(),
        };
        cfg.validate().map_err(|(key, message)| ConfigError {
            line: src.and_then(|s| key_line(s, key)),
            message: format!("{key}: {message}"),
        })?;
        Ok(cfg)
    }

    /// Structural checks that need no simulation. Errors name the section.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        use Experiment::*;
        let field = self.model.field();
        let toy_only = matches!(self.experiment, Zeno | Direct | Sweep);
        let field_only = matches!(self.experiment, Indirect | NogoCheck | SemidirectCheck | WavezoneCheck);
        if toy_only && field.is_some() {
            return Err(("model", format!("`{}` needs a toy model (two-level, friedrichs, decoupled-blocks)", self.experiment)));
        }
        if field_only && field.is_none() {
            return Err(("model", format!("`{}` needs a model of kind `field`", self.experiment)));
        }
        if self.experiment == IntertwineCheck && !matches!(self.model, ModelSpec::Field(_) | ModelSpec::DecoupledBlocks { .. }) {
            return Err(("model", "`intertwine-check` needs a `field` or `decoupled-blocks` model".into()));
        }
        if let Some(cfg) = field {
            cfg.validate().map_err(|e| ("model", e.to_string()))?;
        } else if let Some(Err(e)) = self.model.toy() {
            return Err(("model", e.to_string()));
        }
        let needs_detector = matches!(self.experiment, Indirect | NogoCheck | SemidirectCheck)
            || (self.experiment == IntertwineCheck && field.is_some());
        match (&self.detector, field) {
            (None, _) if needs_detector => {
                return Err(("detector", format!("`{}` needs a `detector` section", self.experiment)));
            }
            (Some(_), None) => return Err(("detector", "a detector only applies to the `field` model".into())),
            (Some(det), Some(cfg)) => {
                if self.experiment == SemidirectCheck {
                    if det.in_wave_zone(cfg.d) {
                        return Err(("detector", format!(
                            "`semidirect-check` needs a detector overlapping the atom (x_minus < d/2 = {})",
                            cfg.d / 2.0
                        )));
                    }
                } else {
                    det.validate(cfg.d).map_err(|e| ("detector", e.to_string()))?;
                    if matches!(self.experiment, Indirect | NogoCheck) && (det.semidirect || !det.in_wave_zone(cfg.d)) {
                        return Err(("detector", format!(
                            "`{}` needs a wave-zone detector (x_minus > d/2 = {}); use `semidirect-check` for overlapping detectors",
                            self.experiment,
                            cfg.d / 2.0
                        )));
                    }
                }
            }
            _ => {}
        }

        let r = &self.run;
        let positive = |name: &'static str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(("run", format!("{name} must be positive, got {x}"))),
            _ => Ok(()),
        };
        positive("t_max", r.t_max)?;
        positive("dt", r.dt)?;
        if r.steps == Some(0) || r.sample_every == Some(0) || r.probes == Some(0) {
            return Err(("run", "steps, sample_every and probes must be positive".into()));
        }
        for (name, w) in [("fit_window", r.fit_window), ("short_window", r.short_window)] {
            if let Some([a, b]) = w {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(("run", format!("{name} must be [lo, hi] with lo < hi")));
                }
            }
        }
        let require = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(("run", format!("`{}` requires {what}", self.experiment)))
            }
        };
        match self.experiment {
            FreeDecay if field.is_none() => require(r.t_max.is_some() && r.dt.is_some(), "run.t_max and run.dt")?,
            Zeno => require(r.steps.is_some() && (r.dt.is_some() || r.t_max.is_some()), "run.steps and one of run.dt / run.t_max")?,
            Direct => require(
                r.t_max.is_some() && r.dt.is_some() && r.couplings.as_ref().is_some_and(|c| !c.is_empty()),
                "run.t_max, run.dt and a non-empty run.couplings",
            )?,
            NogoCheck | SemidirectCheck => {
                require(r.scales.as_ref().is_none_or(|s| !s.is_empty()), "a non-empty run.scales")?
            }
            Sweep => require(r.steps_list.as_ref().is_none_or(|s| !s.is_empty() && !s.contains(&0)), "run.steps_list of positive counts")?,
            _ => {}
        }
        if let (Some(t), Some(cfg)) = (r.t_max, field) {
            if t > cfg.horizon + 1e-9 * cfg.dt() {
                return Err(("run", format!("run.t_max = {t} exceeds model.horizon = {}", cfg.horizon)));
            }
        }
        Ok(())
    }
}
