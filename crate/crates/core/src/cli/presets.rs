use serde::Serialize;
use serde_json::{json, Value};

use super::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

/// Built-in presets, alphabetized. Each name is also an experiment name.
pub const PRESETS: [Preset; 9] = [
    Preset {
        name: "direct",
        description: "two-level atom under continuous measurement g in {0, 10, 100}; Rabi oracle and freezing",
    },
    Preset {
        name: "free-decay",
        description: "Friedrichs quasi-continuum decaying at the golden-rule rate",
    },
    Preset {
        name: "indirect",
        description: "field model with a wave-zone detector at scale 10 against the undetected run",
    },
    Preset {
        name: "intertwine-check",
        description: "core projection of the field step map is independent of the detector coupling",
    },
    Preset {
        name: "nogo-check",
        description: "wave-zone detector at scales {0, 1, 10, 100} leaves survival unchanged",
    },
    Preset {
        name: "semidirect-check",
        description: "detector overlapping the atom region at scales {0, 1, 2, 5} does change survival",
    },
    Preset {
        name: "sweep",
        description: "projective Zeno survival at t = 1 for N = 1, 2, 4, ..., 256 measurements",
    },
    Preset {
        name: "wavezone-check",
        description: "no amplitude returns from the wave zone to the atom region (50 random probes)",
    },
    Preset {
        name: "zeno",
        description: "two-level atom, 10 projective measurements spaced by 0.1",
    },
];

fn field(horizon: f64) -> Value {
    json!({
        "kind": "field", "d": 1.0, "omega": 5.0,
        "kernel": { "kind": "constant", "g0": 1.0 },
        "h": 0.0625, "horizon": horizon
    })
}

fn wave_detector(scale: f64) -> Value {
    json!({
        "x_minus": 1.0, "x_plus": 2.0,
        "dispersion": { "kind": "linear", "velocity": 1.0 },
        "lambda0": 0.1, "n_k": 64, "scale": scale
    })
}

/// The config document behind a preset, before overrides.
pub fn preset(name: &str) -> Option<Value> {
    let two_level = json!({ "kind": "two-level", "omega": 1.0 });
    Some(match name {
        "direct" => json!({
            "experiment": "direct",
            "model": two_level,
            "run": { "t_max": 3.2, "dt": 0.01, "couplings": [0.0, 10.0, 100.0] }
        }),
        "free-decay" => json!({
            "experiment": "free-decay",
            "model": { "kind": "friedrichs", "modes": 400, "coupling": 0.1, "bandwidth": 4.0 },
            "run": { "t_max": 60.0, "dt": 0.1 },
            "output": { "log_scale": true }
        }),
        "indirect" => json!({
            "experiment": "indirect",
            "model": field(8.0),
            "detector": wave_detector(10.0),
            "run": { "t_max": 8.0 }
        }),
        "intertwine-check" => json!({
            "experiment": "intertwine-check",
            "model": field(16.0),
            "detector": wave_detector(10.0),
            "run": { "steps": 200, "probes": 4, "reach": 6, "seed": 1 },
            "output": { "log_scale": true }
        }),
        "nogo-check" => json!({
            "experiment": "nogo-check",
            "model": field(8.0),
            "detector": wave_detector(10.0),
            "run": { "t_max": 8.0, "scales": [0.0, 1.0, 10.0, 100.0] }
        }),
        "semidirect-check" => json!({
            "experiment": "semidirect-check",
            "model": field(8.0),
            "detector": { "x_minus": 0.0, "x_plus": 1.0, "semidirect": true },
            "run": { "t_max": 8.0, "scales": [0.0, 1.0, 2.0, 5.0] }
        }),
        "sweep" => json!({
            "experiment": "sweep",
            "model": two_level,
            "run": { "t_max": 1.0, "steps_list": [1, 2, 4, 8, 16, 32, 64, 128, 256] }
        }),
        "wavezone-check" => json!({
            "experiment": "wavezone-check",
            "model": field(16.0),
            "detector": wave_detector(10.0),
            "run": { "steps": 200, "probes": 50, "reach": 8, "seed": 1 },
            "output": { "log_scale": true }
        }),
        "zeno" => json!({
            "experiment": "zeno",
            "model": two_level,
            "run": { "dt": 0.1, "steps": 10 }
        }),
        _ => return None,
    })
}

/// Text listing, one preset per line.
pub fn list_presets() -> String {
    let width = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
    PRESETS
        .iter()
        .map(|p| format!("{:width$}  {}\n", p.name, p.description))
        .collect()
}

pub fn list_presets_json() -> String {
    serde_json::to_string_pretty(&json!({ "presets": PRESETS })).expect("static data serializes")
}

/// Apply `path=value` to a config document. `path` is dotted
/// (`run.steps`, `detector.scale`); `value` is parsed as JSON and falls
/// back to a plain string, so `experiment=zeno` works unquoted.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let err = |message: String| ConfigError { line: None, message };
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| err(format!("override `{spec}` is not of the form path=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(err(format!("override `{spec}` has an empty path segment")));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let (last, parents) = keys.split_last().expect("split yields one segment");
    let mut node = doc;
    for k in parents {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| err(format!("override `{path}`: `{k}` is not inside an object")))?;
        node = obj.entry(k.to_string()).or_insert_with(|| json!({}));
    }
    match node {
        Value::Object(obj) => {
            obj.insert(last.to_string(), value);
            Ok(())
        }
        _ => Err(err(format!("override `{path}`: parent of `{last}` is not an object"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{Experiment, ExperimentConfig};

    #[test]
    fn presets_are_sorted_unique_and_cover_every_experiment() {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
        for e in Experiment::ALL {
            assert!(names.contains(&e.name()), "{e}");
        }
    }

    #[test]
    fn every_preset_validates_and_names_its_experiment() {
        for p in PRESETS {
            let cfg = ExperimentConfig::from_value(preset(p.name).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(cfg.experiment.name(), p.name);
        }
    }

    #[test]
    fn overrides() {
        let mut doc = preset("zeno").unwrap();
        apply_override(&mut doc, "run.steps=20").unwrap();
        apply_override(&mut doc, "model.omega=0.5").unwrap();
        apply_override(&mut doc, "output.formats=[\"csv\"]").unwrap();
        let cfg = ExperimentConfig::from_value(doc.clone()).unwrap();
        assert_eq!(cfg.run.steps, Some(20));
        apply_override(&mut doc, "experiment=sweep").unwrap();
        assert_eq!(doc["experiment"], "sweep");
        assert!(apply_override(&mut doc, "run.steps").is_err());
        assert!(apply_override(&mut doc, "run.steps.x=1").is_err());
    }
}
