use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Experiment, ExperimentConfig, ModelSpec};
use crate::analysis::{compare_survival, fit_exponential, fit_short_time, FitReport, SurvivalSeries};
use crate::error::{config, Result};
use crate::field_model::{
    build_field_model, nogo_sweep, run_experiment, semidirect_control, wavezone_leakage_profile, FieldModel,
    FieldModelConfig, NogoReport, NOGO_TOL,
};
use crate::linops::{unitary_matrix, ComplexVector};
use crate::matrix_models::{projective_zeno, survival_series, verify_intertwining, ToyKind, ToyModel, ZenoRunSpec};

/// Total-norm drift allowed over a run.
pub const NORM_TOL: f64 = 1e-9;
/// Detector population that counts as "a measurement happened".
pub const DETECTION_FLOOR: f64 = 1e-4;
/// Deviation the semidirect control must exceed.
pub const SEMIDIRECT_FLOOR: f64 = 1e-3;
pub const LEAKAGE_TOL: f64 = 1e-13;
pub const FIELD_INTERTWINING_TOL: f64 = 1e-10;
pub const TOY_INTERTWINING_TOL: f64 = 1e-12;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const RABI_TOL: f64 = 1e-9;
pub const GOLDEN_RULE_REL_TOL: f64 = 0.05;

const DEFAULT_SCALES: [f64; 4] = [0.0, 1.0, 10.0, 100.0];
const DEFAULT_SEMIDIRECT_SCALES: [f64; 4] = [0.0, 1.0, 2.0, 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Above,
}

/// One pass/fail verdict with its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => value <= bound,
            Relation::AtLeast => value >= bound,
            Relation::Above => value > bound,
        };
        Self { name: name.into(), value, relation, bound, passed }
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, Relation::AtLeast, 1.0)
    }
}

/// Columns of `survival.csv`; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn from_series(first: &str, times: &[f64], columns: Vec<(String, Vec<f64>)>) -> Self {
        let mut names = vec![first.to_string()];
        names.extend(columns.iter().map(|(n, _)| n.clone()));
        let rows = times
            .iter()
            .enumerate()
            .map(|(i, &t)| std::iter::once(t).chain(columns.iter().map(|(_, v)| v[i])).collect())
            .collect();
        Self { columns: names, rows }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: Experiment,
    pub model: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub fits: BTreeMap<String, FitReport>,
    pub metrics: BTreeMap<String, f64>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub summary: Summary,
}

struct Builder {
    checks: Vec<Check>,
    fits: BTreeMap<String, FitReport>,
    metrics: BTreeMap<String, f64>,
}

impl Builder {
    fn new() -> Self {
        Self { checks: vec![], fits: BTreeMap::new(), metrics: BTreeMap::new() }
    }

    fn metric(&mut self, k: impl Into<String>, v: f64) {
        self.metrics.insert(k.into(), v);
    }

    fn finish(self, cfg: &ExperimentConfig, table: Table) -> Outcome {
        let passed = self.checks.iter().all(|c| c.passed);
        Outcome {
            table,
            summary: Summary {
                experiment: cfg.experiment,
                model: cfg.model.kind(),
                passed,
                checks: self.checks,
                fits: self.fits,
                metrics: self.metrics,
                config: cfg.clone(),
            },
        }
    }
}

fn uniform_grid(t_max: f64, dt: f64) -> Vec<f64> {
    let n = (t_max / dt + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * dt).collect()
}

fn label(prefix: &str, x: f64) -> String {
    format!("{prefix}={x}")
}

/// Run a validated config. Errors are numeric or horizon failures.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match (cfg.experiment, &cfg.model) {
        (Experiment::FreeDecay, ModelSpec::Field(fc)) => field_free_decay(cfg, fc),
        (Experiment::FreeDecay, _) => toy_free_decay(cfg, &toy(cfg)?),
        (Experiment::Zeno, _) => zeno(cfg, &toy(cfg)?),
        (Experiment::Direct, _) => direct(cfg, &toy(cfg)?),
        (Experiment::Sweep, _) => sweep(cfg, &toy(cfg)?),
        (Experiment::Indirect, ModelSpec::Field(fc)) => indirect(cfg, fc),
        (Experiment::NogoCheck, ModelSpec::Field(fc)) => {
            let scales = cfg.run.scales.clone().unwrap_or(DEFAULT_SCALES.to_vec());
            let rep = nogo_sweep(fc, cfg.detector.as_ref().expect("validated"), &scales, t_max(cfg, fc))?;
            Ok(scale_report(cfg, rep, false))
        }
        (Experiment::SemidirectCheck, ModelSpec::Field(fc)) => {
            let scales = cfg.run.scales.clone().unwrap_or(DEFAULT_SEMIDIRECT_SCALES.to_vec());
            let rep = semidirect_control(fc, cfg.detector.as_ref().expect("validated"), &scales, t_max(cfg, fc))?;
            Ok(scale_report(cfg, rep, true))
        }
        (Experiment::WavezoneCheck, ModelSpec::Field(fc)) => wavezone(cfg, fc),
        (Experiment::IntertwineCheck, ModelSpec::Field(fc)) => field_intertwining(cfg, fc),
        (Experiment::IntertwineCheck, _) => toy_intertwining(cfg, &toy(cfg)?),
        _ => config(format!("experiment `{}` does not apply to model `{}`", cfg.experiment, cfg.model.kind())),
    }
}

fn toy(cfg: &ExperimentConfig) -> Result<ToyModel> {
    cfg.model.toy().expect("validated toy model")
}

fn t_max(cfg: &ExperimentConfig, fc: &FieldModelConfig) -> f64 {
    cfg.run.t_max.unwrap_or(fc.horizon)
}

fn toy_free_decay(cfg: &ExperimentConfig, m: &ToyModel) -> Result<Outcome> {
    let r = &cfg.run;
    let (t_max, dt) = (r.t_max.expect("validated"), r.dt.expect("validated"));
    let s = survival_series(m, 0.0, &uniform_grid(t_max, dt))?;
    let mut b = Builder::new();
    b.metric("alpha_second_moment", m.short_time_alpha());
    short_time_fit(&mut b, &s, r.short_window.unwrap_or([0.0, 8.0 * dt]));
    match *m.kind() {
        ToyKind::TwoLevel { omega } => {
            let dev = s.iter().map(|(t, v)| (v - (omega * t).cos().powi(2)).abs()).fold(0.0, f64::max);
            b.checks.push(Check::new("closed_form_cos2_max_abs", dev, Relation::AtMost, CLOSED_FORM_TOL));
        }
        ToyKind::Friedrichs { .. } => {
            let gamma = m.golden_rule_rate().expect("friedrichs has a rate");
            b.metric("golden_rule_rate", gamma);
            let [lo, hi] = r.fit_window.unwrap_or([0.5 / gamma, 3.0 / gamma]);
            let fit = fit_exponential(&s, (lo, hi))?;
            b.checks.push(Check::new(
                "golden_rule_rel_dev",
                (fit.estimate / gamma - 1.0).abs(),
                Relation::AtMost,
                GOLDEN_RULE_REL_TOL,
            ));
            b.checks.push(Check::holds("exponential_fit_ok", fit.is_ok()));
            b.fits.insert("exponential".into(), fit);
        }
        _ => {
            if let Some([lo, hi]) = r.fit_window {
                b.fits.insert("exponential".into(), fit_exponential(&s, (lo, hi))?);
            }
        }
    }
    let table = Table::from_series("t", s.times(), vec![("s".into(), s.values().to_vec())]);
    Ok(b.finish(cfg, table))
}

fn short_time_fit(b: &mut Builder, s: &SurvivalSeries, [lo, hi]: [f64; 2]) {
    if let Ok(fit) = fit_short_time(s, (lo, hi)) {
        b.fits.insert("short_time".into(), fit);
    }
}

fn field_free_decay(cfg: &ExperimentConfig, fc: &FieldModelConfig) -> Result<Outcome> {
    let r = &cfg.run;
    let m = build_field_model(fc, None)?;
    let every = r.sample_every.unwrap_or(1);
    let t_end = t_max(cfg, fc);
    let run = run_experiment(&m, t_end, every)?;
    let mut b = Builder::new();
    b.metric("alpha_second_moment", m.second_moment());
    if let Some(a) = fc.continuum_alpha() {
        b.metric("alpha_continuum", a);
    }
    let sample_dt = m.dt() * every as f64;
    short_time_fit(&mut b, &run.series, r.short_window.unwrap_or([0.0, 8.0 * sample_dt]));
    let [lo, hi] = r.fit_window.unwrap_or([t_end / 4.0, t_end]);
    b.fits.insert("exponential".into(), fit_exponential(&run.series, (lo, hi))?);
    b.checks.push(Check::new("norm_drift", run.norm_drift, Relation::AtMost, NORM_TOL));
    b.checks.push(Check::new("escaped_norm", run.final_state.escaped_norm(), Relation::AtMost, 0.0));
    let table = Table::from_series("t", run.series.times(), vec![("s".into(), run.series.values().to_vec())]);
    Ok(b.finish(cfg, table))
}

fn zeno(cfg: &ExperimentConfig, m: &ToyModel) -> Result<Outcome> {
    let r = &cfg.run;
    let n = r.steps.expect("validated");
    let spec = match r.dt {
        Some(dt) => ZenoRunSpec::every(dt, n)?,
        None => ZenoRunSpec::over(r.t_max.expect("validated"), n)?,
    };
    let s = projective_zeno(m, &spec)?;
    let mut b = Builder::new();
    let alpha = m.short_time_alpha();
    let (t, s_n) = s.last();
    b.metric("s_final", s_n);
    b.metric("exp_form", (-alpha * t * spec.interval).exp());
    b.metric("exp_form_rel_dev", (s_n / (-alpha * t * spec.interval).exp() - 1.0).abs());
    b.checks.push(Check::holds("nonincreasing", s.values().windows(2).all(|w| w[1] <= w[0])));
    if let ToyKind::TwoLevel { omega } = *m.kind() {
        let closed = (omega * spec.interval).cos().powi(2 * n as i32);
        b.checks.push(Check::new("closed_form_abs_dev", (s_n - closed).abs(), Relation::AtMost, CLOSED_FORM_TOL));
    }
    let table = Table::from_series("t", s.times(), vec![("s".into(), s.values().to_vec())]);
    Ok(b.finish(cfg, table))
}

fn rabi(omega: f64, g: f64, t: f64) -> f64 {
    let w2 = omega * omega + g * g / 4.0;
    1.0 - omega * omega / w2 * (w2.sqrt() * t).sin().powi(2)
}

fn direct(cfg: &ExperimentConfig, m: &ToyModel) -> Result<Outcome> {
    let r = &cfg.run;
    let grid = uniform_grid(r.t_max.expect("validated"), r.dt.expect("validated"));
    let couplings = r.couplings.clone().expect("validated");
    let runs: Vec<SurvivalSeries> = couplings.iter().map(|&g| survival_series(m, g, &grid)).collect::<Result<_>>()?;
    let mut b = Builder::new();
    for (&g, s) in couplings.iter().zip(&runs) {
        b.metric(format!("min_s[g={g}]"), s.min_value());
        if let ToyKind::TwoLevel { omega } = *m.kind() {
            let dev = s.iter().map(|(t, v)| (v - rabi(omega, g, t)).abs()).fold(0.0, f64::max);
            b.checks.push(Check::new(format!("rabi_oracle_max_abs[g={g}]"), dev, Relation::AtMost, RABI_TOL));
        }
    }
    if matches!(m.kind(), ToyKind::TwoLevel { .. }) {
        let mut by_g: Vec<(f64, f64)> = couplings.iter().copied().zip(runs.iter().map(|s| s.min_value())).collect();
        by_g.sort_by(|a, b| a.0.total_cmp(&b.0));
        b.checks.push(Check::holds("min_survival_grows_with_g", by_g.windows(2).all(|w| w[1].1 >= w[0].1)));
    }
    let cols = couplings.iter().zip(&runs).map(|(&g, s)| (label("s_g", g), s.values().to_vec())).collect();
    Ok(b.finish(cfg, Table::from_series("t", &grid, cols)))
}

fn sweep(cfg: &ExperimentConfig, m: &ToyModel) -> Result<Outcome> {
    let r = &cfg.run;
    let t = r.t_max.unwrap_or(1.0);
    let counts = r.steps_list.clone().unwrap_or_else(|| (0..=8).map(|k| 1 << k).collect());
    let alpha = m.short_time_alpha();
    let mut b = Builder::new();
    let mut rows = Vec::with_capacity(counts.len());
    let mut closed_dev: f64 = 0.0;
    let mut bound_ok = true;
    for &n in &counts {
        let s_n = projective_zeno(m, &ZenoRunSpec::over(t, n)?)?.last().1;
        if let ToyKind::TwoLevel { omega } = *m.kind() {
            closed_dev = closed_dev.max((s_n - (omega * t / n as f64).cos().powi(2 * n as i32)).abs());
        }
        if n >= 8 {
            bound_ok &= s_n >= 1.0 - 1.1 * alpha * t * t / n as f64;
        }
        rows.push(vec![n as f64, t / n as f64, s_n]);
    }
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]));
    b.checks.push(Check::holds("nondecreasing_in_n", sorted.windows(2).all(|w| w[1][2] >= w[0][2])));
    b.checks.push(Check::holds("freezing_bound", bound_ok));
    if matches!(m.kind(), ToyKind::TwoLevel { .. }) {
        b.checks.push(Check::new("closed_form_abs_dev", closed_dev, Relation::AtMost, CLOSED_FORM_TOL));
    }
    b.metric("s_at_max_n", sorted.last().map_or(f64::NAN, |r| r[2]));
    let table = Table {
        columns: vec!["n".into(), "dt".into(), "s".into()],
        rows,
    };
    Ok(b.finish(cfg, table))
}

fn indirect(cfg: &ExperimentConfig, fc: &FieldModelConfig) -> Result<Outcome> {
    let det = cfg.detector.expect("validated");
    let scale = cfg.run.scale.unwrap_or(det.scale);
    let t_end = t_max(cfg, fc);
    let every = cfg.run.sample_every.unwrap_or(1);
    let base = run_experiment(&build_field_model(fc, Some(&det.with_scale(0.0)))?, t_end, every)?;
    let on = run_experiment(&build_field_model(fc, Some(&det.with_scale(scale)))?, t_end, every)?;
    let cmp = compare_survival(&on.series, &base.series)?;
    let mut b = Builder::new();
    b.metric("final_detector_population", on.final_state.detector_population());
    b.checks.push(Check::new("max_abs_deviation", cmp.max_abs, Relation::AtMost, NOGO_TOL));
    b.checks.push(Check::new("norm_drift", on.norm_drift.max(base.norm_drift), Relation::AtMost, NORM_TOL));
    let table = Table::from_series(
        "t",
        on.series.times(),
        vec![
            ("s".into(), on.series.values().to_vec()),
            ("s_0".into(), base.series.values().to_vec()),
            ("detector_population".into(), on.detector_population.clone()),
        ],
    );
    Ok(b.finish(cfg, table))
}

fn scale_report(cfg: &ExperimentConfig, rep: NogoReport, semidirect: bool) -> Outcome {
    let mut b = Builder::new();
    let drift = rep.entries.iter().map(|e| e.norm_drift).fold(rep.baseline_norm_drift, f64::max);
    for e in &rep.entries {
        b.metric(format!("max_abs_deviation[scale={}]", e.scale), e.max_deviation);
        b.metric(format!("final_detector_population[scale={}]", e.scale), e.final_detector_population);
    }
    if semidirect {
        b.checks.push(Check::new("max_abs_deviation", rep.max_deviation(), Relation::Above, SEMIDIRECT_FLOOR));
    } else {
        b.checks.push(Check::new("max_abs_deviation", rep.max_deviation(), Relation::AtMost, rep.tolerance));
        if rep.entries.iter().any(|e| e.scale != 0.0) {
            let detected = rep
                .entries
                .iter()
                .filter(|e| e.scale != 0.0)
                .map(|e| e.final_detector_population)
                .fold(0.0, f64::max);
            b.checks.push(Check::new("detector_population", detected, Relation::Above, DETECTION_FLOOR));
        }
    }
    b.checks.push(Check::new("norm_drift", drift, Relation::AtMost, NORM_TOL));
    if let Ok(fit) = fit_exponential(&rep.baseline, (rep.baseline.last().0 / 4.0, rep.baseline.last().0)) {
        b.fits.insert("exponential_baseline".into(), fit);
    }
    let cols = std::iter::once(("s".to_string(), rep.baseline.values().to_vec()))
        .chain(rep.entries.iter().zip(&rep.series).map(|(e, s)| (label("s_scale", e.scale), s.values().to_vec())))
        .collect();
    let table = Table::from_series("t", rep.baseline.times(), cols);
    b.finish(cfg, table)
}

/// Probes need room: `steps` of transport plus a possible jump across the detector.
fn probe_model(cfg: &ExperimentConfig, fc: &FieldModelConfig, steps: usize, reach: usize) -> Result<FieldModel> {
    let m = build_field_model(fc, cfg.detector.as_ref())?;
    let jump = m.detector().map_or(0, |d| d.rows.end);
    let need = steps + reach + jump;
    if need > m.grid().horizon_steps {
        return config(format!(
            "model.horizon = {} is too short for {steps} steps with probe reach {reach}; need at least {}",
            fc.horizon,
            need as f64 * m.dt()
        ));
    }
    Ok(m)
}

fn wavezone(cfg: &ExperimentConfig, fc: &FieldModelConfig) -> Result<Outcome> {
    let r = &cfg.run;
    let (steps, reach) = (r.steps.unwrap_or(200), r.reach.unwrap_or(8));
    let m = probe_model(cfg, fc, steps, reach)?;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed.unwrap_or(0));
    let probes = (0..r.probes.unwrap_or(50))
        .map(|_| m.random_probe(&mut rng, reach, true))
        .collect::<Result<Vec<_>>>()?;
    let profile = wavezone_leakage_profile(&m, steps, &probes)?;
    let worst = profile.iter().copied().fold(0.0, f64::max);
    let mut b = Builder::new();
    b.checks.push(Check::new("max_leakage", worst, Relation::AtMost, LEAKAGE_TOL));
    Ok(b.finish(cfg, profile_table(m.dt(), "leakage", profile)))
}

fn profile_table(dt: f64, name: &str, profile: Vec<f64>) -> Table {
    let times: Vec<f64> = (1..=profile.len()).map(|k| k as f64 * dt).collect();
    Table::from_series("t", &times, vec![(name.into(), profile)])
}

fn field_intertwining(cfg: &ExperimentConfig, fc: &FieldModelConfig) -> Result<Outcome> {
    let r = &cfg.run;
    let (steps, reach) = (r.steps.unwrap_or(200), r.reach.unwrap_or(6));
    let det = cfg.detector.expect("validated");
    let scale = r.scale.unwrap_or(det.scale);
    let u0 = probe_model(cfg, fc, steps, reach)?;
    let cfg_g = ExperimentConfig { detector: Some(det.with_scale(scale)), ..cfg.clone() };
    let ug = probe_model(&cfg_g, fc, steps, reach)?;
    let base = ExperimentConfig { detector: Some(det.with_scale(0.0)), ..cfg.clone() };
    let u0 = if det.scale == 0.0 { u0 } else { probe_model(&base, fc, steps, reach)? };
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed.unwrap_or(0));
    let probes = (0..r.probes.unwrap_or(4))
        .map(|_| u0.random_probe(&mut rng, reach, false).map(|p| p.to_vector()))
        .collect::<Result<Vec<_>>>()?;
    let rep = verify_intertwining(
        &ug.step_map(),
        &u0.step_map(),
        u0.partition().core_projector(),
        steps,
        &probes,
        FIELD_INTERTWINING_TOL,
    )?;
    let mut b = Builder::new();
    b.checks.push(Check::new("max_core_deviation", rep.max_deviation, Relation::AtMost, rep.tolerance));
    Ok(b.finish(cfg, profile_table(u0.dt(), "core_deviation", rep.profile)))
}

fn toy_intertwining(cfg: &ExperimentConfig, m: &ToyModel) -> Result<Outcome> {
    let r = &cfg.run;
    let dt = r.dt.unwrap_or(0.1);
    let g = r.scale.unwrap_or(10.0);
    let core = m.core_projector().expect("validated decoupled model");
    let ug = unitary_matrix(&m.total_hamiltonian(g), dt)?;
    let u0 = unitary_matrix(&m.total_hamiltonian(0.0), dt)?;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed.unwrap_or(0));
    let probes = (0..r.probes.unwrap_or(10))
        .map(|_| {
            use rand::Rng;
            let v: Vec<_> = (0..m.dim())
                .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            ComplexVector::new(v)?.normalized()
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = verify_intertwining(&ug, &u0, &core, r.steps.unwrap_or(200), &probes, TOY_INTERTWINING_TOL)?;
    let mut b = Builder::new();
    b.checks.push(Check::new("max_core_deviation", rep.max_deviation, Relation::AtMost, rep.tolerance));
    Ok(b.finish(cfg, profile_table(dt, "core_deviation", rep.profile)))
}
