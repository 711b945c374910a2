use rayon::prelude::*;
use serde::Serialize;

use super::{build_field_model, DetectorConfig, FieldModel, FieldModelConfig, FieldState};
use crate::analysis::{compare_survival, SeriesMeta, SurvivalSeries};
use crate::error::{config, contract, Result};

/// Tolerance for `s_g(t) = s_0(t)` under a purely indirect detector.
pub const NOGO_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RunResult {
    pub series: SurvivalSeries,
    /// Detector population at each sample time.
    pub detector_population: Vec<f64>,
    pub final_state: FieldState,
    /// `max_t |‖ψ(t)‖² − 1|` over every step.
    pub norm_drift: f64,
}

fn steps_for(model: &FieldModel, horizon: f64) -> Result<usize> {
    if !(horizon >= 0.0) {
        return contract(format!("run horizon must be nonnegative, got {horizon}"));
    }
    if horizon > model.horizon() + 1e-9 * model.dt() {
        return config(format!(
            "requested T = {horizon} exceeds the model horizon {}; rebuild with a larger horizon",
            model.horizon()
        ));
    }
    Ok((horizon / model.dt() + 1e-9).floor() as usize)
}

/// Evolve `|e⟩` to `horizon`, sampling `|C(t)|²` every `sample_every` steps.
pub fn run_experiment(model: &FieldModel, horizon: f64, sample_every: usize) -> Result<RunResult> {
    if sample_every == 0 {
        return contract("sample_every must be positive");
    }
    let steps = steps_for(model, horizon)?;
    let mut state = model.init_excited();
    let mut times = vec![0.0];
    let mut values = vec![state.survival()];
    let mut detector_population = vec![0.0];
    let mut norm_drift: f64 = 0.0;
    for n in 1..=steps {
        model.step(&mut state)?;
        norm_drift = norm_drift.max((state.norm_sqr() - 1.0).abs());
        if n % sample_every == 0 {
            times.push(state.time());
            values.push(state.survival());
            detector_population.push(state.detector_population());
        }
    }
    let cfg = model.config();
    let mut meta = SeriesMeta::new("field", model.detector().map_or(0.0, |d| d.config.scale))
        .with("d", cfg.d)
        .with("omega", cfg.omega)
        .with("g0", cfg.kernel.amplitude())
        .with("h", cfg.h)
        .with("c", cfg.c);
    if let Some(d) = model.detector() {
        meta = meta.with("x_minus", d.x_minus).with("x_plus", d.x_plus);
    }
    Ok(RunResult {
        series: SurvivalSeries::new(times, values, meta)?,
        detector_population,
        final_state: state,
        norm_drift,
    })
}

/// `max_{probe, k ≤ n_steps} ‖P_C step^k probe‖` for wave-zone probes.
pub fn wavezone_leakage(model: &FieldModel, n_steps: usize, probes: &[FieldState]) -> Result<f64> {
    Ok(wavezone_leakage_profile(model, n_steps, probes)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-step leakage `max_probe ‖P_C step^k probe‖`, `k = 1..=n_steps`.
pub fn wavezone_leakage_profile(model: &FieldModel, n_steps: usize, probes: &[FieldState]) -> Result<Vec<f64>> {
    let partition = model.partition();
    for (idx, probe) in probes.iter().enumerate() {
        if !partition.is_wave_supported(probe) {
            return contract(format!("probe {idx} has core-zone amplitude"));
        }
    }
    let mut profile = vec![0.0f64; n_steps];
    for probe in probes {
        let mut s = probe.clone();
        for slot in profile.iter_mut() {
            model.step(&mut s)?;
            *slot = slot.max(s.core_norm());
        }
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NogoEntry {
    pub scale: f64,
    pub max_deviation: f64,
    pub at_time: f64,
    pub rms_deviation: f64,
    pub final_detector_population: f64,
    pub norm_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NogoReport {
    pub entries: Vec<NogoEntry>,
    pub tolerance: f64,
    /// `true` iff every scale leaves `s(t)` unchanged within `tolerance`.
    pub invariant: bool,
    pub baseline_norm_drift: f64,
    #[serde(skip)]
    pub baseline: SurvivalSeries,
    #[serde(skip)]
    pub series: Vec<SurvivalSeries>,
}

impl NogoReport {
    pub fn max_deviation(&self) -> f64 {
        self.entries.iter().map(|e| e.max_deviation).fold(0.0, f64::max)
    }

    pub fn entry(&self, scale: f64) -> Option<&NogoEntry> {
        self.entries.iter().find(|e| e.scale == scale)
    }
}

fn sweep(cfg: &FieldModelConfig, det: &DetectorConfig, scales: &[f64], horizon: f64) -> Result<NogoReport> {
    if scales.is_empty() {
        return contract("scale list must be non-empty");
    }
    let baseline_model = build_field_model(cfg, Some(&det.with_scale(0.0)))?;
    let baseline = run_experiment(&baseline_model, horizon, 1)?;
    let runs: Vec<RunResult> = scales
        .par_iter()
        .map(|&scale| {
            let model = build_field_model(cfg, Some(&det.with_scale(scale)))?;
            run_experiment(&model, horizon, 1)
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(scales.len());
    for (&scale, run) in scales.iter().zip(&runs) {
        let cmp = compare_survival(&run.series, &baseline.series)?;
        entries.push(NogoEntry {
            scale,
            max_deviation: cmp.max_abs,
            at_time: cmp.at_time,
            rms_deviation: cmp.rms,
            final_detector_population: run.final_state.detector_population(),
            norm_drift: run.norm_drift,
        });
    }
    let invariant = entries.iter().all(|e| e.max_deviation <= NOGO_TOL);
    Ok(NogoReport {
        entries,
        tolerance: NOGO_TOL,
        invariant,
        baseline_norm_drift: baseline.norm_drift,
        baseline: baseline.series,
        series: runs.into_iter().map(|r| r.series).collect(),
    })
}

/// Survival under a purely indirect detector at each coupling scale,
/// compared against the uncoupled run.
pub fn nogo_sweep(cfg: &FieldModelConfig, det: &DetectorConfig, scales: &[f64], horizon: f64) -> Result<NogoReport> {
    if det.semidirect || !det.in_wave_zone(cfg.d) {
        return config(format!(
            "nogo_sweep needs a wave-zone detector (x_minus > d/2 = {}, semidirect unset); \
             use semidirect_control for overlapping detectors",
            cfg.d / 2.0
        ));
    }
    sweep(cfg, det, scales, horizon)
}

/// The same sweep with a detector that reaches into the atom region, which
/// breaks `P_W H_m P_W = H_m` and is expected to change `s(t)`.
pub fn semidirect_control(
    cfg: &FieldModelConfig,
    det_overlapping: &DetectorConfig,
    scales: &[f64],
    horizon: f64,
) -> Result<NogoReport> {
    if det_overlapping.in_wave_zone(cfg.d) {
        return contract(format!(
            "semidirect control needs a detector overlapping the atom (x_minus < d/2 = {})",
            cfg.d / 2.0
        ));
    }
    let det = DetectorConfig {
        semidirect: true,
        ..*det_overlapping
    };
    sweep(cfg, &det, scales, horizon)
}
