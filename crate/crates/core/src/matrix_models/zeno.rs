use serde::Serialize;

use super::ToyModel;
use crate::analysis::{SeriesMeta, SurvivalSeries};
use crate::error::{contract, Result};
use crate::linops::unitary_matrix;

/// Relative tolerance on `N·Δt = t`.
const CONSISTENCY_TOL: f64 = 1e-12;

/// Schedule for `N` equally spaced measurements over a total time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZenoRunSpec {
    pub total_time: f64,
    pub interval: f64,
    pub steps: usize,
    pub coupling: f64,
}

impl ZenoRunSpec {
    pub fn new(total_time: f64, interval: f64, steps: usize, coupling: f64) -> Result<Self> {
        if !(total_time > 0.0 && interval > 0.0) || steps == 0 {
            return contract("Zeno run needs t > 0, Δt > 0 and N ≥ 1");
        }
        if !coupling.is_finite() {
            return contract("Zeno run coupling must be finite");
        }
        let mismatch = (steps as f64 * interval - total_time).abs();
        if mismatch > CONSISTENCY_TOL * total_time.max(1.0) {
            return contract(format!(
                "inconsistent schedule: N·Δt = {} but t = {total_time}",
                steps as f64 * interval
            ));
        }
        Ok(Self {
            total_time,
            interval,
            steps,
            coupling,
        })
    }

    /// `N` measurements spread evenly over `total_time`.
    pub fn over(total_time: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return contract("Zeno run needs N ≥ 1");
        }
        Self::new(total_time, total_time / steps as f64, steps, 0.0)
    }

    /// `N` measurements separated by `interval`.
    pub fn every(interval: f64, steps: usize) -> Result<Self> {
        Self::new(interval * steps as f64, interval, steps, 0.0)
    }
}

/// `s_g(t) = |⟨e|e^{−i(H + gH_m)t}|e⟩|²` on `t_grid`.
///
/// A leading `t = 0` sample is inserted when the grid does not start there.
pub fn survival_series(model: &ToyModel, g: f64, t_grid: &[f64]) -> Result<SurvivalSeries> {
    if t_grid.is_empty() {
        return contract("time grid must be non-empty");
    }
    if t_grid.iter().any(|&t| !(t >= 0.0)) {
        return contract("time grid must be nonnegative");
    }
    let mut times = Vec::with_capacity(t_grid.len() + 1);
    if t_grid[0] != 0.0 {
        times.push(0.0);
    }
    times.extend_from_slice(t_grid);

    let spectral = model.total_hamiltonian(g).spectral()?;
    let e = model.excited_index();
    let values = times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(1.0)
            } else {
                Ok(spectral.return_amplitude(e, t)?.norm_sqr())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SurvivalSeries::new(times, values, meta(model, g))
}

/// Ideal repeated projective measurement of `|e⟩`: evolve for `Δt`, multiply
/// the running survival by `|⟨e|ψ⟩|²`, reset to `|e⟩`. Returns `N + 1`
/// samples at `t = nΔt`.
pub fn projective_zeno(model: &ToyModel, spec: &ZenoRunSpec) -> Result<SurvivalSeries> {
    let step = unitary_matrix(&model.total_hamiltonian(spec.coupling), spec.interval)?;
    let e = model.excited_state();
    let mut times = Vec::with_capacity(spec.steps + 1);
    let mut values = Vec::with_capacity(spec.steps + 1);
    times.push(0.0);
    values.push(1.0);
    let mut survival = 1.0;
    for n in 1..=spec.steps {
        let psi = step.apply(&e)?;
        survival *= psi[model.excited_index()].norm_sqr();
        times.push(n as f64 * spec.interval);
        values.push(survival);
    }
    let meta = meta(model, spec.coupling)
        .with("interval", spec.interval)
        .with("measurements", spec.steps as f64);
    SurvivalSeries::new(times, values, meta)
}

fn meta(model: &ToyModel, g: f64) -> SeriesMeta {
    use super::ToyKind;
    match *model.kind() {
        ToyKind::TwoLevel { omega } => SeriesMeta::new("two-level", g).with("omega", omega),
        ToyKind::Friedrichs {
            modes,
            coupling,
            bandwidth,
        } => SeriesMeta::new("friedrichs", g)
            .with("modes", modes as f64)
            .with("coupling", coupling)
            .with("bandwidth", bandwidth),
        ToyKind::DecoupledBlocks { core_dim, wave_dim } => SeriesMeta::new("decoupled-blocks", g)
            .with("core_dim", core_dim as f64)
            .with("wave_dim", wave_dim as f64),
        ToyKind::Custom => SeriesMeta::new("custom", g).with("dim", model.dim() as f64),
    }
}
