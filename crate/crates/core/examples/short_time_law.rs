//! `1 − s(t) ≈ α t²` at short times, with `α = ⟨e|H_i²|e⟩`.

use zeno_lab::analysis::fit_short_time;
use zeno_lab::field_model::{build_field_model, run_experiment, FieldModelConfig};
use zeno_lab::matrix_models::{build_two_level, survival_series};

fn main() -> zeno_lab::Result<()> {
    let atom = build_two_level(1.0)?;
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 5e-4).collect();
    let fit = fit_short_time(&survival_series(&atom, 0.0, &grid)?, (0.0, 1e-2))?;
    println!("two-level: α = {:.6}, p = {:.4} (exact α = 1)", fit.estimate, fit.exponent.unwrap_or(f64::NAN));

    // the field model needs h ≪ d to resolve the t² regime
    let cfg = FieldModelConfig { h: 1.0 / 2048.0, horizon: 8.0 / 2048.0, ..Default::default() };
    let model = build_field_model(&cfg, None)?;
    let run = run_experiment(&model, cfg.horizon, 1)?;
    let fit = fit_short_time(&run.series, (0.0, cfg.horizon))?;
    println!(
        "field:     α = {:.6}, p = {:.4} (g0²d² = {})",
        fit.estimate,
        fit.exponent.unwrap_or(f64::NAN),
        cfg.continuum_alpha().unwrap_or(f64::NAN)
    );
    Ok(())
}
