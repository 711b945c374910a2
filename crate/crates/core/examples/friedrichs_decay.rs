//! Exponential decay of a level coupled to a quasi-continuum, and the
//! projected decay rate when measurements are spaced inside the
//! exponential window.

use zeno_lab::analysis::fit_exponential;
use zeno_lab::matrix_models::{build_friedrichs, projective_zeno, survival_series, ZenoRunSpec};

fn main() -> zeno_lab::Result<()> {
    env_logger::init();
    let m = build_friedrichs(400, 0.1, 4.0)?;
    let gamma = m.golden_rule_rate().expect("friedrichs has a rate");
    let grid: Vec<f64> = (0..=600).map(|k| k as f64 * 0.1).collect();
    let free = fit_exponential(&survival_series(&m, 0.0, &grid)?, (0.5 / gamma, 3.0 / gamma))?;
    println!("golden rule Γ = {gamma:.5}");
    println!("free fit      = {:.5} (Z = {:.4}, {:?})", free.estimate, free.prefactor.unwrap_or(f64::NAN), free.quality_flag);

    for dt in [12.0, 24.0, 32.0] {
        let s = projective_zeno(&m, &ZenoRunSpec::every(dt, 12)?)?;
        let fit = fit_exponential(&s, (dt, 12.0 * dt))?;
        println!(
            "Δt = {dt:>4}: projected Γ = {:.5} ({:+.2}% vs free)",
            fit.estimate,
            100.0 * (fit.estimate / free.estimate - 1.0)
        );
    }
    Ok(())
}
