//! Continuous measurement `g·|1⟩⟨1|` on a two-level atom: the larger `g`,
//! the less the survival dips.

use std::f64::consts::PI;

use zeno_lab::matrix_models::{build_two_level, survival_series};

fn main() -> zeno_lab::Result<()> {
    let omega = 1.0;
    let atom = build_two_level(omega)?;
    for g in [0.0, 1.0, 10.0, 100.0] {
        let w = (omega * omega + g * g / 4.0).sqrt();
        let grid: Vec<f64> = (0..=200).map(|k| k as f64 * PI / w / 200.0).collect();
        let s = survival_series(&atom, g, &grid)?;
        println!(
            "g = {g:>5}: min s over one period = {:.6} (oracle {:.6})",
            s.min_value(),
            1.0 - omega * omega / (w * w)
        );
    }
    Ok(())
}
