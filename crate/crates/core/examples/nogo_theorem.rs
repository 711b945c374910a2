//! A detector in the wave zone registers the emitted photon but leaves the
//! survival probability of the atom untouched, whatever its coupling.

use zeno_lab::field_model::{nogo_sweep, DetectorConfig, Dispersion, FieldModelConfig};

fn main() -> zeno_lab::Result<()> {
    let cfg = FieldModelConfig::default();
    for dispersion in [Dispersion::Linear { velocity: 1.0 }, Dispersion::Quadratic { curvature: 0.5 }] {
        let det = DetectorConfig { dispersion, ..DetectorConfig::wave_zone(1.0, 2.0) };
        let rep = nogo_sweep(&cfg, &det, &[0.0, 1.0, 10.0, 100.0], cfg.horizon)?;
        println!("{dispersion:?}");
        for e in &rep.entries {
            println!(
                "  scale {:>5}: max |Δs| = {:.3e}, detector population = {:.4}",
                e.scale, e.max_deviation, e.final_detector_population
            );
        }
        println!("  s(T) = {:.6}, invariant: {}", rep.baseline.last().1, rep.invariant);
    }
    Ok(())
}
