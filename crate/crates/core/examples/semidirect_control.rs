//! Move the detector into the atom region and the survival does change.

use zeno_lab::field_model::{semidirect_control, DetectorConfig, FieldModelConfig};

fn main() -> zeno_lab::Result<()> {
    let cfg = FieldModelConfig::default();
    let rep = semidirect_control(&cfg, &DetectorConfig::overlapping(0.0, 1.0), &[0.0, 1.0, 2.0, 5.0], cfg.horizon)?;
    for (e, s) in rep.entries.iter().zip(&rep.series) {
        println!(
            "scale {:>3}: s(T) = {:.6}, max |Δs| = {:.3e} at t = {:.3}",
            e.scale,
            s.last().1,
            e.max_deviation,
            e.at_time
        );
    }
    Ok(())
}
