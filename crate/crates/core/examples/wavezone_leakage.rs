//! Amplitude placed in the wave zone never reaches the atom region.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeno_lab::field_model::{build_field_model, wavezone_leakage_profile, DetectorConfig, FieldModelConfig};

fn main() -> zeno_lab::Result<()> {
    let cfg = FieldModelConfig { horizon: 16.0, ..Default::default() };
    let model = build_field_model(&cfg, Some(&DetectorConfig::wave_zone(1.0, 2.0).with_scale(10.0)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let probes = (0..20)
        .map(|_| model.random_probe(&mut rng, 8, true))
        .collect::<zeno_lab::Result<Vec<_>>>()?;
    let profile = wavezone_leakage_profile(&model, 200, &probes)?;
    let worst = profile.iter().copied().fold(0.0, f64::max);
    println!("{} probes, {} steps: max core norm = {worst:e}", probes.len(), profile.len());
    Ok(())
}
