//! `P_C U_g^k = P_C U_0^k`: the core block of the evolution does not see
//! the detector coupling, for the field model and a decoupled toy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeno_lab::field_model::{build_field_model, DetectorConfig, FieldModelConfig};
use zeno_lab::linops::unitary_matrix;
use zeno_lab::matrix_models::{build_decoupled_blocks, verify_intertwining};

fn main() -> zeno_lab::Result<()> {
    let cfg = FieldModelConfig { horizon: 16.0, ..Default::default() };
    let det = DetectorConfig::wave_zone(1.0, 2.0);
    let u0 = build_field_model(&cfg, Some(&det.with_scale(0.0)))?;
    let ug = build_field_model(&cfg, Some(&det.with_scale(10.0)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let probes = (0..3)
        .map(|_| u0.random_probe(&mut rng, 6, false).map(|p| p.to_vector()))
        .collect::<zeno_lab::Result<Vec<_>>>()?;
    let core = u0.partition().core_projector();
    let rep = verify_intertwining(&ug.step_map(), &u0.step_map(), core, 200, &probes, 1e-10)?;
    println!("field model: max deviation {:e} over {} steps, passed {}", rep.max_deviation, rep.steps, rep.passed);

    let toy = build_decoupled_blocks(4, 6)?;
    let core = toy.core_projector().expect("decoupled blocks have a core");
    let ug = unitary_matrix(&toy.total_hamiltonian(50.0), 0.1)?;
    let u0 = unitary_matrix(&toy.total_hamiltonian(0.0), 0.1)?;
    let probes: Vec<_> = (0..toy.dim())
        .map(|i| zeno_lab::linops::ComplexVector::basis(toy.dim(), i))
        .collect::<zeno_lab::Result<_>>()?;
    let rep = verify_intertwining(&ug, &u0, &core, 200, &probes, 1e-12)?;
    println!("decoupled blocks: max deviation {:e}, passed {}", rep.max_deviation, rep.passed);
    Ok(())
}
