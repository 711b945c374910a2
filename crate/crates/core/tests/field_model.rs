mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeno_lab::analysis::{compare_survival, fit_exponential, fit_short_time};
use zeno_lab::field_model::*;
use zeno_lab::linops::ComplexVector;
use zeno_lab::matrix_models::verify_intertwining;
use zeno_lab::Error;

fn cfg_with(h: f64, horizon: f64) -> FieldModelConfig {
    FieldModelConfig { h, horizon, ..Default::default() }
}

#[test]
fn zero_kernel_is_pure_transport_plus_phase() {
    let cfg = FieldModelConfig {
        kernel: CouplingKernel::Constant { g0: 0.0 },
        horizon: 2.0,
        ..Default::default()
    };
    let m = build_field_model(&cfg, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let before = m.random_probe(&mut rng, 4, false).unwrap();
    let mut after = before.clone();
    m.step(&mut after).unwrap();
    let phase = Complex64::from_polar(1.0, -cfg.omega * m.dt());
    assert!((after.atom_amplitude() - before.atom_amplitude() * phase).norm() < 1e-15);
    let g = *m.grid();
    for i in 0..g.n_r {
        for j in 0..g.n_l {
            let expect = if i == 0 || j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                before.pair_coefficient(i - 1, j - 1)
            };
            assert_eq!(after.pair_coefficient(i, j), expect);
        }
    }

    let mut s = m.init_excited();
    for _ in 0..10 {
        m.step(&mut s).unwrap();
    }
    assert!((s.survival() - 1.0).abs() < 1e-13);
    assert_eq!(s.pair_population(), 0.0);
}

#[test]
fn point_excitation_moves_one_cell_outward() {
    let m = build_field_model(&cfg_with(1.0 / 16.0, 2.0), None).unwrap();
    let n = m.grid().n_core;
    for (i, j) in [(n, 3), (n + 5, n + 2), (2, n + 1)] {
        let mut s = m.zero_state();
        let idx = m.grid().index(i, j);
        s.pair_coefficients_mut()[idx] = Complex64::new(1.0, 0.0);
        m.step(&mut s).unwrap();
        assert_eq!(s.pair_coefficient(i + 1, j + 1), Complex64::new(1.0, 0.0));
        assert_eq!(s.pair_population(), 1.0);
        assert_eq!(s.atom_amplitude(), Complex64::new(0.0, 0.0));
        assert!((m.x_r(i + 1) - m.x_r(i) - m.config().h).abs() < 1e-15);
        assert!((m.x_l(j + 1) - m.x_l(j) + m.config().h).abs() < 1e-15);
    }
}

#[test]
fn init_excited_is_normalized() {
    let m = build_field_model(&FieldModelConfig::default(), Some(&DetectorConfig::default())).unwrap();
    let s = m.init_excited();
    assert_eq!(s.norm_sqr(), 1.0);
    assert_eq!(s.survival(), 1.0);
    assert_eq!(s.time(), 0.0);
    assert!(m.state_dim() > 1);
}

#[test]
fn zero_scale_detector_matches_absent_detector_bitwise() {
    let cfg = FieldModelConfig::default();
    let bare = build_field_model(&cfg, None).unwrap();
    let off = build_field_model(&cfg, Some(&DetectorConfig::default().with_scale(0.0))).unwrap();
    assert!(!off.detector().unwrap().is_coupled());
    let (mut a, mut b) = (bare.init_excited(), off.init_excited());
    let g = *bare.grid();
    for _ in 0..g.horizon_steps {
        bare.step(&mut a).unwrap();
        off.step(&mut b).unwrap();
        assert_eq!(a.atom_amplitude(), b.atom_amplitude());
    }
    for i in 0..g.n_r {
        for j in 0..g.n_l {
            assert_eq!(a.pair_coefficient(i, j), b.pair_coefficient(i, j));
        }
    }
    assert_eq!(b.detector_population(), 0.0);
}

#[test]
fn norm_is_conserved_with_and_without_detector() {
    let cfg = FieldModelConfig::default();
    for det in [None, Some(DetectorConfig::default().with_scale(10.0))] {
        let m = build_field_model(&cfg, det.as_ref()).unwrap();
        let r = run_experiment(&m, 8.0, 4).unwrap();
        assert!(r.norm_drift <= 1e-9, "drift {}", r.norm_drift);
        assert_eq!(r.final_state.escaped_norm(), 0.0);
    }
    let gauss = FieldModelConfig {
        kernel: CouplingKernel::Gaussian { g0: 2.0, sigma: 0.3 },
        ..cfg
    };
    let r = run_experiment(&build_field_model(&gauss, None).unwrap(), 8.0, 1).unwrap();
    assert!(r.norm_drift <= 1e-9);
}

#[test]
fn wave_zone_cells_never_enter_the_core() {
    // exhaustive over every wave-zone basis cell on a coarse grid
    let cfg = FieldModelConfig { h: 0.25, horizon: 2.0, ..Default::default() };
    let det = DetectorConfig { n_k: 8, scale: 10.0, ..DetectorConfig::default() };
    let m = build_field_model(&cfg, Some(&det)).unwrap();
    let part = m.partition();
    let g = *m.grid();
    let dim = m.state_dim();
    let mut checked = 0;
    for idx in 0..dim {
        let region = part.region(idx).unwrap();
        if region.is_core() {
            continue;
        }
        // skip the boundary tripwire cells
        if idx >= 1 && idx <= g.cells() {
            let (i, j) = ((idx - 1) / g.n_l, (idx - 1) % g.n_l);
            if i + BOUNDARY_CELLS >= g.n_r || j + BOUNDARY_CELLS >= g.n_l {
                continue;
            }
        } else if (idx - 1 - g.cells()) % g.n_l + BOUNDARY_CELLS >= g.n_l {
            continue;
        }
        let mut s = m.state_from_vector(&ComplexVector::basis(dim, idx).unwrap()).unwrap();
        m.step(&mut s).unwrap();
        assert_eq!(s.core_norm(), 0.0, "cell {idx} ({region:?}) leaked");
        let allowed: &[Region] = match region {
            Region::Right => &[Region::Right, Region::RightLeft, Region::Measured],
            Region::Left => &[Region::Left, Region::RightLeft],
            Region::RightLeft => &[Region::RightLeft, Region::Measured],
            Region::Measured => &[Region::Measured, Region::Right, Region::RightLeft],
            _ => unreachable!(),
        };
        let v = s.to_vector();
        for (k, z) in v.as_slice().iter().enumerate() {
            if *z != Complex64::new(0.0, 0.0) {
                let r = part.region(k).unwrap();
                assert!(allowed.contains(&r), "{region:?} cell {idx} reached {r:?}");
            }
        }
        checked += 1;
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn leakage_of_random_wave_zone_probes() {
    let steps = 200;
    let reach = 8;
    let cfg = cfg_with(1.0 / 16.0, 16.0);
    let m = build_field_model(&cfg, Some(&DetectorConfig::default().with_scale(10.0))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let probes: Vec<FieldState> = (0..6).map(|_| m.random_probe(&mut rng, reach, true).unwrap()).collect();
    let leak = wavezone_leakage(&m, steps, &probes).unwrap();
    assert!(leak <= 1e-13, "leakage {leak}");

    // far corner, both particles outside
    let mut rl = m.zero_state();
    let n = m.grid().n_core;
    let idx = m.grid().index(n + 2, n + 3);
    rl.pair_coefficients_mut()[idx] = Complex64::new(1.0, 0.0);
    assert_eq!(wavezone_leakage(&m, 50, &[rl]).unwrap(), 0.0);

    let core_probe = m.random_probe(&mut rng, reach, false).unwrap();
    assert!(matches!(wavezone_leakage(&m, 1, &[core_probe]), Err(Error::Contract(_))));
}

#[test]
fn core_restriction_is_independent_of_detector_scale() {
    let cfg = FieldModelConfig::default();
    let m0 = build_field_model(&cfg, Some(&DetectorConfig::default().with_scale(0.0))).unwrap();
    let m1 = build_field_model(&cfg, Some(&DetectorConfig::default().with_scale(100.0))).unwrap();
    let (mut a, mut b) = (m0.init_excited(), m1.init_excited());
    for _ in 0..m0.grid().horizon_steps {
        m0.step(&mut a).unwrap();
        m1.step(&mut b).unwrap();
        let dev = a
            .core_restriction()
            .iter()
            .zip(b.core_restriction())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-10);
    }
    assert!(b.detector_population() > 1e-4);
}

#[test]
fn field_step_maps_intertwine_on_the_core() {
    let steps = 200;
    let reach = 6;
    let cfg = cfg_with(1.0 / 16.0, 16.0);
    let det = DetectorConfig::default();
    let m0 = build_field_model(&cfg, Some(&det.with_scale(0.0))).unwrap();
    let mg = build_field_model(&cfg, Some(&det.with_scale(10.0))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let probes: Vec<ComplexVector> = (0..3)
        .map(|_| m0.random_probe(&mut rng, reach, false).unwrap().to_vector())
        .collect();
    let report = verify_intertwining(
        &mg.step_map(),
        &m0.step_map(),
        m0.partition().core_projector(),
        steps,
        &probes,
        1e-10,
    )
    .unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn pair_amplitude_matches_the_integrated_source() {
    // F(x_R, x_L; t) = −i Σ_τ g(x_R − c(t−τ), x_L + c(t−τ)) C(τ) Δt
    for inv in [16usize, 32] {
        let h = 1.0 / inv as f64;
        let m = build_field_model(&cfg_with(h, 4.0), None).unwrap();
        let g0 = m.config().kernel.amplitude();
        let mut s = m.init_excited();
        let mut history = vec![s.atom_amplitude()];
        let steps = 3 * inv;
        for _ in 0..steps {
            m.step(&mut s).unwrap();
            history.push(s.atom_amplitude());
        }
        let n = m.grid().n_core;
        let mut rng = ChaCha8Rng::seed_from_u64(inv as u64);
        let (mut worst, mut scale): (f64, f64) = (0.0, 0.0);
        for _ in 0..10 {
            let (i, j) = loop {
                let i = rng.gen_range(n..n + steps);
                let j = rng.gen_range(0..n + steps);
                if i.abs_diff(j) < n {
                    break (i, j);
                }
            };
            let mut predicted = Complex64::new(0.0, 0.0);
            for back in 1..=steps.min(i).min(j) {
                if i - back < n && j - back < n {
                    let w = if back == steps { 0.5 } else { 1.0 };
                    predicted += -common::I * g0 * history[steps - back] * h * w;
                }
            }
            let got = s.pair_coefficient(i, j) / h;
            worst = worst.max((got - predicted).norm());
            scale = scale.max(got.norm());
        }
        assert!(worst <= 0.1 * h * scale, "h = {h}: error {worst}, |F| {scale}");
    }
}

#[test]
fn survival_converges_at_second_order() {
    let runs: Vec<_> = [16.0, 32.0, 64.0]
        .iter()
        .map(|&inv| {
            let m = build_field_model(&cfg_with(1.0 / inv, 8.0), None).unwrap();
            run_experiment(&m, 8.0, (inv / 16.0) as usize).unwrap().series
        })
        .collect();
    let e1 = compare_survival(&runs[0], &runs[1]).unwrap().max_abs;
    let e2 = compare_survival(&runs[1], &runs[2]).unwrap().max_abs;
    assert!(e1 < 1e-3);
    assert!(e1 / e2 > 3.5 && e1 / e2 < 4.5, "ratio {}", e1 / e2);
}

#[test]
fn survival_matches_memory_equation_oracle() {
    let cfg = FieldModelConfig::default();
    let dt = 1.0 / 1024.0;
    let oracle = common::volterra_survival(1.0, cfg.d, cfg.c, cfg.omega, dt, 8 * 1024);
    let mut devs = vec![];
    for inv in [16usize, 32] {
        let m = build_field_model(&cfg_with(1.0 / inv as f64, 8.0), None).unwrap();
        let r = run_experiment(&m, 8.0, 1).unwrap();
        let stride = 1024 / inv;
        let dev = r
            .series
            .values()
            .iter()
            .enumerate()
            .map(|(n, s)| (s - oracle[n * stride]).abs())
            .fold(0.0, f64::max);
        devs.push(dev);
    }
    assert!(devs[0] < 1e-3, "{devs:?}");
    assert!(devs[0] / devs[1] > 3.0, "{devs:?}");
}

#[test]
fn short_time_law_on_a_refined_grid() {
    let cfg = FieldModelConfig::default();
    let h = cfg.d / 2048.0;
    let m = build_field_model(&cfg_with(h, 8.0 * h), None).unwrap();
    let r = run_experiment(&m, 8.0 * h, 1).unwrap();
    let fit = fit_short_time(&r.series, (0.0, 8.0 * h)).unwrap();
    let alpha = cfg.continuum_alpha().unwrap();
    assert!((fit.exponent.unwrap() - 2.0).abs() <= 0.05, "{fit:?}");
    assert!((fit.estimate / alpha - 1.0).abs() <= 0.02, "{fit:?}");
    assert!((m.second_moment() - alpha).abs() < 1e-12);
}

#[test]
fn decay_rate_is_grid_converged() {
    let fit = |inv: f64| {
        let m = build_field_model(&cfg_with(1.0 / inv, 8.0), None).unwrap();
        let r = run_experiment(&m, 8.0, 1).unwrap();
        fit_exponential(&r.series, (2.0, 8.0)).unwrap()
    };
    let (coarse, fine) = (fit(16.0), fit(32.0));
    assert!(coarse.is_ok() && fine.is_ok());
    assert!((coarse.estimate / fine.estimate - 1.0).abs() < 0.01);
    assert!(coarse.estimate > 0.1 && coarse.estimate < 0.3);
}

#[test]
fn nogo_holds_for_both_dispersions() {
    let cfg = FieldModelConfig::default();
    let linear = DetectorConfig::default();
    let quadratic = DetectorConfig {
        dispersion: Dispersion::Quadratic { curvature: 0.5 },
        ..linear
    };
    for det in [linear, quadratic] {
        let rep = nogo_sweep(&cfg, &det, &[0.0, 1.0, 10.0, 100.0], 8.0).unwrap();
        assert!(rep.invariant, "{:?}", rep.entries);
        assert!(rep.max_deviation() <= NOGO_TOL);
        assert!(rep.entry(10.0).unwrap().final_detector_population > 1e-4);
        assert!(rep.entries.iter().all(|e| e.norm_drift <= 1e-9));
    }
}

#[test]
fn semidirect_detector_changes_survival_monotonically() {
    let cfg = FieldModelConfig::default();
    let det = DetectorConfig::overlapping(0.0, cfg.d);
    let rep = semidirect_control(&cfg, &det, &[0.0, 1.0, 2.0, 5.0], 8.0).unwrap();
    let dev: Vec<f64> = rep.entries.iter().map(|e| e.max_deviation).collect();
    assert_eq!(dev[0], 0.0);
    assert!(dev[3] > 1e-3, "{dev:?}");
    assert!(dev[1] < dev[2] && dev[2] < dev[3], "{dev:?}");
    assert!(!rep.invariant);
}

#[test]
fn configuration_errors() {
    let cfg = FieldModelConfig::default();
    let on_edge = DetectorConfig::wave_zone(0.5, 2.0);
    assert!(matches!(build_field_model(&cfg, Some(&on_edge)), Err(Error::Config(_))));
    let m = build_field_model(&cfg, None).unwrap();
    assert!(matches!(run_experiment(&m, 9.0, 1), Err(Error::Config(_))));
    assert!(matches!(
        nogo_sweep(&cfg, &DetectorConfig::overlapping(0.0, 1.0), &[1.0], 1.0),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        semidirect_control(&cfg, &DetectorConfig::default(), &[1.0], 1.0),
        Err(Error::Contract(_))
    ));
    // snapped inward to grid edges
    let det = DetectorConfig::wave_zone(1.01, 1.99);
    let m = build_field_model(&cfg, Some(&det)).unwrap();
    let layout = m.detector().unwrap();
    assert!(layout.x_minus >= 1.01 && layout.x_plus <= 1.99);
}

#[test]
fn step_map_agrees_with_in_place_step() {
    let m = build_field_model(&cfg_with(0.125, 2.0), Some(&DetectorConfig::default())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut s = m.random_probe(&mut rng, 3, false).unwrap();
    let v = s.to_vector();
    m.step(&mut s).unwrap();
    let mapped = m.step_map().apply(&v).unwrap();
    assert_eq!(mapped, s.to_vector());
}
