mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeno_lab::analysis::fit_exponential;
use zeno_lab::linops::{unitary_matrix, ComplexVector, HermitianOperator};
use zeno_lab::matrix_models::*;

fn survival_at(m: &ToyModel, g: f64, t: f64) -> f64 {
    survival_series(m, g, &[0.0, t]).unwrap().values()[1]
}

/// Two levels of Richardson extrapolation on `(1 − s(Δt))/Δt²`.
fn richardson_alpha(m: &ToyModel) -> f64 {
    let a: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&dt| (1.0 - survival_at(m, 0.0, dt)) / (dt * dt))
        .collect();
    let r1 = (4.0 * a[1] - a[0]) / 3.0;
    let r2 = (4.0 * a[2] - a[1]) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    // N = 1 → 2 is monotone only while cos Ω ≥ −1/3, i.e. Ω ≤ 1.91
    fn zeno_survival_grows_with_measurement_rate(omega in 0.2f64..1.9) {
        let m = build_two_level(omega).unwrap();
        let mut prev = 0.0;
        for k in 0..=8 {
            let n = 1usize << k;
            let s = projective_zeno(&m, &ZenoRunSpec::over(1.0, n).unwrap()).unwrap();
            let s_n = s.last().1;
            let closed = (omega / n as f64).cos().powi(2 * n as i32);
            prop_assert!((s_n - closed).abs() <= 1e-12);
            prop_assert!(s_n >= prev - 1e-15);
            if n >= 8 {
                prop_assert!(s_n >= 1.0 - 1.1 * omega * omega / n as f64);
            }
            prev = s_n;
        }
    }

    #[test]
    fn projective_series_is_nonincreasing(omega in 0.2f64..3.0, dt in 0.01f64..0.5, n in 1usize..40) {
        let m = build_two_level(omega).unwrap();
        let s = projective_zeno(&m, &ZenoRunSpec::every(dt, n).unwrap()).unwrap();
        prop_assert_eq!(s.len(), n + 1);
        prop_assert!(s.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn direct_measurement_follows_rabi_formula(omega in 0.2f64..2.0, g in 0.0f64..200.0) {
        let m = build_two_level(omega).unwrap();
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.07).collect();
        let s = survival_series(&m, g, &times).unwrap();
        for (t, v) in s.iter() {
            prop_assert!((v - common::rabi_survival(omega, g, t)).abs() <= 1e-9);
        }
    }

    #[test]
    fn short_time_alpha_is_second_moment(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hi = HermitianOperator::new(common::random_hermitian(&mut rng, n, 1.0)).unwrap();
        let energies: Vec<f64> = (0..n).map(|i| i as f64 * 0.3).collect();
        let hm: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect();
        let m = ToyModel::new(
            HermitianOperator::diagonal(&energies).unwrap(),
            hi,
            HermitianOperator::diagonal(&hm).unwrap(),
            0,
        )
        .unwrap();
        // variance of H in |e⟩: the diagonal part of H_i only shifts the phase
        let alpha = m.short_time_alpha() - m.interaction().element(0, 0).norm_sqr();
        let got = richardson_alpha(&m);
        prop_assert!((got / alpha - 1.0).abs() <= 1e-3, "{} vs {}", got, alpha);
    }
}

#[test]
fn two_level_closed_forms() {
    let m = build_two_level(1.0).unwrap();
    for t in [0.3, 1.0, 2.5] {
        assert!((survival_at(&m, 0.0, t) - t.cos().powi(2)).abs() < 1e-12);
    }
    assert!(survival_at(&m, 0.0, PI / 2.0) < 1e-15);
    let t = PI / (2.0 * 2f64.sqrt());
    assert!((survival_at(&m, 2.0, t) - 0.5).abs() < 1e-12);
    let g = 1e3;
    for t in [0.1, 1.0, 10.0] {
        assert!(survival_at(&m, g, t) >= 1.0 - 4.0 / (g * g));
    }
    assert!(build_two_level(0.0).is_err());
}

#[test]
fn strong_direct_measurement_freezes_decay() {
    let omega = 1.0;
    let m = build_two_level(omega).unwrap();
    let mut prev_min = 0.0;
    for g in [0.0, 10.0, 100.0] {
        let w = (omega * omega + g * g / 4.0).sqrt();
        let period = PI / w;
        let times: Vec<f64> = (0..=400).map(|k| k as f64 * period / 400.0).collect();
        let s = survival_series(&m, g, &times).unwrap();
        let floor = 1.0 - omega * omega / (w * w);
        assert!(s.min_value() >= floor - 1e-12);
        assert!(s.min_value() > prev_min);
        prev_min = s.min_value();
    }
}

#[test]
fn richardson_alpha_for_builtin_models() {
    let two = build_two_level(1.3).unwrap();
    assert!((richardson_alpha(&two) / 1.69 - 1.0).abs() <= 1e-3);
    let fr = build_friedrichs(400, 0.1, 4.0).unwrap();
    assert!((fr.short_time_alpha() - 0.04).abs() < 1e-12);
    assert!((richardson_alpha(&fr) / 0.04 - 1.0).abs() <= 1e-3);
}

#[test]
fn friedrichs_decays_at_golden_rule_rate() {
    let m = build_friedrichs(400, 0.1, 4.0).unwrap();
    assert!(m.warnings().is_empty());
    let gamma = m.golden_rule_rate().unwrap();
    assert!((gamma - 2.0 * PI * 0.01).abs() < 1e-15);
    let grid: Vec<f64> = (0..=600).map(|k| k as f64 * 0.1).collect();
    let fit = fit_exponential(&survival_series(&m, 0.0, &grid).unwrap(), (0.5 / gamma, 3.0 / gamma)).unwrap();
    assert!(fit.is_ok());
    assert!((fit.estimate / gamma - 1.0).abs() <= 0.05, "{fit:?}");

    let flat = build_friedrichs(64, 0.0, 4.0).unwrap();
    let s = survival_series(&flat, 0.0, &grid).unwrap();
    assert!(s.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));

    let coarse = build_friedrichs(32, 0.05, 4.0).unwrap();
    assert!(!coarse.warnings().is_empty());
    assert!(build_friedrichs(16, 0.1, 4.0).is_err());
}

#[test]
fn projection_leaves_exponential_rate_unchanged() {
    let m = build_friedrichs(400, 0.1, 4.0).unwrap();
    let gamma = m.golden_rule_rate().unwrap();
    let grid: Vec<f64> = (0..=600).map(|k| k as f64 * 0.1).collect();
    let free = fit_exponential(&survival_series(&m, 0.0, &grid).unwrap(), (0.5 / gamma, 3.0 / gamma)).unwrap();
    let dt = 24.0;
    assert!(dt > 0.5 / gamma && dt < 3.0 / gamma);
    let s = projective_zeno(&m, &ZenoRunSpec::every(dt, 12).unwrap()).unwrap();
    let projected = fit_exponential(&s, (dt, 12.0 * dt)).unwrap();
    assert!(projected.is_ok());
    assert!((projected.estimate / free.estimate - 1.0).abs() <= 0.02, "{projected:?} vs {free:?}");
}

#[test]
fn no_interaction_means_no_decay() {
    let free = HermitianOperator::diagonal(&[0.0, 1.0, 2.0]).unwrap();
    let m = ToyModel::new(
        free,
        HermitianOperator::zeros(3).unwrap(),
        HermitianOperator::diagonal(&[0.0, 1.0, 1.0]).unwrap(),
        0,
    )
    .unwrap();
    for n in [1, 7, 64] {
        let s = projective_zeno(&m, &ZenoRunSpec::over(3.0, n).unwrap()).unwrap();
        assert!(s.values().iter().all(|&v| v == 1.0));
    }
}

fn block_maps(m: &ToyModel, g: f64, dt: f64) -> (zeno_lab::linops::UnitaryMap, zeno_lab::linops::UnitaryMap) {
    (
        unitary_matrix(&m.total_hamiltonian(g), dt).unwrap(),
        unitary_matrix(&m.total_hamiltonian(0.0), dt).unwrap(),
    )
}

#[test]
fn decoupled_blocks_intertwine_exactly() {
    let m = build_decoupled_blocks(4, 6).unwrap();
    let core = m.core_projector().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let probes: Vec<ComplexVector> = (0..10)
        .map(|_| ComplexVector::new(common::random_vector(&mut rng, m.dim())).unwrap())
        .collect();
    for g in [0.0, 1.0, 50.0] {
        let (ug, u0) = block_maps(&m, g, 0.1);
        let r = verify_intertwining(&ug, &u0, &core, 200, &probes, 1e-12).unwrap();
        assert!(r.passed, "g = {g}: {r:?}");
        if g == 0.0 {
            assert_eq!(r.max_deviation, 0.0);
        }
    }
}

#[test]
fn intertwining_report_is_order_independent_and_deterministic() {
    let m = build_two_level(1.0).unwrap();
    let core = zeno_lab::linops::projector_from_indices([0], 2).unwrap();
    let (ug, u0) = block_maps(&m, 3.0, 0.05);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let probes: Vec<ComplexVector> = (0..5)
        .map(|_| ComplexVector::new(common::random_vector(&mut rng, 2)).unwrap())
        .collect();
    let a = verify_intertwining(&ug, &u0, &core, 40, &probes, 1e-12).unwrap();
    let b = verify_intertwining(&ug, &u0, &core, 40, &probes, 1e-12).unwrap();
    assert_eq!(a, b);
    let reversed: Vec<_> = probes.iter().rev().cloned().collect();
    let c = verify_intertwining(&ug, &u0, &core, 40, &reversed, 1e-12).unwrap();
    assert_eq!(a.max_deviation, c.max_deviation);
    assert_eq!(a.worst_step, c.worst_step);
    assert_eq!(c.worst_probe, probes.len() - 1 - a.worst_probe);
    // a direct detector on a two-level atom does break the identity
    assert!(!a.passed);
}
