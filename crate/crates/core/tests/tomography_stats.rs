mod common;

use std::f64::consts::PI;

use fluxbec::dynamics::{transfer_protocol, HybridState, ProtocolConfig};
use fluxbec::tomography::{
    bell_reduced, exact_reconstruction, reconstruct, reduce_to_bec, rotate_for_axis, simulate_shots,
    transfer_fidelity_experiment, Axis, Detector, QubitDensityMatrix, ShotModel,
};
use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;
use rand::Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_bloch(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

#[test]
fn rotation_identity_for_random_states() {
    let mut rng = common::rng(1);
    for _ in 0..100 {
        let rho = QubitDensityMatrix::from_bloch(random_bloch(&mut rng));
        for axis in Axis::ALL {
            let r = rotate_for_axis(&rho, axis);
            assert!((r.spin_expectation(Axis::Z) - rho.spin_expectation(axis)).abs() < 1e-12);
            assert!((r.spin_expectation(Axis::Z) - 0.5 * rho.bloch()[axis.index()]).abs() < 1e-12);
        }
    }
}

#[test]
fn partial_trace_preserves_trace_and_positivity() {
    let mut rng = common::rng(2);
    for _ in 0..100 {
        let v = Vector4::from_fn(|_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let state = HybridState::new(v / c(v.norm()), 0.0).unwrap();
        let rho = reduce_to_bec(&state);
        assert!((rho.matrix().trace() - c(1.0)).norm() < 1e-12);
        let [lo, hi] = rho.eigenvalues();
        assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);
    }
    assert!(bell_reduced().bloch().norm() < 1e-15);
}

#[test]
fn mixed_state_frequencies() {
    let m = 1_000_000;
    for axis in Axis::ALL {
        let r = simulate_shots(&QubitDensityMatrix::maximally_mixed(), axis, m, 77).unwrap();
        assert!((r.frequency() - 0.5).abs() < 5.0 * (0.25 / m as f64).sqrt());
    }
}

#[test]
fn seeded_records_repeat() {
    let rho = QubitDensityMatrix::from_bloch(Vector3::new(0.2, 0.4, -0.1));
    for axis in Axis::ALL {
        assert_eq!(simulate_shots(&rho, axis, 10_000, 5).unwrap(), simulate_shots(&rho, axis, 10_000, 5).unwrap());
    }
    let x = simulate_shots(&rho, Axis::X, 10_000, 5).unwrap();
    let y = simulate_shots(&rho, Axis::X, 10_000, 6).unwrap();
    assert_ne!(x.plus_count, y.plus_count);
}

#[test]
fn exact_hook_is_exact() {
    let a = Vector3::new(0.3, -0.2, 0.9);
    let rec = exact_reconstruction(&QubitDensityMatrix::from_bloch(a));
    assert!((rec.bloch - a).norm() < 1e-12);
    assert_eq!(rec.std_errors, Vector3::zeros());
}

#[test]
fn plus_x_state_is_recovered() {
    let rho = QubitDensityMatrix::from_bloch(Vector3::new(1.0, 0.0, 0.0));
    let recs: Vec<_> = Axis::ALL.iter().map(|&a| simulate_shots(&rho, a, 10_000, 31).unwrap()).collect();
    let rec = reconstruct(&recs).unwrap();
    let want = Vector3::new(1.0, 0.0, 0.0);
    for k in 0..3 {
        // the x axis has p = 1 exactly, so its estimate carries no noise
        let sigma = rec.std_errors[k].max(1e-15);
        assert!((rec.bloch[k] - want[k]).abs() <= 3.0 * sigma);
    }
    let bell = bell_reduced();
    let m = 10_000u64;
    let recs: Vec<_> = Axis::ALL.iter().map(|&a| simulate_shots(&bell, a, m, 8).unwrap()).collect();
    let rec = reconstruct(&recs).unwrap();
    assert!(rec.bloch.norm() < 3.0 * (2.0 / (m as f64).sqrt()) * 3f64.sqrt());
}

/// Per-component coverage of the 3σ band and RMS error against the binomial prediction.
#[test]
fn estimator_statistics_over_seeds() {
    let a = Vector3::new(0.4, -0.3, 0.6);
    let rho = QubitDensityMatrix::from_bloch(a);
    let m = 10_000u64;
    let mut inside = 0;
    let mut sq = Vector3::<f64>::zeros();
    for seed in 0..100 {
        let recs: Vec<_> = Axis::ALL.iter().map(|&ax| simulate_shots(&rho, ax, m, seed).unwrap()).collect();
        let rec = reconstruct(&recs).unwrap();
        for k in 0..3 {
            let e = rec.bloch[k] - a[k];
            sq[k] += e * e;
            if e.abs() <= 3.0 * rec.std_errors[k] {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.99 * 300.0, "{inside}/300 inside 3σ");
    for k in 0..3 {
        let rms = (sq[k] / 100.0).sqrt();
        let p = 0.5 * (1.0 + a[k]);
        let predicted = 2.0 * (p * (1.0 - p) / m as f64).sqrt();
        assert!((rms / predicted - 1.0).abs() < 0.2, "axis {k}: rms {rms:e} vs {predicted:e}");
    }
}

#[test]
fn interval_width_scales_inverse_sqrt_shots() {
    let rho = QubitDensityMatrix::from_bloch(Vector3::new(0.4, -0.3, 0.6));
    let width = |m: u64| {
        let mut total = 0.0;
        for seed in 0..50 {
            let recs: Vec<_> = Axis::ALL.iter().map(|&ax| simulate_shots(&rho, ax, m, seed).unwrap()).collect();
            total += reconstruct(&recs).unwrap().std_errors.sum();
        }
        total
    };
    let ratio = width(100) / width(10_000);
    assert!((ratio / 10.0 - 1.0).abs() < 0.2, "{ratio}");
}

fn swap_config() -> ProtocolConfig {
    // |Ω| small enough for the swap to complete within a 0.1 μs ramp.
    let mut cfg = ProtocolConfig::fast_profile().with_ramp_time(0.1e-6);
    cfg.params.omega = c(2.0 * PI * 100e3);
    cfg
}

#[test]
fn noiseless_experiment_reproduces_protocol_fidelity() {
    let r = transfer_protocol(c(0.0), c(1.0), &swap_config()).unwrap();
    let est = transfer_fidelity_experiment(&r, ShotModel::Exact, &Detector::default()).unwrap();
    assert_eq!(est.std_error, 0.0);
    assert!((est.fidelity - est.true_fidelity).abs() < 1e-12);
    // The BEC-only fidelity exceeds the joint one by at most the flux-qubit leftover.
    let p = r.final_state.populations();
    assert!(est.fidelity >= r.fidelity_phase_opt - 1e-9);
    assert!(est.fidelity.powi(2) - r.fidelity_phase_opt.powi(2) <= p[1] + p[3] + 1e-9);
}

#[test]
fn sampled_experiment_covers_true_fidelity() {
    let r = transfer_protocol(c(0.0), c(1.0), &ProtocolConfig::fast_profile()).unwrap();
    let mut covered = 0;
    for seed in 0..100 {
        let est = transfer_fidelity_experiment(&r, ShotModel::Sampled { shots: 10_000, seed }, &Detector::default()).unwrap();
        if (est.fidelity - est.true_fidelity).abs() <= 3.0 * est.std_error {
            covered += 1;
        }
    }
    assert!(covered >= 99, "{covered}/100");
}

#[test]
fn experiment_interval_shrinks_with_shots() {
    let r = transfer_protocol(c(1.0), Complex64::new(0.0, 1.0), &swap_config()).unwrap();
    let width = |m: u64| {
        (0..50)
            .map(|seed| {
                let e = transfer_fidelity_experiment(&r, ShotModel::Sampled { shots: m, seed }, &Detector::default()).unwrap();
                e.std_error
            })
            .sum::<f64>()
    };
    let ratio = width(100) / width(10_000);
    assert!((ratio / 10.0 - 1.0).abs() < 0.2, "{ratio}");
}

#[test]
fn entangled_target_is_rejected() {
    let r = fluxbec::dynamics::entangle_protocol(&ProtocolConfig::fast_profile()).unwrap();
    assert!(transfer_fidelity_experiment(&r, ShotModel::Exact, &Detector::default()).is_err());
}
