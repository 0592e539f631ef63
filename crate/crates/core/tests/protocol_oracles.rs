use std::f64::consts::PI;

use lgi_core::protocols::{
    ctvm_correlator, ctvm_p1, ctvm_p1_closed_form, inm_circuit, inm_correlator,
    projective_two_time, sample_counts, symmetrized_correlator, DetectorModel, Gate, P1Mode,
    SpinModel,
};
use lgi_core::qcore::{density_from_bloch, BlochVector, Matrix, Pauli};
use lgi_core::regimes::ctvm_error_budget;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn random_bloch(rng: &mut impl Rng) -> BlochVector<f64> {
    loop {
        let (x, y, z) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if x * x + y * y + z * z <= 1.0 {
            return BlochVector::new(x, y, z).unwrap();
        }
    }
}

#[test]
fn inm_correlator_equals_cosine_of_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let model = SpinModel::new(1.0).unwrap();
    for _ in 0..1000 {
        let s = density_from_bloch(&random_bloch(&mut rng)).unwrap();
        let ti = rng.gen_range(0.0..3.0);
        let dt = rng.gen_range(0.0..6.0);
        let c = inm_correlator(&s, &model, ti, ti + dt).unwrap();
        assert!((c - f64::cos(dt)).abs() < 1e-10, "dt {dt}: {c}");
    }
}

#[test]
fn inm_matches_symmetrized_projective_correlator() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let model = SpinModel::new(1.3).unwrap();
    for _ in 0..200 {
        let s = density_from_bloch(&random_bloch(&mut rng)).unwrap();
        let ti = rng.gen_range(0.0..2.0);
        let tj = ti + rng.gen_range(0.0..2.0);
        let inm = inm_correlator(&s, &model, ti, tj).unwrap();
        let sym = symmetrized_correlator(&s, &model, ti, tj).unwrap();
        assert!((inm - sym).abs() < 1e-12);
    }
}

/// Sequential projective Z measurements at `0, t, 2t`, computed with
/// explicit 2×2 amplitudes.
fn path_probability(signs: [usize; 3], omega_t: f64) -> f64 {
    let (c, s) = ((omega_t / 2.0).cos(), (omega_t / 2.0).sin());
    // e^{−iXθ/2}: amplitude ⟨b|U|a⟩.
    let amp = |a: usize, b: usize| {
        if a == b {
            C::new(c, 0.0)
        } else {
            C::new(0.0, -s)
        }
    };
    (amp(signs[0], signs[1]) * amp(signs[1], signs[2])).norm_sqr()
}

#[test]
fn multi_sign_ratio_matches_path_probabilities() {
    for k in 1..40 {
        let omega_t = k as f64 * PI / 41.0;
        let ratio = path_probability([0, 1, 0], omega_t) / path_probability([0, 0, 0], omega_t);
        let b = ctvm_error_budget(0.11, omega_t).unwrap();
        assert!((ratio - b.multi_sign_prob).abs() < 1e-12 * ratio.max(1.0));
    }
}

#[test]
fn back_action_ratio_from_detector_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let lambda = rng.gen_range(0.01..0.3);
        let omega_t: f64 = rng.gen_range(0.05..3.0);
        let (c, s) = ((omega_t / 2.0).cos(), (omega_t / 2.0).sin());
        let id = Matrix::<f64>::identity(2);
        let a0 = &id.scale_real(c) + &Matrix::pauli(Pauli::X).scale(C::new(0.0, -s));
        let a1 = Matrix::pauli(Pauli::Y).scale(C::new(0.0, -2.0 * lambda * s));
        let psi = {
            let th: f64 = rng.gen_range(0.0..PI);
            let ph: f64 = rng.gen_range(0.0..2.0 * PI);
            [
                C::new((th / 2.0).cos(), 0.0),
                C::from_polar((th / 2.0).sin(), ph),
            ]
        };
        let norm2 = |m: &Matrix<f64>| {
            (0..2)
                .map(|r| (m.get(r, 0) * psi[0] + m.get(r, 1) * psi[1]).norm_sqr())
                .sum::<f64>()
        };
        let ratio = norm2(&(&a1 * &a1)) / norm2(&(&a0 * &a1));
        let b = ctvm_error_budget(lambda, omega_t).unwrap();
        assert!(
            (ratio - b.back_action_prob).abs() < 1e-12,
            "{ratio} vs {}",
            b.back_action_prob
        );
    }
}

#[test]
fn ctvm_error_quarters_when_lambda_halves() {
    let omega_t = 0.3 * PI;
    let err = |lambda: f64| {
        let d = DetectorModel::new(1.0, lambda).unwrap();
        let c12 = ctvm_correlator(ctvm_p1_closed_form(&d, omega_t), lambda).unwrap();
        (c12.value - omega_t.cos()).abs()
    };
    let ratio = err(0.02) / err(0.01);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn exact_p1_is_state_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let d = DetectorModel::new(1.0, 0.11).unwrap();
    for _ in 0..200 {
        let s = density_from_bloch(&random_bloch(&mut rng)).unwrap();
        let t = rng.gen_range(0.0..6.0);
        let p = ctvm_p1(&s, &d, t, P1Mode::Exact).unwrap();
        assert!((p - ctvm_p1_closed_form(&d, t)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Doubling the interval cannot lower the click probability while
    /// `Ω·2t` stays within `4π/3`.
    #[test]
    fn p1_grows_from_one_to_two_intervals(lambda in 0.0..0.5f64, frac in 0.0..=1.0f64) {
        let d = DetectorModel::new(1.0, lambda).unwrap();
        let t = frac * (2.0 * PI / 3.0) / d.big_omega();
        prop_assert!(ctvm_p1_closed_form(&d, t) <= ctvm_p1_closed_form(&d, 2.0 * t) + 1e-15);
    }

    #[test]
    fn two_time_probabilities_are_a_distribution(
        x in -0.57..0.57f64, y in -0.57..0.57f64, z in -0.57..0.57f64,
        ti in 0.0..3.0f64, dt in 0.0..3.0f64,
    ) {
        let s = density_from_bloch(&BlochVector::new(x, y, z).unwrap()).unwrap();
        let model = SpinModel::new(1.0).unwrap();
        let p = projective_two_time(&s, &model, ti, ti + dt).unwrap();
        prop_assert!(p.is_nonnegative());
        prop_assert!((p.as_array().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for gate in [Gate::Cnot, Gate::AntiCnot] {
            let d = inm_circuit(&s, &model, ti, ti + dt, gate).unwrap();
            prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn sampled_counts_pass_goodness_of_fit() {
    let s = density_from_bloch(&BlochVector::new(0.951, 0.0, 0.309).unwrap()).unwrap();
    let model = SpinModel::new(1.0).unwrap();
    let probs = inm_circuit(&s, &model, 0.0, 0.3 * PI, Gate::Cnot).unwrap();
    let n = 20_000;
    let chi2 = ChiSquared::new(3.0).unwrap();
    for seed in 0..20 {
        let counts = sample_counts(&probs, n, seed, 0).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), n as u64);
        let stat: f64 = counts
            .iter()
            .zip(&probs)
            .map(|(&o, &p)| {
                let e = p * n as f64;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        let p_value = 1.0 - chi2.cdf(stat);
        assert!(p_value > 1e-6, "seed {seed}: chi2 {stat}");
    }
}
