use lgi_core::lgi::{
    assemble_two_time, eval_lg2, eval_lg3, fine_feasible, nsit_defect, MomentSet, Pair,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn uniform_moments(rng: &mut impl Rng) -> MomentSet<f64> {
    let mut v = [0.0; 6];
    for x in &mut v {
        *x = rng.gen_range(-1.0..=1.0);
    }
    MomentSet::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
}

/// Moments of a random joint distribution over three ±1 variables, index
/// `4b₁ + 2b₂ + b₃` with `b = 0` for `+`.
fn joint_moments(rng: &mut impl Rng) -> MomentSet<f64> {
    let w: Vec<f64> = (0..8).map(|_| -rng.gen_range(1e-9f64..1.0).ln()).collect();
    let total: f64 = w.iter().sum();
    let sign = |k: usize, bit: usize| -> f64 {
        if (k >> (2 - bit)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let mut m = [0.0; 6];
    for (k, &wk) in w.iter().enumerate() {
        let p = wk / total;
        let (s1, s2, s3) = (sign(k, 0), sign(k, 1), sign(k, 2));
        m[0] += p * s1;
        m[1] += p * s2;
        m[2] += p * s3;
        m[3] += p * s1 * s2;
        m[4] += p * s2 * s3;
        m[5] += p * s1 * s3;
    }
    MomentSet {
        q1: m[0],
        q2: m[1],
        q3: m[2],
        c12: m[3],
        c23: m[4],
        c13: m[5],
    }
}

/// Uniform draws with some entries pinned to `±1`.
fn boundary_moments(rng: &mut impl Rng) -> MomentSet<f64> {
    let mut v = [0.0; 6];
    for x in &mut v {
        *x = if rng.gen_bool(0.4) {
            if rng.gen_bool(0.5) {
                1.0
            } else {
                -1.0
            }
        } else {
            rng.gen_range(-1.0..=1.0)
        };
    }
    MomentSet::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
}

/// Deterministic assignment of all three signs: every moment is `±1`.
fn vertex_moments(k: usize) -> MomentSet<f64> {
    let s = [4, 2, 1].map(|bit| if k & bit == 0 { 1.0 } else { -1.0 });
    MomentSet::new(s[0], s[1], s[2], s[0] * s[1], s[1] * s[2], s[0] * s[2]).unwrap()
}

fn all_sixteen_nonnegative(m: &MomentSet<f64>) -> bool {
    eval_lg2(m).iter().all(|l| l.value >= -TOL) && eval_lg3(m).iter().all(|l| l.value >= -TOL)
}

#[test]
fn joint_feasibility_iff_all_inequalities_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut disagreements, mut feasible_count) = (0usize, 0usize);
    for k in 0..100_000 {
        let m = match k % 3 {
            0 => uniform_moments(&mut rng),
            1 => joint_moments(&mut rng),
            _ => boundary_moments(&mut rng),
        };
        let f = fine_feasible(&m);
        feasible_count += usize::from(f.feasible);
        if f.feasible != all_sixteen_nonnegative(&m) {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
    assert!(feasible_count > 33_000 && feasible_count < 100_000);
}

#[test]
fn sign_vertices_are_feasible_and_saturate_inequalities() {
    for k in 0..8 {
        let m = vertex_moments(k);
        assert!(fine_feasible(&m).feasible);
        assert!(all_sixteen_nonnegative(&m));
        assert!(eval_lg3(&m).iter().any(|l| l.value.abs() < TOL));
    }
    let mut flipped = vertex_moments(0);
    flipped.c13 = -1.0;
    assert!(!fine_feasible(&flipped).feasible);
    assert!(!all_sixteen_nonnegative(&flipped));
}

#[test]
fn witness_reproduces_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..2000 {
        let m = joint_moments(&mut rng);
        let w = fine_feasible(&m).witness.expect("feasible by construction");
        assert!(w.iter().all(|&p| p >= 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let back = {
            let mut acc = MomentSet::<f64>::zero();
            for (k, &p) in w.iter().enumerate() {
                let s = |bit: usize| -> f64 {
                    if (k >> (2 - bit)) & 1 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                };
                acc.q1 += p * s(0);
                acc.q2 += p * s(1);
                acc.q3 += p * s(2);
                acc.c12 += p * s(0) * s(1);
                acc.c23 += p * s(1) * s(2);
                acc.c13 += p * s(0) * s(2);
            }
            acc
        };
        for (a, b) in [
            (back.q1, m.q1),
            (back.q2, m.q2),
            (back.q3, m.q3),
            (back.c12, m.c12),
            (back.c23, m.c23),
            (back.c13, m.c13),
        ] {
            assert!((a - b).abs() < 1e-10f64);
        }
    }
}

#[test]
fn inequality_families_sum_to_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10_000 {
        let m = uniform_moments(&mut rng);
        let lg3: f64 = eval_lg3(&m).iter().map(|l| l.value).sum();
        assert!((lg3 - 4.0).abs() < 1e-12);
        for quad in eval_lg2(&m).chunks(4) {
            let s: f64 = quad.iter().map(|l| l.value).sum();
            assert!((s - 4.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn assembled_probabilities_are_quarter_lg2(
        q1 in -1.0..=1.0f64, q2 in -1.0..=1.0f64, q3 in -1.0..=1.0f64,
        c12 in -1.0..=1.0f64, c23 in -1.0..=1.0f64, c13 in -1.0..=1.0f64,
    ) {
        let m = MomentSet::new(q1, q2, q3, c12, c23, c13).unwrap();
        let lg2 = eval_lg2(&m);
        for (k, pair) in Pair::ALL.into_iter().enumerate() {
            let p = assemble_two_time(&m, pair).as_array();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let mut quarter: Vec<f64> = lg2[4 * k..4 * k + 4].iter().map(|l| l.value / 4.0).collect();
            let mut probs = p.to_vec();
            quarter.sort_by(f64::total_cmp);
            probs.sort_by(f64::total_cmp);
            for (a, b) in quarter.iter().zip(&probs) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn nsit_defect_is_symmetric_and_zero_on_equal(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let p = [a, 1.0 - a];
        let q = [b, 1.0 - b];
        prop_assert_eq!(nsit_defect(p, p), 0.0);
        prop_assert!((nsit_defect(p, q) - nsit_defect(q, p)).abs() < 1e-15);
        prop_assert!(nsit_defect(p, q) >= 0.0);
    }
}
