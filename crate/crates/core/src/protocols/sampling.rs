use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Mean and binomial standard error of a sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEstimate<T> {
    pub mean: T,
    pub stderr: T,
    pub shots: usize,
    pub seed: u64,
}

/// Independent generator for `(seed, stream)`; distinct streams never overlap.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn weights<T: Real>(probs: &[T]) -> Result<WeightedIndex<f64>> {
    if probs.is_empty() {
        return Err(invalid("probs", "empty distribution"));
    }
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("probability"));
    }
    if probs.iter().any(|&p| p < -T::loose_tol()) {
        return Err(invalid("probs", "negative entry"));
    }
    let sum: T = probs.iter().copied().sum();
    if (sum - T::one()).abs() > T::loose_tol() {
        return Err(invalid("probs", format!("sum {sum} is not 1")));
    }
    WeightedIndex::new(probs.iter().map(|p| p.max(T::zero()).to_f64_lossy()))
        .map_err(|e| invalid("probs", e.to_string()))
}

fn draw(dist: &WeightedIndex<f64>, len: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut counts = vec![0u64; len];
    for _ in 0..n {
        counts[dist.sample(rng)] += 1;
    }
    counts
}

fn check_shots(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("shots", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Outcome counts of `n` draws from `probs`.
pub fn sample_counts<T: Real>(probs: &[T], n: usize, seed: u64, stream: u64) -> Result<Vec<u64>> {
    check_shots(n)?;
    let dist = weights(probs)?;
    Ok(draw(&dist, probs.len(), n, &mut rng_for(seed, stream)))
}

/// Per-outcome frequency estimates with `√(p̂(1−p̂)/n)` errors.
pub fn sample_shots<T: Real>(probs: &[T], n: usize, seed: u64) -> Result<Vec<ShotEstimate<T>>> {
    let counts = sample_counts(probs, n, seed, 0)?;
    let nt = T::from_usize(n).expect("shot count fits scalar");
    Ok(counts
        .into_iter()
        .map(|k| {
            let p = T::from_u64(k).expect("count fits scalar") / nt;
            ShotEstimate {
                mean: p,
                stderr: (p * (T::one() - p) / nt).sqrt(),
                shots: n,
                seed,
            }
        })
        .collect())
}

/// Sampled `⟨Q⟩` from single-time `±1` outcomes with `p(+) = p_plus`.
pub fn sampled_expectation<T: Real>(
    p_plus: T,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<ShotEstimate<T>> {
    let p = p_plus.max(T::zero()).min(T::one());
    let counts = sample_counts(&[p, T::one() - p], n, seed, stream)?;
    let nt = T::from_usize(n).expect("shot count fits scalar");
    let mean = (T::from_u64(counts[0]).unwrap() - T::from_u64(counts[1]).unwrap()) / nt;
    Ok(ShotEstimate {
        mean,
        stderr: ((T::one() - mean * mean).max(T::zero()) / nt).sqrt(),
        shots: n,
        seed,
    })
}

/// Per-shot contribution of each diagonal outcome to the INM correlator:
/// `+1`/`−1` for the kept `(s = +, a = 0)` / `(s = −, a = 0)` outcomes of the
/// CNOT run, reversed for the anti-CNOT run, and zero for discarded shots.
const CNOT_SCORE: [i8; 4] = [1, 0, -1, 0];
const ANTI_SCORE: [i8; 4] = [-1, 0, 1, 0];

fn score_moments<T: Real>(probs: &[T; 4], score: &[i8; 4]) -> (T, T) {
    let mut mean = T::zero();
    let mut second = T::zero();
    for (p, &s) in probs.iter().zip(score) {
        let s = T::from_i8(s).unwrap();
        mean = mean + *p * s;
        second = second + *p * s * s;
    }
    (mean, second - mean * mean)
}

/// Per-shot variance of the two-run INM correlator estimator.
pub fn inm_shot_variance<T: Real>(cnot: &[T; 4], anti: &[T; 4]) -> T {
    score_moments(cnot, &CNOT_SCORE).1 + score_moments(anti, &ANTI_SCORE).1
}

/// Shots per run needed for the INM correlator to reach `target` standard error.
pub fn shots_for_stderr<T: Real>(cnot: &[T; 4], anti: &[T; 4], target: T) -> Result<usize> {
    if target.is_nan() || target <= T::zero() {
        return Err(invalid("target", "must be positive"));
    }
    let n = (inm_shot_variance(cnot, anti) / (target * target)).ceil();
    Ok(n.to_usize().unwrap_or(usize::MAX).max(1))
}

/// Sampled INM correlator from `n` shots of each circuit.
pub fn sampled_inm_correlator<T: Real>(
    cnot: &[T; 4],
    anti: &[T; 4],
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<ShotEstimate<T>> {
    check_shots(n)?;
    let mut rng = rng_for(seed, stream);
    let nt = T::from_usize(n).expect("shot count fits scalar");
    let mut mean = T::zero();
    let mut var = T::zero();
    for (probs, score) in [(cnot, &CNOT_SCORE), (anti, &ANTI_SCORE)] {
        let counts = draw(&weights(probs)?, 4, n, &mut rng);
        let freq: Vec<T> = counts
            .iter()
            .map(|&k| T::from_u64(k).unwrap() / nt)
            .collect();
        let (m, v) = score_moments(&[freq[0], freq[1], freq[2], freq[3]], score);
        mean = mean + m;
        var = var + v;
    }
    Ok(ShotEstimate {
        mean,
        stderr: (var / nt).sqrt(),
        shots: n,
        seed,
    })
}
