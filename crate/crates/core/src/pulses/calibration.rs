use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Least-squares fit of `f(τ) = a cos(bτ) + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosineFit<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    /// `√Σ (yᵢ − f(τᵢ))²`.
    pub residual_norm: T,
}

impl<T: Real> CosineFit<T> {
    pub fn eval(&self, tau: T) -> T {
        self.a * (self.b * tau).cos() + self.c
    }

    /// Duration at which `bτ = π`.
    pub fn half_period(&self) -> T {
        T::PI() / self.b
    }
}

/// Best `(a, c, rss)` for fixed `b`.
fn linear_part<T: Real>(taus: &[T], ys: &[T], b: T) -> (T, T, T) {
    let n = T::from_usize(taus.len()).unwrap();
    let (mut sx, mut sxx, mut sy, mut sxy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (&t, &y) in taus.iter().zip(ys) {
        let x = (b * t).cos();
        sx = sx + x;
        sxx = sxx + x * x;
        sy = sy + y;
        sxy = sxy + x * y;
    }
    let det = n * sxx - sx * sx;
    let (a, c) = if det.abs() <= T::strict_tol() * n * n {
        (T::zero(), sy / n)
    } else {
        ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
    };
    let rss = taus
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            let r = y - a * (b * t).cos() - c;
            r * r
        })
        .fold(T::zero(), |s, r| s + r);
    (a, c, rss)
}

/// Frequencies are searched up to the Nyquist limit of the smallest
/// sample spacing, then refined by golden section.
pub fn fit_cosine<T: Real>(taus: &[T], ys: &[T]) -> Result<CosineFit<T>> {
    if taus.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: taus.len(),
            got: ys.len(),
        });
    }
    if taus.len() < 4 {
        return Err(invalid("samples", "need at least four points"));
    }
    if taus.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fit sample"));
    }
    let mut sorted = taus.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > T::zero())
        .fold(T::infinity(), T::min);
    if !min_gap.is_finite() {
        return Err(invalid("samples", "need at least two distinct times"));
    }
    let b_max = T::PI() / min_gap;
    let n_scan = 4000;
    let step = b_max / T::from_usize(n_scan).unwrap();
    let rss_at = |b: T| linear_part(taus, ys, b).2;
    let mut best = 1;
    let mut best_rss = rss_at(step);
    for k in 2..=n_scan {
        let r = rss_at(step * T::from_usize(k).unwrap());
        if r < best_rss {
            best = k;
            best_rss = r;
        }
    }
    let (mut lo, mut hi) = (
        step * T::from_usize(best - 1).unwrap(),
        step * T::from_usize(best + 1).unwrap(),
    );
    let g = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if rss_at(m1) <= rss_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b = (lo + hi) / T::lit(2.0);
    let (a, c, rss) = linear_part(taus, ys, b);
    Ok(CosineFit {
        a,
        b,
        c,
        residual_norm: rss.sqrt(),
    })
}
