use serde::Serialize;

use super::{ctvm_theoretical_correlator, linspace};
use crate::error::Result;
use crate::scalar::Real;

/// `(ωt/π, 1 + 2cos ωt + cos 2ωt, 1 − 2cos ωt + cos 2ωt)` on `ωt ∈ [0, 2π]`.
pub fn equidistant_lg3_curve<T: Real>(n: usize) -> Result<Vec<[T; 3]>> {
    let two = T::lit(2.0);
    Ok(linspace(T::zero(), two, n)?
        .into_iter()
        .map(|x| {
            let th = x * T::PI();
            let (c1, c2) = (th.cos(), (two * th).cos());
            [x, T::one() + two * c1 + c2, T::one() - two * c1 + c2]
        })
        .collect())
}

/// Equidistant LG3a/LG3b with ideal and velocity-detector correlators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorCurveRow<T> {
    pub omega_t_over_pi: T,
    pub lambda: T,
    pub lg3a_ideal: T,
    pub lg3a_ctvm: T,
    pub lg3b_ideal: T,
    pub lg3b_ctvm: T,
}

/// Rows for each `λ` over `ωt ∈ [0, π]`.
pub fn detector_lg3_curve<T: Real>(lambdas: &[T], n: usize) -> Result<Vec<DetectorCurveRow<T>>> {
    let two = T::lit(2.0);
    let xs = linspace(T::zero(), T::one(), n)?;
    let mut rows = Vec::with_capacity(lambdas.len() * n);
    for &lambda in lambdas {
        for &x in &xs {
            let th = x * T::PI();
            let (i1, i2) = (th.cos(), (two * th).cos());
            let (d1, d2) = (
                ctvm_theoretical_correlator(lambda, th),
                ctvm_theoretical_correlator(lambda, two * th),
            );
            rows.push(DetectorCurveRow {
                omega_t_over_pi: x,
                lambda,
                lg3a_ideal: T::one() + two * i1 + i2,
                lg3a_ctvm: T::one() + two * d1 + d2,
                lg3b_ideal: T::one() - two * i1 + i2,
                lg3b_ctvm: T::one() - two * d1 + d2,
            });
        }
    }
    Ok(rows)
}
