use serde::Serialize;

use super::{delayed_block, DelayedBlock, RelaxationParams};
use crate::error::{invalid, Result};
use crate::lgi::{Moment, MomentSet, Pair};
use crate::protocols::{
    correlator_from_probs, expectation_with, projective_two_time_with, SpinModel,
};
use crate::qcore::QubitState;
use crate::scalar::Real;

/// Spin model whose measurement intervals are delayed blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedSpin<T> {
    pub model: SpinModel<T>,
    pub params: RelaxationParams<T>,
    /// Free-evolution time `t` of one interval.
    pub step_time: T,
}

impl<T: Real> DampedSpin<T> {
    pub fn block(&self, multiplier: T) -> Result<DelayedBlock<T>> {
        delayed_block(&self.model, &self.params, self.step_time, multiplier)
    }

    pub fn with_delay(&self, delay: T) -> Self {
        Self {
            params: RelaxationParams {
                delay,
                ..self.params
            },
            ..*self
        }
    }

    /// Six moments with measurements at `times` (in steps).
    pub fn moments(&self, initial: &QubitState<T>, times: [T; 3]) -> Result<MomentSet<T>> {
        let mut m = MomentSet::zero();
        for (k, key) in [Moment::Q1, Moment::Q2, Moment::Q3].into_iter().enumerate() {
            m.set(key, expectation_with(initial, &self.block(times[k])?)?);
        }
        for (pair, key) in Pair::ALL
            .into_iter()
            .zip([Moment::C12, Moment::C23, Moment::C13])
        {
            let (i, j) = pair.indices();
            let p = projective_two_time_with(
                initial,
                &self.block(times[i])?,
                &self.block(times[j] - times[i])?,
            )?;
            m.set(key, correlator_from_probs(&p));
        }
        Ok(m)
    }
}

/// Moment values the damping is fitted to.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DampingTargets<T>(pub Vec<(Moment, T)>);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibratedDamping<T> {
    /// Transverse factor accumulated over one interval.
    pub gamma_eff: T,
    /// Delay per interval producing `gamma_eff` under the given `T₂`.
    pub effective_delay: T,
    pub predicted: MomentSet<T>,
    /// `predicted − target` per fitted moment.
    pub residuals: Vec<(Moment, T)>,
}

const SCAN_POINTS: usize = 400;

/// Least-squares fit of the per-interval transverse factor `γ ∈ (0, 1]`.
pub fn calibrate_damping<T: Real>(
    targets: &DampingTargets<T>,
    spin: &DampedSpin<T>,
    initial: &QubitState<T>,
    times: [T; 3],
) -> Result<CalibratedDamping<T>> {
    if targets.0.is_empty() {
        return Err(invalid("targets", "at least one target moment is required"));
    }
    let predict = |gamma: T| -> Result<MomentSet<T>> {
        spin.with_delay(spin.params.duration_for_factor(gamma))
            .moments(initial, times)
    };
    let cost = |gamma: T| -> Result<T> {
        let m = predict(gamma)?;
        Ok(targets
            .0
            .iter()
            .map(|&(k, v)| (m.get(k) - v) * (m.get(k) - v))
            .sum())
    };

    let step = T::one() / T::from_usize(SCAN_POINTS).unwrap();
    let mut best = (T::one(), cost(T::one())?);
    for k in 1..SCAN_POINTS {
        let g = T::from_usize(k).unwrap() * step;
        let c = cost(g)?;
        if c < best.1 {
            best = (g, c);
        }
    }

    let mut lo = (best.0 - step).max(step * T::lit(1e-3));
    let mut hi = (best.0 + step).min(T::one());
    let ratio = T::lit(0.5) * (T::lit(5.0).sqrt() - T::one());
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (cost(x1)?, cost(x2)?);
    while hi - lo > T::strict_tol() {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2)?;
        }
    }
    let mid = (lo + hi) / T::lit(2.0);
    for g in [mid, lo, hi] {
        let c = cost(g)?;
        if c < best.1 {
            best = (g, c);
        }
    }

    let gamma = best.0;
    let predicted = predict(gamma)?;
    Ok(CalibratedDamping {
        gamma_eff: gamma,
        effective_delay: spin.params.duration_for_factor(gamma),
        predicted,
        residuals: targets
            .0
            .iter()
            .map(|&(k, v)| (k, predicted.get(k) - v))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{density_from_bloch, BlochVector};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn setup(equilibrium_z: f64) -> (DampedSpin<f64>, QubitState<f64>) {
        let spin = DampedSpin {
            model: SpinModel::new(1.0).unwrap(),
            params: RelaxationParams::with_equilibrium(8.66, 1.10, 0.1, equilibrium_z).unwrap(),
            step_time: FRAC_PI_2,
        };
        let rho1 =
            density_from_bloch(&BlochVector::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap())
                .unwrap();
        (spin, rho1)
    }

    const TIMES: [f64; 3] = [0.0, 1.0, 2.0];

    #[test]
    fn single_target_inverts_exactly() {
        let (spin, rho1) = setup(0.0);
        let fit = calibrate_damping(
            &DampingTargets(vec![(Moment::Q2, 0.45)]),
            &spin,
            &rho1,
            TIMES,
        )
        .unwrap();
        assert!((fit.gamma_eff - 0.45 * 2f64.sqrt()).abs() < 1e-9);
        assert!(fit.residuals[0].1.abs() < 1e-9);
    }

    #[test]
    fn noiseless_targets_give_unit_factor() {
        let (spin, rho1) = setup(1.0);
        let ideal = spin.with_delay(0.0).moments(&rho1, TIMES).unwrap();
        let targets = DampingTargets(Moment::ALL.iter().map(|&k| (k, ideal.get(k))).collect());
        let fit = calibrate_damping(&targets, &spin, &rho1, TIMES).unwrap();
        assert_eq!(fit.gamma_eff, 1.0);
        assert_eq!(fit.effective_delay, 0.0);
    }

    #[test]
    fn full_column_fit_predicts_c13() {
        let (spin, rho1) = setup(0.0);
        let targets = DampingTargets(vec![
            (Moment::Q1, 0.71),
            (Moment::Q2, 0.45),
            (Moment::Q3, -0.61),
            (Moment::C12, 0.0),
            (Moment::C23, 0.0),
            (Moment::C13, -0.86),
        ]);
        let fit = calibrate_damping(&targets, &spin, &rho1, TIMES).unwrap();
        assert!(fit.gamma_eff > 0.5 && fit.gamma_eff < 0.7);
        assert!((fit.predicted.c13 + 0.86).abs() < 0.03);
    }

    #[test]
    fn empty_targets_rejected() {
        let (spin, rho1) = setup(0.0);
        assert!(calibrate_damping(&DampingTargets(vec![]), &spin, &rho1, TIMES).is_err());
    }
}
