use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lgi::{eval_lg3, MomentSet};
use crate::protocols::{ctvm_p1_closed_form, DetectorModel};
use crate::scalar::Real;

/// Bound shift quoted for `λ = 0.11`, `ωt = 3π/10`.
pub const QUOTED_BOUND_SHIFT: f64 = 0.0028;

/// Design errors of the velocity detector at coupling `λ` and interval `ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBudget<T> {
    /// Two sign changes relative to none, `tan⁴(ωt/2)`.
    pub multi_sign_prob: T,
    /// Spurious second flip from detector back action, `4λ² sin²(ωt/2)`.
    pub back_action_prob: T,
    /// `√(1 + 4λ²) − 1`.
    pub approx_deviation: T,
    /// Click probability over one interval.
    pub p1_signal: T,
}

fn unit_detector<T: Real>(lambda: T) -> Result<DetectorModel<T>> {
    DetectorModel::new(T::one(), lambda)
}

pub fn ctvm_error_budget<T: Real>(lambda: T, omega_t: T) -> Result<ErrorBudget<T>> {
    if !omega_t.is_finite() {
        return Err(Error::NonFinite("omega_t"));
    }
    if omega_t < T::zero() || omega_t >= T::PI() {
        return Err(Error::OutOfDomain {
            name: "omega_t",
            value: omega_t.to_f64_lossy(),
            domain: "[0, pi)",
        });
    }
    let detector = unit_detector(lambda)?;
    let half = omega_t / T::lit(2.0);
    let tan2 = half.tan() * half.tan();
    let sin2 = half.sin() * half.sin();
    Ok(ErrorBudget {
        multi_sign_prob: tan2 * tan2,
        back_action_prob: T::lit(4.0) * lambda * lambda * sin2,
        approx_deviation: (T::one() + T::lit(4.0) * lambda * lambda).sqrt() - T::one(),
        p1_signal: ctvm_p1_closed_form(&detector, omega_t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetCell<T> {
    pub lambda: T,
    pub omega_t: T,
    pub budget: ErrorBudget<T>,
}

/// Budgets over `lambdas × omega_ts`, row-major with `λ` outer.
pub fn budget_grid<T: Real>(lambdas: &[T], omega_ts: &[T]) -> Result<Vec<BudgetCell<T>>> {
    if lambdas.is_empty() || omega_ts.is_empty() {
        return Err(invalid("grid", "ranges must be non-empty"));
    }
    (0..lambdas.len() * omega_ts.len())
        .into_par_iter()
        .map(|idx| {
            let (lambda, omega_t) = (
                lambdas[idx / omega_ts.len()],
                omega_ts[idx % omega_ts.len()],
            );
            Ok(BudgetCell {
                lambda,
                omega_t,
                budget: ctvm_error_budget(lambda, omega_t)?,
            })
        })
        .collect()
}

/// Which `(λ, ωt)` cells produce a click probability of at least `floor`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalGrid<T> {
    pub lambdas: Vec<T>,
    pub omega_ts: Vec<T>,
    pub floor: T,
    pub resolution: T,
    /// Row-major with `λ` outer.
    pub p1: Vec<T>,
    pub detectable: Vec<bool>,
}

impl<T: Real> SignalGrid<T> {
    pub fn at(&self, i_lambda: usize, i_omega_t: usize) -> bool {
        self.detectable[i_lambda * self.omega_ts.len() + i_omega_t]
    }
}

/// `p(1)` is compared with `floor` after rounding to `resolution`, the
/// precision to which the readout resolves it; `resolution = 0` compares
/// the exact value.
pub fn signal_region<T: Real>(
    lambdas: &[T],
    omega_ts: &[T],
    floor: T,
    resolution: T,
) -> Result<SignalGrid<T>> {
    if lambdas.is_empty() || omega_ts.is_empty() {
        return Err(invalid("grid", "ranges must be non-empty"));
    }
    if resolution.is_nan() || resolution < T::zero() {
        return Err(invalid("resolution", "must be non-negative"));
    }
    let detectors = lambdas
        .iter()
        .map(|&l| unit_detector(l))
        .collect::<Result<Vec<_>>>()?;
    let p1: Vec<T> = (0..lambdas.len() * omega_ts.len())
        .into_par_iter()
        .map(|idx| {
            ctvm_p1_closed_form(
                &detectors[idx / omega_ts.len()],
                omega_ts[idx % omega_ts.len()],
            )
        })
        .collect();
    let detectable = p1
        .iter()
        .map(|&p| {
            if resolution > T::zero() {
                (p / resolution).round() >= (floor / resolution).round()
            } else {
                p >= floor
            }
        })
        .collect();
    Ok(SignalGrid {
        lambdas: lambdas.to_vec(),
        omega_ts: omega_ts.to_vec(),
        floor,
        resolution,
        p1,
        detectable,
    })
}

/// Noiseless velocity-detector correlator `1 − (1 − cos ΩΔt)/(1 + 4λ²)`
/// for `ω = 1`.
pub fn ctvm_theoretical_correlator<T: Real>(lambda: T, omega_dt: T) -> T {
    let k = T::one() + T::lit(4.0) * lambda * lambda;
    T::one() - (T::one() - (omega_dt * k.sqrt()).cos()) / k
}

/// Per-LG3 difference between detector-theoretical and ideal correlators at
/// equidistant times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundShift<T> {
    pub lambda: T,
    pub omega_t: T,
    pub ideal: [T; 4],
    pub ctvm: [T; 4],
    pub shifts: [T; 4],
    /// `min(0, shift)` per inequality.
    pub adjusted_bounds: [T; 4],
    pub quoted: T,
}

fn equidistant_lg3<T: Real>(c1: T, c2: T) -> [T; 4] {
    let m = MomentSet {
        c12: c1,
        c23: c1,
        c13: c2,
        ..MomentSet::zero()
    };
    eval_lg3(&m).map(|l| l.value)
}

pub fn lg3_bound_shift<T: Real>(lambda: T, omega_t: T) -> Result<BoundShift<T>> {
    if !lambda.is_finite() || !omega_t.is_finite() {
        return Err(Error::NonFinite("bound shift parameter"));
    }
    if lambda < T::zero() {
        return Err(invalid("lambda", "must be non-negative"));
    }
    let two = T::lit(2.0);
    let ideal = equidistant_lg3(omega_t.cos(), (two * omega_t).cos());
    let ctvm = equidistant_lg3(
        ctvm_theoretical_correlator(lambda, omega_t),
        ctvm_theoretical_correlator(lambda, two * omega_t),
    );
    let shifts = [0, 1, 2, 3].map(|k| ctvm[k] - ideal[k]);
    Ok(BoundShift {
        lambda,
        omega_t,
        ideal,
        ctvm,
        shifts,
        adjusted_bounds: shifts.map(|s| s.min(T::zero())),
        quoted: T::lit(QUOTED_BOUND_SHIFT),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn chosen_parameters_budget() {
        let b = ctvm_error_budget(0.11, 0.3 * PI).unwrap();
        assert!((b.multi_sign_prob - 0.067401).abs() < 1e-6);
        assert!((b.back_action_prob - 0.0099756).abs() < 1e-7);
        assert!((b.approx_deviation - 0.023914).abs() < 1e-6);
        assert!((b.p1_signal - 0.0099394).abs() < 1e-7);
    }

    #[test]
    fn uncoupled_budget_and_quarter_turn() {
        let b = ctvm_error_budget(0.0, 1.1).unwrap();
        assert_eq!(b.back_action_prob, 0.0);
        assert_eq!(b.approx_deviation, 0.0);
        let b = ctvm_error_budget(0.11, PI / 2.0).unwrap();
        assert!((b.multi_sign_prob - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_turn_is_out_of_domain() {
        assert!(matches!(
            ctvm_error_budget(0.11, PI),
            Err(Error::OutOfDomain {
                name: "omega_t",
                ..
            })
        ));
    }

    #[test]
    fn signal_region_examples() {
        let g = signal_region(&[0.0, 0.11], &[0.15 * PI, 0.3 * PI], 0.01, 1e-3).unwrap();
        assert!(!g.at(0, 0) && !g.at(0, 1));
        assert!(!g.at(1, 0));
        assert!(g.at(1, 1));
        assert!((g.p1[2] - 0.0026).abs() < 5e-5);
        let exact = signal_region(&[0.11], &[0.3 * PI], 0.01, 0.0).unwrap();
        assert!(!exact.at(0, 0));
    }

    #[test]
    fn bound_shift_at_chosen_parameters() {
        let s = lg3_bound_shift(0.11, 0.3 * PI).unwrap();
        let want = [0.02285, 0.01686, -0.01985, -0.01985];
        for (got, w) in s.shifts.iter().zip(want) {
            assert!((got - w).abs() < 1e-4, "{:?}", s.shifts);
        }
        assert_eq!(s.adjusted_bounds[0], 0.0);
        assert_eq!(s.adjusted_bounds[1], 0.0);
        assert!(s.adjusted_bounds[2] < 0.0);
        assert_eq!(s.quoted, 0.0028);
    }

    #[test]
    fn no_coupling_no_shift() {
        let s = lg3_bound_shift(0.0f64, 1.3).unwrap();
        assert!(s.shifts.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn grid_rows_are_lambda_major() {
        let cells = budget_grid(&[0.0, 0.1], &[0.2, 0.4, 0.6]).unwrap();
        assert_eq!(cells.len(), 6);
        assert_eq!((cells[4].lambda, cells[4].omega_t), (0.1, 0.4));
        assert!(budget_grid(&[0.1], &[PI]).is_err());
    }
}
