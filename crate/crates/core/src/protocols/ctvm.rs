use crate::error::{invalid, Error, Result};
use crate::qcore::{
    detector_hamiltonian, detector_propagator, evolve, partial_trace, tensor, DensityState, Matrix,
    QubitState, Subsystem,
};
use crate::scalar::Real;

/// Spin precessing at `ω` with a two-level detector coupled to its velocity
/// with strength `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel<T> {
    omega: T,
    lambda: T,
}

impl<T: Real> DetectorModel<T> {
    pub fn new(omega: T, lambda: T) -> Result<Self> {
        if !omega.is_finite() || !lambda.is_finite() {
            return Err(Error::NonFinite("detector parameter"));
        }
        if omega <= T::zero() {
            return Err(invalid("omega", "must be positive"));
        }
        if lambda < T::zero() {
            return Err(invalid("lambda", "must be non-negative"));
        }
        Ok(Self { omega, lambda })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// `Ω = ω √(1 + 4λ²)`.
    pub fn big_omega(&self) -> T {
        self.omega * (T::one() + T::lit(4.0) * self.lambda * self.lambda).sqrt()
    }

    pub fn hamiltonian(&self) -> Matrix<T> {
        detector_hamiltonian(self.omega, self.lambda).expect("validated parameters")
    }

    pub fn propagator(&self, t: T) -> Result<Matrix<T>> {
        detector_propagator(self.omega, self.lambda, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum P1Mode {
    /// Full system-detector evolution, ancilla population traced out.
    Exact,
    /// `2λ² (1 − cos ωt)`.
    SmallLambda,
}

/// Probability that the detector clicks during `duration`.
pub fn ctvm_p1<T: Real>(
    initial: &QubitState<T>,
    detector: &DetectorModel<T>,
    duration: T,
    mode: P1Mode,
) -> Result<T> {
    if !duration.is_finite() {
        return Err(Error::NonFinite("duration"));
    }
    if duration < T::zero() {
        return Err(Error::NegativeTime(format!("duration = {duration}")));
    }
    match mode {
        P1Mode::Exact => {
            let joint = tensor(initial, &QubitState::basis(0));
            let out = evolve(&joint, &detector.propagator(duration)?)?;
            let ancilla = partial_trace(&out, Subsystem::Ancilla);
            Ok(ancilla.matrix().get(1, 1).re.max(T::zero()).min(T::one()))
        }
        P1Mode::SmallLambda => {
            let l = detector.lambda;
            let p = T::lit(2.0) * l * l * (T::one() - (detector.omega * duration).cos());
            Ok(p.min(T::one()))
        }
    }
}

/// `(4λ²ω²/Ω²) sin²(Ωt/2)`, valid for every initial system state.
pub fn ctvm_p1_closed_form<T: Real>(detector: &DetectorModel<T>, duration: T) -> T {
    let big = detector.big_omega();
    let l = detector.lambda;
    let s = (big * duration / T::lit(2.0)).sin();
    T::lit(4.0) * l * l * detector.omega * detector.omega / (big * big) * s * s
}

/// Correlator inferred from a click probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtvmCorrelator<T> {
    pub value: T,
    /// Set when the inferred value lies below −1.
    pub out_of_regime: bool,
}

/// `C = 1 − p(1) / (2λ²)`.
pub fn ctvm_correlator<T: Real>(p1: T, lambda: T) -> Result<CtvmCorrelator<T>> {
    if !p1.is_finite() || !lambda.is_finite() {
        return Err(Error::NonFinite("ctvm input"));
    }
    if lambda <= T::zero() {
        return Err(Error::OutOfDomain {
            name: "lambda",
            value: lambda.to_f64_lossy(),
            domain: "(0, inf)",
        });
    }
    if p1 < T::zero() || p1 > T::one() {
        return Err(Error::OutOfDomain {
            name: "p1",
            value: p1.to_f64_lossy(),
            domain: "[0, 1]",
        });
    }
    let value = T::one() - p1 / (T::lit(2.0) * lambda * lambda);
    Ok(CtvmCorrelator {
        value,
        out_of_regime: value < -T::one(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{density_from_bloch, BlochVector};
    use std::f64::consts::PI;

    fn rho2() -> QubitState<f64> {
        density_from_bloch(&BlochVector::new(0.951, 0.0, 0.309).unwrap()).unwrap()
    }

    #[test]
    fn table_four_click_probabilities() {
        let d = DetectorModel::<f64>::new(1.0, 0.11).unwrap();
        let t = 0.3 * PI;
        let p1 = ctvm_p1(&rho2(), &d, t, P1Mode::Exact).unwrap();
        let p2 = ctvm_p1(&rho2(), &d, 2.0 * t, P1Mode::Exact).unwrap();
        assert_eq!((p1 * 1e3).round() / 1e3, 0.010);
        assert_eq!((p2 * 1e3).round() / 1e3, 0.031);
        assert!((p1 - ctvm_p1_closed_form(&d, t)).abs() < 1e-12);
    }

    #[test]
    fn no_coupling_no_clicks() {
        let d = DetectorModel::<f64>::new(1.0, 0.0).unwrap();
        assert_eq!(ctvm_p1(&rho2(), &d, 1.3, P1Mode::Exact).unwrap(), 0.0);
        assert_eq!(ctvm_p1(&rho2(), &d, 1.3, P1Mode::SmallLambda).unwrap(), 0.0);
    }

    #[test]
    fn correlator_examples() {
        let c = ctvm_correlator(0.010f64, 0.11).unwrap();
        assert!((c.value - 0.5868).abs() < 5e-5 && !c.out_of_regime);
        assert_eq!(ctvm_correlator(0.0, 0.3).unwrap().value, 1.0);
        let c = ctvm_correlator(0.03122f64, 0.11).unwrap();
        assert!((c.value + 0.290).abs() < 5e-4);
        assert!(matches!(
            ctvm_correlator(0.01, 0.0),
            Err(Error::OutOfDomain { name: "lambda", .. })
        ));
    }

    #[test]
    fn large_click_rate_flagged_not_clamped() {
        let c = ctvm_correlator(0.1, 0.11).unwrap();
        assert!(c.out_of_regime);
        assert!(c.value < -1.0);
    }

    #[test]
    fn negative_duration_rejected() {
        let d = DetectorModel::<f64>::new(1.0, 0.1).unwrap();
        assert!(ctvm_p1(&rho2(), &d, -0.1, P1Mode::Exact).is_err());
    }
}
