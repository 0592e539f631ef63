//! Relaxation between measurement intervals and calibration of the
//! effective per-interval damping.

mod calibration;

pub use calibration::{calibrate_damping, CalibratedDamping, DampedSpin, DampingTargets};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::protocols::SpinModel;
use crate::qcore::{Matrix, QubitMap, QubitState, UnitaryMap};
use crate::scalar::Real;

/// `T₁`, `T₂`, the delay per measurement interval, and the longitudinal
/// fixed point `equilibrium_z` of the relaxation (`1` relaxes to `|0⟩`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationParams<T> {
    pub t1: T,
    pub t2: T,
    pub delay: T,
    pub equilibrium_z: T,
}

impl<T: Real> RelaxationParams<T> {
    pub fn new(t1: T, t2: T, delay: T) -> Result<Self> {
        Self::with_equilibrium(t1, t2, delay, T::one())
    }

    pub fn with_equilibrium(t1: T, t2: T, delay: T, equilibrium_z: T) -> Result<Self> {
        let p = Self {
            t1,
            t2,
            delay,
            equilibrium_z,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t1", self.t1),
            ("t2", self.t2),
            ("delay", self.delay),
            ("equilibrium_z", self.equilibrium_z),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if self.t1 <= T::zero() {
            return Err(invalid("t1", "must be positive"));
        }
        if self.t2 <= T::zero() {
            return Err(invalid("t2", "must be positive"));
        }
        if self.t2 > T::lit(2.0) * self.t1 {
            return Err(invalid("t2", "must not exceed 2 t1"));
        }
        if self.delay < T::zero() {
            return Err(invalid("delay", "must be non-negative"));
        }
        if self.equilibrium_z.abs() > T::one() {
            return Err(invalid("equilibrium_z", "must lie in [-1, 1]"));
        }
        Ok(())
    }

    /// Carbon-13 values with the stated 0.1 s delay.
    pub fn carbon() -> Self {
        Self {
            t1: T::lit(8.66),
            t2: T::lit(1.10),
            delay: T::lit(0.1),
            equilibrium_z: T::one(),
        }
    }

    /// Transverse factor `e^{−d/T₂}` for a duration `d`.
    pub fn transverse_factor(&self, duration: T) -> T {
        (-duration / self.t2).exp()
    }

    /// Duration whose transverse factor is `gamma`.
    pub fn duration_for_factor(&self, gamma: T) -> T {
        -self.t2 * gamma.ln()
    }
}

/// Dephasing plus relaxation toward `equilibrium_z` for a fixed duration:
/// coherences scale by `e^{−d/T₂}`, `z ↦ z_eq + (z − z_eq) e^{−d/T₁}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationChannel<T> {
    params: RelaxationParams<T>,
    duration: T,
}

impl<T: Real> RelaxationChannel<T> {
    pub fn new(params: RelaxationParams<T>, duration: T) -> Result<Self> {
        params.validate()?;
        if !duration.is_finite() && duration != T::infinity() {
            return Err(Error::NonFinite("duration"));
        }
        if duration < T::zero() {
            return Err(Error::NegativeTime(format!("duration = {duration}")));
        }
        Ok(Self { params, duration })
    }

    pub fn longitudinal_factor(&self) -> T {
        (-self.duration / self.params.t1).exp()
    }

    pub fn transverse_factor(&self) -> T {
        self.params.transverse_factor(self.duration)
    }
}

impl<T: Real> QubitMap<T> for RelaxationChannel<T> {
    fn apply_operator(&self, m: &Matrix<T>) -> Matrix<T> {
        let half = T::lit(0.5);
        let tr = m.get(0, 0) + m.get(1, 1);
        let z = m.get(0, 0) - m.get(1, 1);
        let l1 = self.longitudinal_factor();
        let l2 = self.transverse_factor();
        let z_eq = Complex::new(self.params.equilibrium_z * (T::one() - l1), T::zero());
        let z_new = tr * z_eq + z * l1;
        let mut out = Matrix::zeros(2);
        out.set(0, 0, (tr + z_new) * half);
        out.set(1, 1, (tr - z_new) * half);
        out.set(0, 1, m.get(0, 1) * l2);
        out.set(1, 0, m.get(1, 0) * l2);
        out
    }
}

pub fn relaxation_channel<T: Real>(
    state: &QubitState<T>,
    params: &RelaxationParams<T>,
    duration: T,
) -> Result<QubitState<T>> {
    RelaxationChannel::new(*params, duration)?.apply(state)
}

/// One measurement interval spanning `multiplier` steps: relaxation for
/// `multiplier × delay`, then the rotation `X(multiplier × ω t_step)`.
#[derive(Debug, Clone)]
pub struct DelayedBlock<T> {
    channel: RelaxationChannel<T>,
    rotation: UnitaryMap<T>,
}

pub fn delayed_block<T: Real>(
    model: &SpinModel<T>,
    params: &RelaxationParams<T>,
    step_time: T,
    multiplier: T,
) -> Result<DelayedBlock<T>> {
    if multiplier.is_nan() || multiplier < T::zero() {
        return Err(invalid("multiplier", "must be non-negative"));
    }
    Ok(DelayedBlock {
        channel: RelaxationChannel::new(*params, multiplier * params.delay)?,
        rotation: model.evolution_map(multiplier * step_time)?,
    })
}

impl<T: Real> QubitMap<T> for DelayedBlock<T> {
    fn apply_operator(&self, m: &Matrix<T>) -> Matrix<T> {
        self.rotation
            .apply_operator(&self.channel.apply_operator(m))
    }
}

/// `steps` single-step blocks applied in sequence.
pub fn delayed_interval_evolution<T: Real>(
    state: &QubitState<T>,
    model: &SpinModel<T>,
    params: &RelaxationParams<T>,
    step_time: T,
    steps: usize,
) -> Result<QubitState<T>> {
    let block = delayed_block(model, params, step_time, T::one())?;
    (0..steps).try_fold(state.clone(), |s, _| block.apply(&s))
}
