//! Correlator measurement protocols: projective two-time, ideal negative
//! measurement through an ancilla CNOT, the continuous-in-time velocity
//! detector, and finite-shot sampling of their outcome tables.

mod ctvm;
mod inm;
mod sampling;

pub use ctvm::{
    ctvm_correlator, ctvm_p1, ctvm_p1_closed_form, CtvmCorrelator, DetectorModel, P1Mode,
};
pub use inm::{inm_circuit, inm_circuit_with, inm_correlator, inm_correlator_with, Gate};
pub use sampling::{
    inm_shot_variance, sample_counts, sample_shots, sampled_expectation, sampled_inm_correlator,
    shots_for_stderr, ShotEstimate,
};

use crate::error::{invalid, Error, Result};
use crate::qcore::{
    evolve, rotation_unitary, DensityState, Matrix, Pauli, QubitMap, QubitState, RotationAxis,
    UnitaryMap,
};
use crate::scalar::Real;

/// Free qubit precession `H = ω X / 2`, measured in the `Z` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinModel<T> {
    omega: T,
}

impl<T: Real> SpinModel<T> {
    pub fn new(omega: T) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::NonFinite("omega"));
        }
        if omega <= T::zero() {
            return Err(invalid("omega", "must be positive"));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn hamiltonian(&self) -> Matrix<T> {
        Matrix::pauli(Pauli::X).scale_real(self.omega / T::lit(2.0))
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: T) -> Result<Matrix<T>> {
        rotation_unitary(RotationAxis::X, self.omega * t)
    }

    pub fn evolution_map(&self, t: T) -> Result<UnitaryMap<T>> {
        UnitaryMap::new(self.propagator(t)?)
    }

    /// Heisenberg-picture `Q(t) = U† Z U`.
    pub fn q_operator(&self, t: T) -> Result<Matrix<T>> {
        let u = self.propagator(t)?;
        Ok(&(&u.adjoint() * &Matrix::pauli(Pauli::Z)) * &u)
    }
}

/// Joint probabilities of `(s_i, s_j)`; `p_pm` is `s_i = +1, s_j = −1`.
///
/// Values assembled from inequality left-hand sides may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeProbabilities<T> {
    pub p_pp: T,
    pub p_pm: T,
    pub p_mp: T,
    pub p_mm: T,
}

impl<T: Real> TwoTimeProbabilities<T> {
    /// Clamps rounding noise into `[0, 1]` and checks normalization.
    pub fn new(p_pp: T, p_pm: T, p_mp: T, p_mm: T) -> Result<Self> {
        let raw = [p_pp, p_pm, p_mp, p_mm];
        if raw.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("probability"));
        }
        if raw
            .iter()
            .any(|&p| p < -T::loose_tol() || p > T::one() + T::loose_tol())
        {
            return Err(invalid("probability", format!("{raw:?} outside [0, 1]")));
        }
        let sum: T = raw.iter().copied().sum();
        if (sum - T::one()).abs() > T::loose_tol() {
            return Err(invalid("probability", format!("sum {sum} is not 1")));
        }
        let c = |p: T| p.max(T::zero()).min(T::one());
        Ok(Self {
            p_pp: c(p_pp),
            p_pm: c(p_pm),
            p_mp: c(p_mp),
            p_mm: c(p_mm),
        })
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }

    /// Distribution of `s_i` as `[p(+), p(−)]`.
    pub fn first_marginal(&self) -> [T; 2] {
        [self.p_pp + self.p_pm, self.p_mp + self.p_mm]
    }

    /// Distribution of `s_j` with `s_i` summed out.
    pub fn second_marginal(&self) -> [T; 2] {
        [self.p_pp + self.p_mp, self.p_pm + self.p_mm]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_array().iter().all(|&p| p >= T::zero())
    }
}

pub(crate) fn check_times<T: Real>(t_i: T, t_j: T) -> Result<()> {
    if !t_i.is_finite() || !t_j.is_finite() {
        return Err(Error::NonFinite("measurement time"));
    }
    if t_i < T::zero() {
        return Err(Error::NegativeTime(format!("t_i = {t_i}")));
    }
    if t_j < t_i {
        return Err(Error::NegativeTime(format!(
            "t_j = {t_j} precedes t_i = {t_i}"
        )));
    }
    Ok(())
}

/// `⟨Q(t)⟩ = v_z cos ωt + v_y sin ωt`.
pub fn expectation_q<T: Real>(
    initial: &crate::qcore::BlochVector<T>,
    model: &SpinModel<T>,
    t: T,
) -> T {
    let phase = model.omega * t;
    initial.z * phase.cos() + initial.y * phase.sin()
}

fn z_population<T: Real>(s: &QubitState<T>) -> T {
    s.a().max(T::zero()).min(T::one())
}

/// Sequential projective `Z` measurements at `t_i` and `t_j`.
pub fn projective_two_time<T: Real>(
    initial: &QubitState<T>,
    model: &SpinModel<T>,
    t_i: T,
    t_j: T,
) -> Result<TwoTimeProbabilities<T>> {
    check_times(t_i, t_j)?;
    projective_two_time_with(
        initial,
        &model.evolution_map(t_i)?,
        &model.evolution_map(t_j - t_i)?,
    )
}

/// As [`projective_two_time`] with arbitrary maps for the evolution up to
/// the first measurement and between the two measurements.
pub fn projective_two_time_with<T: Real>(
    initial: &QubitState<T>,
    to_first: &dyn QubitMap<T>,
    between: &dyn QubitMap<T>,
) -> Result<TwoTimeProbabilities<T>> {
    let a = z_population(&to_first.apply(initial)?);
    let a1 = z_population(&between.apply(&QubitState::basis(0))?);
    let a2 = z_population(&between.apply(&QubitState::basis(1))?);
    let one = T::one();
    TwoTimeProbabilities::new(
        a * a1,
        a * (one - a1),
        (one - a) * a2,
        (one - a) * (one - a2),
    )
}

/// `C = Σ s_i s_j p(s_i, s_j)`.
pub fn correlator_from_probs<T: Real>(p: &TwoTimeProbabilities<T>) -> T {
    p.p_pp - p.p_pm - p.p_mp + p.p_mm
}

/// `½ tr(ρ {Q(t_i), Q(t_j)})`.
pub fn symmetrized_correlator<T: Real>(
    initial: &QubitState<T>,
    model: &SpinModel<T>,
    t_i: T,
    t_j: T,
) -> Result<T> {
    let qi = model.q_operator(t_i)?;
    let qj = model.q_operator(t_j)?;
    let anti = &(&qi * &qj) + &(&qj * &qi);
    Ok((&anti * initial.matrix()).trace().re / T::lit(2.0))
}

/// `⟨Z⟩` after the given map.
pub fn expectation_with<T: Real>(initial: &QubitState<T>, map: &dyn QubitMap<T>) -> Result<T> {
    Ok(map.apply(initial)?.expectation(Pauli::Z))
}

/// `⟨Z⟩` of `initial` evolved under the spin model for time `t`.
pub fn evolved_expectation<T: Real>(
    initial: &QubitState<T>,
    model: &SpinModel<T>,
    t: T,
) -> Result<T> {
    Ok(evolve(initial, &model.propagator(t)?)?.expectation(Pauli::Z))
}
