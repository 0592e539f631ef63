use num_complex::Complex;

use super::{check_times, correlator_from_probs, SpinModel, TwoTimeProbabilities};
use crate::error::Result;
use crate::qcore::{diagonal_probabilities, evolve, tensor, Matrix, QubitMap, QubitState};
use crate::scalar::Real;

/// Entangling gate between the system (control) and the ancilla (target).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Flips the ancilla when the system is `|1⟩` (outcome −1).
    Cnot,
    /// Flips the ancilla when the system is `|0⟩` (outcome +1).
    AntiCnot,
}

impl Gate {
    pub fn matrix<T: Real>(self) -> Matrix<T> {
        let one = Complex::new(T::one(), T::zero());
        let mut m = Matrix::zeros(4);
        let (kept, flipped) = match self {
            Gate::Cnot => (0, 1),
            Gate::AntiCnot => (1, 0),
        };
        for a in 0..2 {
            m.set(2 * kept + a, 2 * kept + a, one);
            m.set(2 * flipped + a, 2 * flipped + (1 - a), one);
        }
        m
    }
}

/// Outcome diagonal `p(s, a)` at index `2 s + a` after: gate at `t_i`, free
/// evolution to `t_j`, joint `Z` readout.
pub fn inm_circuit<T: Real>(
    initial: &QubitState<T>,
    model: &SpinModel<T>,
    t_i: T,
    t_j: T,
    gate: Gate,
) -> Result<[T; 4]> {
    check_times(t_i, t_j)?;
    inm_circuit_with(
        initial,
        &model.evolution_map(t_i)?,
        &model.evolution_map(t_j - t_i)?,
        gate,
    )
}

pub fn inm_circuit_with<T: Real>(
    initial: &QubitState<T>,
    to_first: &dyn QubitMap<T>,
    between: &dyn QubitMap<T>,
    gate: Gate,
) -> Result<[T; 4]> {
    let at_first = to_first.apply(initial)?;
    let joint = tensor(&at_first, &QubitState::basis(0));
    let coupled = evolve(&joint, &gate.matrix())?;
    let out = between.apply_to_system(&coupled)?;
    let d = diagonal_probabilities(&out);
    Ok([d[0], d[1], d[2], d[3]])
}

/// Keeps the ancilla-`|0⟩` halves: `p(+,±)` from the CNOT run and `p(−,±)`
/// from the anti-CNOT run.
pub(crate) fn kept_probabilities<T: Real>(
    cnot: &[T; 4],
    anti: &[T; 4],
) -> Result<TwoTimeProbabilities<T>> {
    TwoTimeProbabilities::new(cnot[0], cnot[2], anti[0], anti[2])
}

pub fn inm_correlator<T: Real>(
    initial: &QubitState<T>,
    model: &SpinModel<T>,
    t_i: T,
    t_j: T,
) -> Result<T> {
    let cnot = inm_circuit(initial, model, t_i, t_j, Gate::Cnot)?;
    let anti = inm_circuit(initial, model, t_i, t_j, Gate::AntiCnot)?;
    Ok(correlator_from_probs(&kept_probabilities(&cnot, &anti)?))
}

pub fn inm_correlator_with<T: Real>(
    initial: &QubitState<T>,
    to_first: &dyn QubitMap<T>,
    between: &dyn QubitMap<T>,
) -> Result<T> {
    let cnot = inm_circuit_with(initial, to_first, between, Gate::Cnot)?;
    let anti = inm_circuit_with(initial, to_first, between, Gate::AntiCnot)?;
    Ok(correlator_from_probs(&kept_probabilities(&cnot, &anti)?))
}
