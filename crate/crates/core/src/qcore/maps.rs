#[cfg(test)]
use num_complex::Complex;

use super::matrix::Matrix;
use super::state::{DensityState, QubitState, TwoQubitState};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A linear map on single-qubit operators (a unitary conjugation or a
/// channel), applied to the system qubit.
pub trait QubitMap<T: Real>: Send + Sync {
    /// Action on an arbitrary 2×2 operator; must be linear.
    fn apply_operator(&self, m: &Matrix<T>) -> Matrix<T>;

    fn apply(&self, state: &QubitState<T>) -> Result<QubitState<T>> {
        QubitState::from_matrix(self.apply_operator(state.matrix()))
    }

    /// `(E ⊗ id)(ρ)` on a system ⊗ ancilla state.
    fn apply_to_system(&self, state: &TwoQubitState<T>) -> Result<TwoQubitState<T>> {
        let m = state.matrix();
        let mut out = Matrix::zeros(4);
        for a in 0..2 {
            for b in 0..2 {
                let mut block = Matrix::zeros(2);
                for s in 0..2 {
                    for s2 in 0..2 {
                        block.set(s, s2, m.get(2 * s + a, 2 * s2 + b));
                    }
                }
                let mapped = self.apply_operator(&block);
                for s in 0..2 {
                    for s2 in 0..2 {
                        out.set(2 * s + a, 2 * s2 + b, mapped.get(s, s2));
                    }
                }
            }
        }
        TwoQubitState::from_matrix(out)
    }
}

/// Conjugation by a 2×2 unitary.
#[derive(Debug, Clone)]
pub struct UnitaryMap<T> {
    unitary: Matrix<T>,
}

impl<T: Real> UnitaryMap<T> {
    pub fn new(unitary: Matrix<T>) -> Result<Self> {
        if unitary.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: unitary.dim(),
            });
        }
        let defect = unitary.unitarity_defect();
        if defect > T::loose_tol() {
            return Err(Error::NonUnitary(defect.to_f64_lossy()));
        }
        Ok(Self { unitary })
    }

    pub fn identity() -> Self {
        Self {
            unitary: Matrix::identity(2),
        }
    }

    pub fn unitary(&self) -> &Matrix<T> {
        &self.unitary
    }
}

impl<T: Real> QubitMap<T> for UnitaryMap<T> {
    fn apply_operator(&self, m: &Matrix<T>) -> Matrix<T> {
        self.unitary.conjugate(m)
    }
}

/// Maps applied in order: `maps[0]` first.
pub struct Composed<'a, T> {
    maps: Vec<&'a dyn QubitMap<T>>,
}

impl<'a, T: Real> Composed<'a, T> {
    pub fn new(maps: Vec<&'a dyn QubitMap<T>>) -> Self {
        Self { maps }
    }
}

impl<T: Real> QubitMap<T> for Composed<'_, T> {
    fn apply_operator(&self, m: &Matrix<T>) -> Matrix<T> {
        self.maps
            .iter()
            .fold(m.clone(), |acc, map| map.apply_operator(&acc))
    }
}

/// `|0⟩⟨1|`, a traceless probe for linear maps.
#[cfg(test)]
fn coherence_probe<T: Real>() -> Matrix<T> {
    let mut m = Matrix::zeros(2);
    m.set(0, 1, Complex::new(T::one(), T::zero()));
    m
}
