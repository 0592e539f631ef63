use num_complex::Complex;

use super::{GradientMask, PulseSequence, SequenceElement, Target};
use crate::error::{invalid, Error, Result};
use crate::qcore::{rotation_unitary, DensityState, Matrix, Pauli, RotationAxis, TwoQubitState};
use crate::scalar::Real;

/// Heteronuclear pair with scalar coupling `J` (Hz); free evolution is
/// `exp(−i (πJ/2) Z⊗Z t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmrPair<T> {
    pub j_coupling_hz: T,
}

impl<T: Real> Default for NmrPair<T> {
    fn default() -> Self {
        Self {
            j_coupling_hz: T::lit(215.15),
        }
    }
}

impl<T: Real> NmrPair<T> {
    /// `ZZ` angle accumulated in `duration` seconds.
    pub fn zz_angle(&self, duration: T) -> T {
        T::PI() * self.j_coupling_hz * duration
    }
}

fn pauli_of(axis: RotationAxis) -> Pauli {
    match axis {
        RotationAxis::X => Pauli::X,
        RotationAxis::Y => Pauli::Y,
        RotationAxis::Z => Pauli::Z,
        RotationAxis::ZZ => unreachable!("validated rotation axis"),
    }
}

/// `σ` on the addressed qubit(s), as a 4×4 generator.
fn local_generator<T: Real>(axis: RotationAxis, target: Target) -> Matrix<T> {
    let p = pauli_of(axis);
    match target {
        Target::System => Matrix::pauli2(p, Pauli::I),
        Target::Ancilla => Matrix::pauli2(Pauli::I, p),
        Target::Both => &Matrix::pauli2(p, Pauli::I) + &Matrix::pauli2(Pauli::I, p),
    }
}

fn local_rotation<T: Real>(axis: RotationAxis, angle: T, target: Target) -> Result<Matrix<T>> {
    let u = rotation_unitary(axis, angle)?;
    let id = Matrix::identity(2);
    Ok(match target {
        Target::System => u.kron(&id),
        Target::Ancilla => id.kron(&u),
        Target::Both => u.kron(&u),
    })
}

/// Unitary of a gradient-free element.
pub fn element_unitary<T: Real>(e: &SequenceElement<T>, pair: &NmrPair<T>) -> Result<Matrix<T>> {
    match e {
        SequenceElement::Rotation {
            axis,
            angle,
            target,
        } => local_rotation(*axis, *angle, *target),
        SequenceElement::ZzEvolution { angle } => rotation_unitary(RotationAxis::ZZ, *angle),
        SequenceElement::Delay { duration } => {
            rotation_unitary(RotationAxis::ZZ, pair.zz_angle(*duration))
        }
        SequenceElement::Gradient { .. } => Err(invalid(
            "sequence",
            "gradients are not unitary; use apply_sequence",
        )),
    }
}

fn product<T: Real>(
    seq: &PulseSequence<T>,
    mut each: impl FnMut(&SequenceElement<T>) -> Result<Matrix<T>>,
) -> Result<Matrix<T>> {
    seq.elements()
        .iter()
        .try_fold(Matrix::identity(4), |acc, e| Ok(&each(e)? * &acc))
}

/// Product of the element unitaries with instantaneous pulses.
pub fn sequence_unitary_ideal<T: Real>(
    seq: &PulseSequence<T>,
    pair: &NmrPair<T>,
) -> Result<Matrix<T>> {
    product(seq, |e| element_unitary(e, pair))
}

/// As [`sequence_unitary_ideal`], but each rotation lasts `pulse_duration`
/// with the coupling switched on: `H = (θ/2τ) σ + (πJ/2) Z⊗Z` for time `τ`.
pub fn sequence_unitary_with_drift<T: Real>(
    seq: &PulseSequence<T>,
    pair: &NmrPair<T>,
    pulse_duration: T,
) -> Result<Matrix<T>> {
    if !pulse_duration.is_finite() {
        return Err(Error::NonFinite("pulse duration"));
    }
    if pulse_duration < T::zero() {
        return Err(Error::NegativeTime(format!(
            "pulse duration {pulse_duration}"
        )));
    }
    if pulse_duration == T::zero() {
        return sequence_unitary_ideal(seq, pair);
    }
    let coupling =
        Matrix::pauli2(Pauli::Z, Pauli::Z).scale_real(T::PI() * pair.j_coupling_hz / T::lit(2.0));
    product(seq, |e| match e {
        SequenceElement::Rotation {
            axis,
            angle,
            target,
        } => {
            let control =
                local_generator(*axis, *target).scale_real(*angle / (T::lit(2.0) * pulse_duration));
            let h = &control + &coupling;
            Ok(h.scale(Complex::new(T::zero(), -pulse_duration)).expm())
        }
        other => element_unitary(other, pair),
    })
}

fn apply_gradient<T: Real>(m: &Matrix<T>, mask: &GradientMask) -> Matrix<T> {
    let mut out = m.clone();
    let zero = Complex::new(T::zero(), T::zero());
    match mask {
        GradientMask::AllCoherences => {
            for r in 0..4 {
                for c in 0..4 {
                    if r != c {
                        out.set(r, c, zero);
                    }
                }
            }
        }
        GradientMask::Entries(entries) => {
            for &(r, c) in entries {
                out.set(r, c, zero);
                out.set(c, r, zero);
            }
        }
    }
    out
}

/// Runs the sequence on a state; gradients act as coherence-removing
/// channels.
pub fn apply_sequence<T: Real>(
    seq: &PulseSequence<T>,
    state: &TwoQubitState<T>,
    pair: &NmrPair<T>,
) -> Result<TwoQubitState<T>> {
    let mut rho = state.matrix().clone();
    for e in seq.elements() {
        rho = match e {
            SequenceElement::Gradient { mask } => apply_gradient(&rho, mask),
            other => element_unitary(other, pair)?.conjugate(&rho),
        };
    }
    TwoQubitState::from_matrix(rho)
}

/// `|tr(A† B)| / dim`: one iff the unitaries agree up to a global phase.
pub fn fidelity<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let f = (&a.adjoint() * b).trace().norm() / T::from_usize(a.dim()).unwrap();
    Ok(f.min(T::one()))
}

pub fn verify_decomposition<T: Real>(
    seq: &PulseSequence<T>,
    target: &Matrix<T>,
    pair: &NmrPair<T>,
) -> Result<T> {
    if target.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: target.dim(),
        });
    }
    let defect = target.unitarity_defect();
    if defect > T::loose_tol() {
        return Err(Error::NonUnitary(defect.to_f64_lossy()));
    }
    fidelity(&sequence_unitary_ideal(seq, pair)?, target)
}
