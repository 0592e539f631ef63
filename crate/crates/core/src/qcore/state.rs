use num_complex::Complex;

use super::matrix::{Matrix, Pauli};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A validated density operator of fixed dimension.
pub trait DensityState<T: Real>: Sized + Clone {
    const DIM: usize;

    fn matrix(&self) -> &Matrix<T>;

    /// Validates Hermiticity, unit trace and positivity.
    fn from_matrix(m: Matrix<T>) -> Result<Self>;
}

fn validate_density<T: Real>(m: &Matrix<T>, dim: usize) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: m.dim(),
        });
    }
    if !m.is_hermitian(T::strict_tol()) {
        return Err(Error::InvalidState("matrix is not Hermitian".into()));
    }
    let tr = m.trace();
    if (tr.re - T::one()).abs() > T::strict_tol() || tr.im.abs() > T::strict_tol() {
        return Err(Error::InvalidState(format!(
            "trace {}{:+}i is not 1",
            tr.re, tr.im
        )));
    }
    let min_eig = m
        .hermitian_eigenvalues()
        .into_iter()
        .fold(T::infinity(), T::min);
    if min_eig < -T::loose_tol() {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {min_eig}"
        )));
    }
    Ok(())
}

/// Single-qubit density matrix `[[a, b], [b*, 1 - a]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState<T> {
    matrix: Matrix<T>,
}

/// Two-qubit density matrix, ordered system ⊗ ancilla.
///
/// Basis index of `|s a⟩` is `2 s + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState<T> {
    matrix: Matrix<T>,
}

impl<T: Real> DensityState<T> for QubitState<T> {
    const DIM: usize = 2;

    fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn from_matrix(m: Matrix<T>) -> Result<Self> {
        validate_density(&m, 2)?;
        Ok(Self { matrix: m })
    }
}

impl<T: Real> DensityState<T> for TwoQubitState<T> {
    const DIM: usize = 4;

    fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn from_matrix(m: Matrix<T>) -> Result<Self> {
        validate_density(&m, 4)?;
        Ok(Self { matrix: m })
    }
}

impl<T: Real> QubitState<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        Self::from_matrix(m)
    }

    /// `|k⟩⟨k|` for `k ∈ {0, 1}`.
    pub fn basis(k: usize) -> Self {
        Self {
            matrix: Matrix::projector(2, k),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Matrix::identity(2).scale_real(T::lit(0.5)),
        }
    }

    /// Population of `|0⟩`.
    pub fn a(&self) -> T {
        self.matrix.get(0, 0).re
    }

    /// Coherence `⟨0|ρ|1⟩`.
    pub fn b(&self) -> Complex<T> {
        self.matrix.get(0, 1)
    }

    pub fn expectation(&self, p: Pauli) -> T {
        (&Matrix::pauli(p) * &self.matrix).trace().re
    }
}

impl<T: Real> TwoQubitState<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        Self::from_matrix(m)
    }

    /// `|s a⟩⟨s a|`.
    pub fn basis(system: usize, ancilla: usize) -> Self {
        Self {
            matrix: Matrix::projector(4, 2 * system + ancilla),
        }
    }
}

/// Bloch vector of a single-qubit state, `ρ = ½(I + v·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("Bloch component"));
        }
        let v = Self { x, y, z };
        if v.norm_sqr() > T::one() + T::strict_tol() {
            return Err(Error::InvalidState(format!(
                "Bloch vector norm {} exceeds 1",
                v.norm_sqr().sqrt()
            )));
        }
        Ok(v)
    }

    pub fn origin() -> Self {
        Self {
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// `ρ = ½(I + vx X + vy Y + vz Z)`.
pub fn density_from_bloch<T: Real>(v: &BlochVector<T>) -> Result<QubitState<T>> {
    let v = BlochVector::new(v.x, v.y, v.z)?;
    let half = T::lit(0.5);
    let m = Matrix::from_row_major(
        2,
        vec![
            Complex::new(half * (T::one() + v.z), T::zero()),
            Complex::new(half * v.x, -half * v.y),
            Complex::new(half * v.x, half * v.y),
            Complex::new(half * (T::one() - v.z), T::zero()),
        ],
    )?;
    QubitState::new(m)
}

pub fn bloch_from_density<T: Real>(s: &QubitState<T>) -> BlochVector<T> {
    BlochVector {
        x: s.expectation(Pauli::X),
        y: s.expectation(Pauli::Y),
        z: s.expectation(Pauli::Z),
    }
}

/// Rotation generator. `ZZ` acts on both qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationAxis {
    X,
    Y,
    Z,
    ZZ,
}

/// `exp(-i A θ / 2)` for a Pauli (or Pauli-product) generator `A`.
pub fn rotation_unitary<T: Real>(axis: RotationAxis, angle: T) -> Result<Matrix<T>> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    let generator = match axis {
        RotationAxis::X => Matrix::pauli(Pauli::X),
        RotationAxis::Y => Matrix::pauli(Pauli::Y),
        RotationAxis::Z => Matrix::pauli(Pauli::Z),
        RotationAxis::ZZ => Matrix::pauli2(Pauli::Z, Pauli::Z),
    };
    Ok(pauli_exponential(&generator, angle))
}

/// `cos(θ/2) I − i sin(θ/2) A` for any `A` with `A² = I`.
pub(crate) fn pauli_exponential<T: Real>(generator: &Matrix<T>, angle: T) -> Matrix<T> {
    let half = angle / T::lit(2.0);
    let id = Matrix::identity(generator.dim()).scale_real(half.cos());
    &id - &generator.scale(Complex::new(T::zero(), half.sin()))
}

/// Schrödinger-picture conjugation `U ρ U†`.
pub fn evolve<T: Real, S: DensityState<T>>(state: &S, unitary: &Matrix<T>) -> Result<S> {
    if unitary.dim() != S::DIM {
        return Err(Error::DimensionMismatch {
            expected: S::DIM,
            got: unitary.dim(),
        });
    }
    let defect = unitary.unitarity_defect();
    if defect > T::loose_tol() {
        return Err(Error::NonUnitary(defect.to_f64_lossy()));
    }
    S::from_matrix(unitary.conjugate(state.matrix()))
}

/// Which tensor factor to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Ancilla,
}

pub fn tensor<T: Real>(system: &QubitState<T>, ancilla: &QubitState<T>) -> TwoQubitState<T> {
    TwoQubitState {
        matrix: system.matrix().kron(ancilla.matrix()),
    }
}

/// Reduced state of the kept factor.
pub fn partial_trace<T: Real>(state: &TwoQubitState<T>, keep: Subsystem) -> QubitState<T> {
    let m = state.matrix();
    let mut out = Matrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..2 {
                acc = acc
                    + match keep {
                        Subsystem::System => m.get(2 * i + k, 2 * j + k),
                        Subsystem::Ancilla => m.get(2 * k + i, 2 * k + j),
                    };
            }
            out.set(i, j, acc);
        }
    }
    QubitState { matrix: out }
}

fn check_detector_args<T: Real>(omega: T, lambda: T, t: Option<T>) -> Result<()> {
    if !omega.is_finite() || !lambda.is_finite() || t.is_some_and(|t| !t.is_finite()) {
        return Err(Error::NonFinite("detector parameter"));
    }
    if omega <= T::zero() {
        return Err(crate::error::invalid("omega", "must be positive"));
    }
    if lambda < T::zero() {
        return Err(crate::error::invalid("lambda", "must be non-negative"));
    }
    Ok(())
}

/// System-detector Hamiltonian `H_D = (ω/2) X⊗I + λω Y⊗X`.
pub fn detector_hamiltonian<T: Real>(omega: T, lambda: T) -> Result<Matrix<T>> {
    check_detector_args(omega, lambda, None)?;
    let free = Matrix::pauli2(Pauli::X, Pauli::I).scale_real(omega / T::lit(2.0));
    let coupling = Matrix::pauli2(Pauli::Y, Pauli::X).scale_real(lambda * omega);
    Ok(&free + &coupling)
}

/// `exp(-i H_D t) = cos(Ωt/2) I − (2i/Ω) sin(Ωt/2) H_D`, valid because
/// `H_D² = (Ω²/4) I` with `Ω = ω √(1 + 4λ²)`.
pub fn detector_propagator<T: Real>(omega: T, lambda: T, t: T) -> Result<Matrix<T>> {
    check_detector_args(omega, lambda, Some(t))?;
    let h = detector_hamiltonian(omega, lambda)?;
    let big_omega = omega * (T::one() + T::lit(4.0) * lambda * lambda).sqrt();
    let half = big_omega * t / T::lit(2.0);
    let id = Matrix::identity(4).scale_real(half.cos());
    let k = T::lit(2.0) * half.sin() / big_omega;
    Ok(&id - &h.scale(Complex::new(T::zero(), k)))
}

/// Diagonal of a density matrix as outcome probabilities.
///
/// Rounding negatives are clamped to zero and the vector renormalized.
pub fn diagonal_probabilities<T: Real, S: DensityState<T>>(state: &S) -> Vec<T> {
    let clamped: Vec<T> = state
        .matrix()
        .real_diagonal()
        .into_iter()
        .map(|p| p.max(T::zero()).min(T::one()))
        .collect();
    let total: T = clamped.iter().copied().sum();
    clamped.into_iter().map(|p| p / total).collect()
}
