use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Dense square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = &self.data[r * self.dim + c];
                write!(f, "{:?}{:+?}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "dim",
            reason: format!("must be 2 or 4, got {dim}"),
        })
    }
}

#[cfg(test)]
fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad sizes and NaN/Inf.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex::new(d, T::zero()));
        }
        Ok(m)
    }

    pub fn pauli(p: Pauli) -> Self {
        let (o, z) = (T::one(), T::zero());
        let data = match p {
            Pauli::I => [(o, z), (z, z), (z, z), (o, z)],
            Pauli::X => [(z, z), (o, z), (o, z), (z, z)],
            Pauli::Y => [(z, z), (z, -o), (z, o), (z, z)],
            Pauli::Z => [(o, z), (z, z), (z, z), (-o, z)],
        };
        Self {
            dim: 2,
            data: data.iter().map(|&(re, im)| Complex::new(re, im)).collect(),
        }
    }

    /// Two-qubit Pauli product `a ⊗ b` (first factor is the system).
    pub fn pauli2(a: Pauli, b: Pauli) -> Self {
        Self::pauli(a).kron(&Self::pauli(b))
    }

    /// `|k⟩⟨k|` in dimension `dim`.
    pub fn projector(dim: usize, k: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(k, k, Complex::new(T::one(), T::zero()));
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Kronecker product of two 2×2 matrices.
    ///
    /// # Panics
    /// If either factor is not 2×2.
    pub fn kron(&self, other: &Self) -> Self {
        assert!(
            self.dim == 2 && other.dim == 2,
            "kron is defined for 2x2 factors only"
        );
        let mut out = Self::zeros(4);
        for r1 in 0..2 {
            for c1 in 0..2 {
                let a = self.get(r1, c1);
                for r2 in 0..2 {
                    for c2 in 0..2 {
                        out.set(2 * r1 + r2, 2 * c1 + c2, a * other.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn real_diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Spectral norm, via the largest eigenvalue of `A†A`.
    pub fn operator_norm(&self) -> T {
        let gram = &self.adjoint() * self;
        gram.hermitian_eigenvalues()
            .into_iter()
            .fold(T::zero(), T::max)
            .max(T::zero())
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `‖U†U − I‖` measured entrywise.
    pub fn unitarity_defect(&self) -> T {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        &(self * rho) * &self.adjoint()
    }

    /// Eigenvalues (ascending) of the Hermitian part of the matrix.
    ///
    /// Works on the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose
    /// spectrum is that of the matrix with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let n = self.dim;
        let two = T::lit(2.0);
        let m = 2 * n;
        let mut a = vec![T::zero(); m * m];
        for r in 0..n {
            for c in 0..n {
                // symmetrize to tolerate rounding in nearly Hermitian input
                let h = (self.get(r, c) + self.get(c, r).conj()) / Complex::new(two, T::zero());
                a[r * m + c] = h.re;
                a[(r + n) * m + (c + n)] = h.re;
                a[r * m + (c + n)] = -h.im;
                a[(r + n) * m + c] = h.im;
            }
        }
        let mut eig = jacobi_eigenvalues(&mut a, m);
        eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        eig.into_iter().step_by(2).collect()
    }

    /// `exp(self)` by scaling and squaring of a truncated Taylor series.
    pub fn expm(&self) -> Self {
        let norm = self.frobenius_norm();
        let half = T::lit(0.5);
        let mut squarings = 0u32;
        let mut scale = T::one();
        while norm * scale > half {
            scale = scale * half;
            squarings += 1;
        }
        let a = self.scale_real(scale);
        let mut term = Self::identity(self.dim);
        let mut sum = Self::identity(self.dim);
        for k in 1..=24 {
            term = (&term * &a).scale_real(T::one() / T::lit(k as f64));
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }
}

/// Cyclic Jacobi eigenvalue iteration on a dense real symmetric matrix.
fn jacobi_eigenvalues<T: Real>(a: &mut [T], n: usize) -> Vec<T> {
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        let scale: T = (0..n * n).map(|i| a[i] * a[i]).sum::<T>() + T::min_positive_value();
        if off <= scale * T::epsilon() * T::epsilon() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] = out.data[r * n + c] + a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}
