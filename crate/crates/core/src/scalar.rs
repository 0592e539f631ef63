//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Tolerances are part of the scalar because an identity that holds to
/// `1e-12` in double precision only holds to a few ulps of `f32`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Tolerance for exact algebraic identities (Hermiticity, unitarity).
    fn strict_tol() -> Self;
    /// Tolerance for compounded numerics (PSD floor, trace after products).
    fn loose_tol() -> Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn strict_tol() -> Self {
        1e-12
    }
    fn loose_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn strict_tol() -> Self {
        1e-5
    }
    fn loose_tol() -> Self {
        1e-4
    }
}
