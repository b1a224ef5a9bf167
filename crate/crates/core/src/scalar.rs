//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Complex amplitude over the crate scalar.
pub type Complex<T> = num_complex::Complex<T>;

/// Real scalar the whole crate is generic over (`f32` or `f64`).
///
/// The tolerance hooks carry the precision-dependent thresholds of the
/// eigensolver, the orthogonalization and the eigenvalue clustering, so the
/// algorithms themselves stay free of hard-coded `f64` literals.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Jacobi stops once `off(H) <= jacobi_tolerance * ||H||_F`.
    fn jacobi_tolerance() -> Self;
    /// Gram-Schmidt breakdown: a residual norm below this aborts.
    fn breakdown_tolerance() -> Self;
    /// Two eigenvalues closer than this are treated as one level.
    fn cluster_tolerance() -> Self;
    /// Relative tolerance for accepting a matrix as Hermitian.
    fn hermitian_tolerance() -> Self;
    /// Allowed deviation of a probability vector from unit sum.
    fn normalization_tolerance() -> Self;
    /// Allowed deviation of a state vector norm from one.
    fn state_norm_tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn jacobi_tolerance() -> Self {
        1e-13
    }
    fn breakdown_tolerance() -> Self {
        1e-12
    }
    fn cluster_tolerance() -> Self {
        1e-9
    }
    fn hermitian_tolerance() -> Self {
        1e-12
    }
    fn normalization_tolerance() -> Self {
        1e-12
    }
    fn state_norm_tolerance() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn jacobi_tolerance() -> Self {
        1e-6
    }
    fn breakdown_tolerance() -> Self {
        1e-6
    }
    fn cluster_tolerance() -> Self {
        1e-4
    }
    fn hermitian_tolerance() -> Self {
        1e-5
    }
    fn normalization_tolerance() -> Self {
        1e-5
    }
    fn state_norm_tolerance() -> Self {
        1e-4
    }
}
