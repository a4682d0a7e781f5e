//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt;

use nalgebra::{Complex, RealField};
use num_traits::ToPrimitive;

/// Real floating-point scalar the network algebra is generic over.
///
/// Implemented for `f32` and `f64`. Every default tolerance in the crate is
/// calibrated for `f64`; callers working in `f32` should pass looser
/// tolerances explicitly.
pub trait Real:
    RealField + Copy + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Lossy conversion to `f64`, used for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type Cx<T> = Complex<T>;

/// Modulus of a complex number without requiring `num_traits::Float`.
#[inline]
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    z.re.hypot(z.im)
}
