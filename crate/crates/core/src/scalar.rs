//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the library computes in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance adequate for adaptive routines at this precision.
    #[inline]
    fn quad_tol() -> Self {
        Self::lit(1e-11).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Half-width (in e-folds) of the widest log window the sup/integral
    /// routines may explore before powers of typical weights overflow.
    #[inline]
    fn max_log_span() -> Self {
        Self::max_value().ln() / Self::lit(6.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
