//! Floating-point abstraction for geometric quantities.
//!
//! Layout geometry and the Fitts computations are generic over any type
//! implementing [`Scalar`]; `f64` and `f32` both qualify. Durations are not
//! generic: they are carried as integer microseconds (see [`crate::time`]).

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable for millimeter geometry.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the type cannot represent finite `f64`s.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Rounds to three fractional digits, the precision of layout files.
pub fn round_mm<T: Scalar>(value: T) -> T {
    T::lit((value.as_f64() * 1000.0).round() / 1000.0)
}
