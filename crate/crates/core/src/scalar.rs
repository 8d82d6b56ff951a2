use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for box geometry, confidences and metrics.
///
/// Implemented for `f32` and `f64`. Pixel planes stay `u8` regardless.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; panics only for types that cannot
    /// represent finite doubles, which `f32`/`f64` always can.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}
