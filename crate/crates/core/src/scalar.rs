//! Floating point element types accepted by the kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating point element: `f32` or `f64`.
///
/// `to_bits_u64` exposes the raw representation so that executors can be
/// compared bit-for-bit against the sequential reference.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn to_bits_u64(self) -> u64;
}

impl Scalar for f32 {
    #[inline]
    fn to_bits_u64(self) -> u64 {
        u64::from(self.to_bits())
    }
}

impl Scalar for f64 {
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }
}
