use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point scalar the simulator is generic over: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Three-valued sign: `sgn(0) == 0`.
pub fn sgn<T: Real>(z: T) -> T {
    if z > T::zero() {
        T::one()
    } else if z < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}
