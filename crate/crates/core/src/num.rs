//! Generic scalar abstraction.
//!
//! All numerical kernels are generic over [`Real`], so the whole library
//! runs in `f32` or `f64`. Concrete aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable throughout the library.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` literal into a generic scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal must be representable")
}

/// Integer-to-scalar conversion that cannot fail for grid sizes.
#[inline]
pub fn cast_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize must be representable")
}
