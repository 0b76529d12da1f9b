//! Scalar abstraction shared by every module.
//!
//! The simulator is written once against [`Real`] and instantiated for `f64`
//! (the default everywhere, see the aliases in the crate root) or `f32`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type underlying the complex amplitudes.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (tolerances, literals) into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into this type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`].
pub type Amp<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Amp<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> Amp<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Amp<T> {
    Complex::new(T::one(), T::zero())
}

/// Squared Euclidean norm of an amplitude slice.
pub fn norm_sqr<T: Real>(amps: &[Amp<T>]) -> T {
    amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}
