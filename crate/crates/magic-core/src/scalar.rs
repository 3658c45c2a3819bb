//! Real scalar abstraction for the dense linear algebra.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar the toolkit is generic over (`f32`, `f64`).
///
/// Tolerances in the contracts are stated for `f64`; instantiating at
/// `f32` keeps the algorithms valid but not the advertised precision.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion")
    }

    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Complex number over a [`Scalar`].
pub type C<T> = Complex<T>;

pub fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    Complex::new(T::real(re), T::real(im))
}

pub fn c_zero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn c_one<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// i^k for integer k, exact.
pub fn i_pow<T: Scalar>(k: u8) -> C<T> {
    match k % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}
