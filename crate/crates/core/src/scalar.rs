use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the whole library is generic over: `f32` or `f64`.
///
/// All spectra, polynomials and wavefunctions are computed in `Complex<T>`
/// for some `T: Real`. The default tolerances shipped with the crate are
/// calibrated for `f64`; `f32` users should scale them accordingly.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for converting an `f64` constant.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }

    /// Exact conversion from a small signed integer.
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("small integer")
    }

    /// Exact conversion from a small index.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("small index")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the generic scalar.
pub type Cplx<T> = Complex<T>;

/// `re + i*im` without spelling out `Complex::new` everywhere.
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

/// Purely imaginary `i*im`.
pub fn imag<T: Real>(im: T) -> Cplx<T> {
    Complex::new(T::zero(), im)
}

/// Real scalar promoted to a complex value.
pub fn real<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}
