//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Tolerances throughout the crate are stated for `f64`; with `f32` the
/// same code runs but only single-precision accuracy can be expected.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln cosh(t)` without overflow for large `|t|`.
pub(crate) fn ln_cosh<T: Real>(t: T) -> T {
    let a = t.abs();
    a + (-(a + a)).exp().ln_1p() - T::LN_2()
}

/// `ln Σ c_k exp(e_k)` for nonnegative coefficients; zero coefficients are skipped.
///
/// Returns `-inf` when every coefficient vanishes.
pub(crate) fn ln_sum_exp<T: Real>(terms: &[(T, T)]) -> T {
    let shift = terms
        .iter()
        .filter(|(c, _)| *c > T::zero())
        .map(|&(_, e)| e)
        .fold(T::neg_infinity(), T::max);
    if shift == T::neg_infinity() {
        return shift;
    }
    let s: T = terms
        .iter()
        .filter(|(c, _)| *c > T::zero())
        .map(|&(c, e)| c * (e - shift).exp())
        .sum();
    shift + s.ln()
}
