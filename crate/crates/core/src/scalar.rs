//! Scalar fields with a conjugation.
//!
//! Everything in this crate is generic over [`StarField`]. The intended
//! instance is [`GaussRat`](crate::GaussRat), complex numbers with
//! arbitrary-precision rational parts, for which every identity is decided by
//! exact equality. Floating point instances compile and run, but equality
//! checks on them are only as good as the rounding allows.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num, Signed};

/// A field with an involutive conjugation, ordered on its real line.
pub trait StarField:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn conj(&self) -> Self;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; panics when `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// `re + i·im` with both parts given as integer ratios.
    fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self;

    /// The imaginary unit.
    fn i() -> Self;

    /// Sign of the real part.
    fn re_sign(&self) -> Ordering;

    fn is_real(&self) -> bool;

    /// `|z|² = z·z̄`, always real and non-negative.
    fn norm_sqr(&self) -> Self {
        self.clone() * self.conj()
    }
}

impl<T> StarField for Complex<T>
where
    T: Clone + PartialOrd + Debug + Num + Signed + FromPrimitive + Send + Sync + 'static,
{
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(T::from_i64(v).expect("integer fits the real field"), T::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_parts((num, den), (0, 1))
    }

    fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        assert!(re.1 != 0 && im.1 != 0, "zero denominator");
        let part = |(n, d): (i64, i64)| {
            T::from_i64(n).expect("integer fits the real field")
                / T::from_i64(d).expect("integer fits the real field")
        };
        Complex::new(part(re), part(im))
    }

    fn i() -> Self {
        Complex::new(T::zero(), T::one())
    }

    fn re_sign(&self) -> Ordering {
        self.re.partial_cmp(&T::zero()).unwrap_or(Ordering::Equal)
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}
