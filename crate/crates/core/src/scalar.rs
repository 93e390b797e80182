//! Scalar abstraction for closed-form expectations and weights.
//!
//! Every formula in [`crate::null_model`] and [`crate::generators`] is a
//! polynomial in the edge probability, so the same code evaluates in `f64`
//! for reporting and in exact rationals for oracle checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

/// Numeric type usable as a probability, an expectation or an arc weight.
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Relative tolerance used where a comparison has no caller-supplied
    /// tolerance. Zero for exact types.
    fn default_rel_tol() -> Self;

    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable in scalar type")
    }

    /// `num / den` computed in the scalar type.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_probability(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl Scalar for f64 {
    fn default_rel_tol() -> Self {
        1e-9
    }

    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for f32 {
    fn default_rel_tol() -> Self {
        1e-5
    }

    fn powi(&self, exp: u32) -> Self {
        f32::powi(*self, exp as i32)
    }
}

impl Scalar for Ratio<i64> {
    fn default_rel_tol() -> Self {
        Self::zero()
    }
}

impl Scalar for Ratio<i128> {
    fn default_rel_tol() -> Self {
        Self::zero()
    }
}

impl Scalar for BigRational {
    fn default_rel_tol() -> Self {
        Self::zero()
    }

    fn from_count(count: u64) -> Self {
        BigRational::from_integer(BigInt::from(count))
    }
}

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient exceeds u64")
}

/// C(n, k) in the scalar type; avoids integer overflow for large `n`.
pub fn binomial_in<T: Scalar>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_count(n - i) / T::from_count(i + 1);
    }
    acc
}

/// Total number of triads on `n` nodes.
pub fn triad_total(n: u64) -> u64 {
    binomial(n, 3)
}

pub(crate) fn one_minus<T: Scalar>(p: &T) -> T {
    T::one() - p.clone()
}
