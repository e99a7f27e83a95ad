//! The numeric substrate: one trait covering floating point and exact
//! rational arithmetic.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Scalar type for measures and kernels.
///
/// `f64` is the fast path; [`BigRational`] is the exact referee. Code written
/// against this trait must not assume rounding (`EXACT` tells it whether
/// arithmetic is exact) and must not assume `Copy`.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic carries no rounding error.
    const EXACT: bool;

    /// Nearest representable value of a finite `f64` (exact for `f64` and
    /// for rationals, rounded for `f32`).
    fn from_f64_nearest(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 must convert")
    }

    /// Lossy view as `f64`, for reports.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// NaN/infinity guard; exact types are always finite.
    fn is_finite_scalar(&self) -> bool;

    fn half(self) -> Self {
        self / Self::from_u8(2).expect("2 must convert")
    }

    /// Nonnegative integer power, by squaring.
    fn powu(&self, mut n: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base.clone();
            n >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }

    fn powu(&self, n: usize) -> Self {
        self.powi(n.try_into().expect("exponent fits i32"))
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }

    fn powu(&self, n: usize) -> Self {
        self.powi(n.try_into().expect("exponent fits i32"))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_finite_scalar(&self) -> bool {
        true
    }
}

/// Shorthand for building exact rationals in tests and fixtures.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn smax<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub fn smin<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_from_f64_is_exact() {
        let half = BigRational::from_f64_nearest(0.5);
        assert_eq!(half, ratio(1, 2));
        // 0.1 is not dyadic; the conversion captures the binary value exactly.
        let tenth = BigRational::from_f64_nearest(0.1);
        assert_eq!(tenth.to_f64_lossy(), 0.1);
        assert_ne!(tenth, ratio(1, 10));
    }

    #[test]
    fn half_works_for_both_scalars() {
        assert_eq!(3.0f64.half(), 1.5);
        assert_eq!(ratio(1, 3).half(), ratio(1, 6));
    }
}
