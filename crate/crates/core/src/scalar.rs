//! Scalar fields the algebra is generic over.
//!
//! Everything downstream only needs field operations and an exact (or
//! tolerance-based) zero test. `Q` is the exact rational field used for
//! all reported numbers; `f64` is supported for quick numerical sketches.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, Signed};

/// A field of characteristic zero.
pub trait Scalar:
    Num + Clone + Debug + Display + std::ops::Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    /// `n / d` as a field element. Panics on `d == 0`.
    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i64(n).expect("integer embeds") / Self::from_i64(d).expect("integer embeds")
    }

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer embeds")
    }

    /// Zero test used by elimination. Exact for rational types.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// Marker for scalars whose arithmetic is exact; comparisons are then
/// decisions, not estimates.
pub trait ExactScalar: Scalar + Eq + Hash + Signed {}

impl Scalar for BigRational {}
impl ExactScalar for BigRational {}

impl Scalar for Rational64 {}
impl ExactScalar for Rational64 {}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-9
    }
}

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rationals_normalize() {
        let a = q(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(<Q as Scalar>::ratio(6, -4), a);
    }

    #[test]
    fn factorial_reciprocals_are_exact() {
        let mut acc = Q::one();
        for n in 1..=6 {
            acc = acc / qi(n);
        }
        assert_eq!(acc, q(1, 720));
    }

    #[test]
    fn float_zero_test_uses_tolerance() {
        assert!((1e-12f64).is_negligible());
        assert!(!(1e-3f64).is_negligible());
    }
}
