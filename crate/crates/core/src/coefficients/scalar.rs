use num::{BigInt, BigRational, FromPrimitive, ToPrimitive};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact arbitrary-precision rational, the carrier for coefficient tables.
pub type Rational = BigRational;

/// Shorthand for an exact fraction.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Numeric backend for coefficient generation.
///
/// Instantiated with [`Rational`] for exact table generation and
/// verification, and with `f64` for direct floating-point generation.  The
/// runtime path generates tables exactly and converts each entry to `f64`
/// once, at cache-insertion time.
pub trait CoeffScalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Nearest `f64`; the single rational-to-float conversion point.
    fn to_f64(&self) -> f64;
}

impl CoeffScalar for Rational {
    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_i64(v).unwrap()
    }
    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational out of f64 range")
    }
}

impl CoeffScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Format a rational as `n` or `n/d` with the sign on the numerator.
pub fn format_rational(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_helpers() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(format_rational(&rat(-115, 64)), "-115/64");
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(CoeffScalar::to_f64(&rat(115, 64)), 115.0 / 64.0);
    }
}
