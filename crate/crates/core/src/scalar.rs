//! Numeric abstraction shared by every module.
//!
//! Combinatorial objectives (min-max costs, knapsack profits, excess
//! functions) only need an ordered field, so they are written against
//! [`Scalar`] and can be evaluated exactly over [`Rational`]. Anything that
//! takes square roots (step sizes, regret bounds, projections) needs
//! [`Real`], which is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, NumAssign, Signed, ToPrimitive};

/// Exact rational scalar used by the consistency checks.
pub type Rational = Ratio<i64>;

/// Ordered field element with a lossless decimal text form.
pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + NumAssign
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Parses the text written by [`Scalar::to_decimal`]; `None` on junk or
    /// non-finite input.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Renders the value so that `parse_decimal` returns it unchanged.
    fn to_decimal(&self) -> String;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("usize not representable")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar.
pub trait Real: Scalar + Float {}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn parse_decimal(text: &str) -> Option<Self> {
                text.trim().parse::<$t>().ok().filter(|v| v.is_finite())
            }

            // `Display` for floats prints the shortest digit string that
            // round-trips and never switches to exponent notation.
            fn to_decimal(&self) -> String {
                format!("{}", self)
            }
        }

        impl Real for $t {}
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for Rational {
    fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: i64 = num.trim().parse().ok()?;
            let den: i64 = den.trim().parse().ok()?;
            if den == 0 {
                return None;
            }
            return Some(Ratio::new(num, den));
        }
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mantissa: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
        let scale = 10i64.checked_pow(u32::try_from(frac_part.len()).ok()?)?;
        let value = Ratio::new(mantissa, scale);
        Some(if negative { -value } else { value })
    }

    fn to_decimal(&self) -> String {
        let den = *self.denom();
        let (mut twos, mut fives, mut rest) = (0u32, 0u32, den);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return format!("{}/{}", self.numer(), den);
        }
        let places = twos.max(fives);
        if places == 0 {
            return self.numer().to_string();
        }
        let scaled = match 10i128.checked_pow(places) {
            Some(p) => i128::from(*self.numer()) * p / i128::from(den),
            None => return format!("{}/{}", self.numer(), den),
        };
        let sign = if scaled < 0 { "-" } else { "" };
        let digits = format!("{:0>width$}", scaled.unsigned_abs(), width = places as usize + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - places as usize);
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_decimal_forms() {
        let r = |n, d| Rational::new(n, d);
        assert_eq!(r(5, 2).to_decimal(), "2.5");
        assert_eq!(r(-1, 8).to_decimal(), "-0.125");
        assert_eq!(r(7, 1).to_decimal(), "7");
        assert_eq!(r(1, 3).to_decimal(), "1/3");
        assert_eq!(Rational::parse_decimal("-0.125"), Some(r(-1, 8)));
        assert_eq!(Rational::parse_decimal("1/3"), Some(r(1, 3)));
        assert_eq!(Rational::parse_decimal(".5"), Some(r(1, 2)));
        assert_eq!(Rational::parse_decimal("abc"), None);
        assert_eq!(Rational::parse_decimal("1/0"), None);
    }

    #[test]
    fn float_decimal_roundtrip() {
        for v in [0.1f64, 1e-7, 123456.789, 0.0, 2.0 / 3.0] {
            assert_eq!(f64::parse_decimal(&v.to_decimal()), Some(v));
        }
        assert_eq!(f64::parse_decimal("inf"), None);
    }

    #[test]
    fn max_min_helpers() {
        assert_eq!(3.0f64.max_of(5.0), 5.0);
        assert_eq!(Rational::new(1, 2).min_of(Rational::new(1, 3)), Rational::new(1, 3));
    }
}
