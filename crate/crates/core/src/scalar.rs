//! Numeric abstraction shared by every solver in the crate.
//!
//! Weights, repair times and all derived times are carried as a [`Scalar`].
//! `f64` is the everyday choice; [`Rational`] gives exact comparisons, which
//! matters wherever ties between ratios decide the outcome.

use std::fmt;

use num_rational::Ratio;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

/// Numeric type usable for weights and times.
pub trait Scalar:
    NumAssign
    + Signed
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Parses a decimal literal such as `3`, `0.25` or `1e-1`.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Whether the value is a whole number.
    fn is_integral(&self) -> bool;

    /// Lossy conversion used at output boundaries.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_usize_exact(value: usize) -> Self {
        Self::from_usize(value).expect("integer representable in scalar")
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Scalar for f32 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse::<f32>().ok().filter(|v| v.is_finite())
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

impl Scalar for Rational {
    fn parse_decimal(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

/// Compares `a_num / a_den` against `b_num / b_den` for positive
/// denominators without dividing.
pub fn cmp_ratio<T: Scalar>(a_num: T, a_den: T, b_num: T, b_den: T) -> Option<std::cmp::Ordering> {
    (a_num * b_den).partial_cmp(&(b_num * a_den))
}

/// Exact decimal (or `p/q`) parsing into a rational.
fn parse_rational(text: &str) -> Option<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }

    let mut numer: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add(i64::from(b - b'0'))?;
    }
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    let mut value = if scale >= 0 {
        Rational::from_integer(numer.checked_mul(pow)?)
    } else {
        Rational::new(numer, pow)
    };
    if negative && !value.is_zero() {
        value = -value;
    }
    Some(value)
}
