//! Numeric backends for probability computations.
//!
//! Every exact computation in the crate is generic over [`Prob`], which is
//! implemented for `f64` (the fast path) and [`BigRational`] (the exact path).

use std::fmt::Debug;

use num::bigint::BigInt;
use num::traits::{Num, Signed, ToPrimitive, Zero};
use num::BigRational;

use crate::error::{Result, ShootoutError};

pub trait Prob: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Prob for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Prob for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub(crate) fn half<T: Prob>() -> T {
    T::from_ratio(1, 2)
}

/// Parses `"2/3"`, `"0.75"`, `"1"` into an exact rational.
///
/// Decimal literals are read digit by digit, so `"0.7"` becomes exactly
/// `7/10` rather than the nearest binary double.
pub fn parse_rational(literal: &str) -> Result<BigRational> {
    let s = literal.trim();
    let bad = || ShootoutError::BadLiteral(literal.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
        .map_err(|_| bad())?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Rounds half away from zero to `decimals` places and formats the result.
///
/// The input double is converted to its exact rational value first, so a
/// value that sits exactly on a rounding boundary (e.g. `0.5625` at three
/// places) always rounds up in magnitude.
pub fn round_half_up(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    round_half_up_exact(
        &BigRational::from_float(x).expect("finite double"),
        decimals,
    )
}

/// [`round_half_up`] for an exact rational.
pub fn round_half_up_exact(x: &BigRational, decimals: usize) -> String {
    let scale = BigRational::from_integer(num::pow(BigInt::from(10), decimals));
    let scaled = (x.abs() * scale + BigRational::new(1.into(), 2.into())).floor();
    let digits = scaled.to_integer().to_string();
    let digits = format!("{digits:0>width$}", width = decimals + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - decimals);
    let negative = x.is_negative() && digits.bytes().any(|b| b != b'0');
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Whether `x` is within `slack` of a point where rounding to `decimals`
/// places flips, so that float error could change the rounded result.
pub fn near_rounding_boundary(x: f64, decimals: usize, slack: f64) -> bool {
    let scale = 10f64.powi(decimals as i32);
    let scaled = x.abs() * scale;
    (scaled - scaled.floor() - 0.5).abs() < slack * scale
}

/// Formats like C's `%.{digits}g`: significant digits, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        return format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
