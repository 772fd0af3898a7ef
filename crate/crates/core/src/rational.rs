//! Exact rational arithmetic.
//!
//! Every probability, weight, and threshold in this crate is a
//! [`Rational`]: arbitrary precision, always in lowest terms, never rounded.
//! This module adds the conversions the rest of the crate needs, most
//! importantly exact parsing of decimal literals (`.99` is 99/100, not the
//! nearest binary float).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// `n/d` from machine integers. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses a rational literal exactly.
///
/// Accepted forms: an integer (`3`), a fraction of integers (`99/100`),
/// or a decimal (`0.99`, `.99`). An optional leading `-` is allowed.
/// Decimals convert exactly: `.99` becomes 99/100.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if body.is_empty() {
        return Err(malformed());
    }

    let magnitude = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(malformed)?;
        let den = parse_digits(den).ok_or_else(malformed)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        Rational::new(num, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(whole).ok_or_else(malformed)?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_digits: BigInt = parse_digits(frac).ok_or_else(malformed)?;
        Rational::new(whole * &scale + frac_digits, scale)
    } else {
        Rational::from_integer(parse_digits(body).ok_or_else(malformed)?)
    };

    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_digits(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// True iff `r` is in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}
