//! Exact rational numbers for constants and edge weights.
//!
//! Truth degrees themselves live on a fixed-denominator grid (see [`crate::truth`]);
//! this module covers the places where arbitrary exact rationals appear before they
//! are pinned to a grid: numeric literals in scheme formulas, weighted-average
//! weights, and commitment/trust weights read from files. Parsing always goes
//! through the literal decimal text, never through a float, so `0.1` means 1/10.

use num_rational::Ratio;
use thiserror::Error;

/// An exact rational number. Always normalized (reduced, positive denominator).
pub type Rational = Ratio<i64>;

/// Largest number of significant digits (and largest power-of-ten shift)
/// accepted in a literal. Keeps every intermediate inside `i64`.
const MAX_SCALE: u32 = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty numeric literal")]
    Empty,
    #[error("malformed numeric literal `{0}`")]
    Malformed(String),
    #[error("numeric literal `{0}` needs more than {MAX_SCALE} digits of precision")]
    OutOfRange(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `a/b` fraction text or any decimal literal (see [`parse_decimal`]).
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Malformed(text.to_string()))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| RationalParseError::Malformed(text.to_string()))?;
        if d == 0 {
            return Err(RationalParseError::ZeroDenominator(text.to_string()));
        }
        Ok(Rational::new(n, d))
    } else {
        parse_decimal(text)
    }
}

/// Parses a decimal literal (`2`, `0.75`, `-1.5e-2`) into an exact rational.
///
/// This is the JSON number grammar; the text is converted digit-by-digit so the
/// result is the rational the human wrote, not the nearest double.
pub fn parse_decimal(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(text.to_string());

    let (sign, rest) = match text.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exp_part) = match rest.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (rest, None),
    };
    let mut exp: i32 = match exp_part {
        Some(e) => e.parse().map_err(|_| malformed())?,
        None => 0,
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(malformed());
    }

    let mut digits: String = format!("{int_part}{frac_part}");
    exp = exp
        .checked_sub(frac_part.len() as i32)
        .ok_or_else(|| RationalParseError::OutOfRange(text.to_string()))?;
    // Normalize so precision limits apply to significant digits only.
    let trimmed = digits.trim_start_matches('0');
    digits = trimmed.to_string();
    while digits.ends_with('0') {
        digits.pop();
        exp += 1;
    }
    if digits.is_empty() {
        return Ok(Rational::from_integer(0));
    }
    if digits.len() as u32 > MAX_SCALE || exp.unsigned_abs() > MAX_SCALE {
        return Err(RationalParseError::OutOfRange(text.to_string()));
    }

    let base: i64 = digits.parse().map_err(|_| malformed())?;
    let value = if exp >= 0 {
        let scale = 10i64
            .checked_pow(exp as u32)
            .ok_or_else(|| RationalParseError::OutOfRange(text.to_string()))?;
        let num = base
            .checked_mul(scale)
            .ok_or_else(|| RationalParseError::OutOfRange(text.to_string()))?;
        Rational::from_integer(num)
    } else {
        Rational::new(base, 10i64.pow(exp.unsigned_abs()))
    };
    Ok(value * Rational::from_integer(sign))
}

/// True when the rational lies in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    *r >= zero && *r <= one
}
