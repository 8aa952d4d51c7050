//! Exact rational probabilities.
//!
//! All probability arithmetic in the crate is exact; decimal strings only
//! appear at the output boundary. A [`Probability`] remembers whether it was
//! written as a fraction (`1/6`) or a decimal (`0.5`) so emitted ProbLog text
//! preserves the source spelling.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbStyle {
    Decimal,
    Fraction,
}

#[derive(Clone, Debug)]
pub struct Probability {
    value: BigRational,
    style: ProbStyle,
}

impl PartialEq for Probability {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}
impl Eq for Probability {}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProbError {
    #[error("probability `{0}` is outside [0, 1]")]
    OutOfRange(String),
    #[error("malformed probability literal `{0}`")]
    Malformed(String),
}

impl Probability {
    pub fn new(value: BigRational, style: ProbStyle) -> Result<Self, ProbError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(ProbError::OutOfRange(value.to_string()));
        }
        Ok(Probability { value, style })
    }

    pub fn zero() -> Self {
        Probability { value: BigRational::zero(), style: ProbStyle::Decimal }
    }

    pub fn one() -> Self {
        Probability { value: BigRational::one(), style: ProbStyle::Decimal }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ProbError> {
        if den == 0 {
            return Err(ProbError::Malformed(format!("{num}/{den}")));
        }
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            ProbStyle::Fraction,
        )
    }

    /// Parses `p/q` or a decimal literal, keeping the value exact.
    pub fn parse(text: &str) -> Result<Self, ProbError> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| ProbError::Malformed(text.into()))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| ProbError::Malformed(text.into()))?;
            if d.is_zero() {
                return Err(ProbError::Malformed(text.into()));
            }
            Self::new(BigRational::new(n, d), ProbStyle::Fraction)
        } else {
            let value = parse_decimal(text).ok_or_else(|| ProbError::Malformed(text.into()))?;
            Self::new(value, ProbStyle::Decimal)
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn style(&self) -> ProbStyle {
        self.style
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// Renders the probability the way it was written in the source:
    /// fractions stay fractions, decimals stay decimals.
    pub fn render_source(&self) -> String {
        match self.style {
            ProbStyle::Fraction => self.fraction_string(),
            ProbStyle::Decimal => {
                decimal_exact(&self.value).unwrap_or_else(|| self.fraction_string())
            }
        }
    }

    pub fn fraction_string(&self) -> String {
        fraction_string(&self.value)
    }

    /// Minimal exact decimal, if one exists (denominator of the form 2^a·5^b).
    pub fn decimal_string(&self) -> Option<String> {
        decimal_exact(&self.value)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_source())
    }
}

pub fn fraction_string(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses an unsigned decimal literal (`12`, `0.5`, `18.5`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(numer, denom))
}

/// Renders an exact decimal with no trailing zeros, or `None` when the reduced
/// denominator has a prime factor other than 2 or 5.
pub fn decimal_exact(value: &BigRational) -> Option<String> {
    let ten = BigInt::from(10u32);
    let mut den = value.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = value.numer() * ten.pow(places) / value.denom();
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= places as usize {
        format!("{}{}", "0".repeat(places as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    let (int_part, frac_part) = digits.split_at(split);
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    Some(out)
}

/// Rounds to `digits` decimal places (half away from zero) and renders without
/// trailing zeros.
pub fn decimal_rounded(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        (scaled - half).ceil()
    } else {
        (scaled + half).floor()
    };
    let exact = BigRational::new(rounded.to_integer(), scale);
    decimal_exact(&exact).expect("power-of-ten denominator always renders")
}

/// Best-effort f64 view, for display ordering only.
pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_fraction_is_exact() {
        let p = Probability::parse("1/6").unwrap();
        assert_eq!(p.value(), &rat(1, 6));
        assert_eq!(p.render_source(), "1/6");
    }

    #[test]
    fn parse_decimal_is_exact() {
        let p = Probability::parse("0.63").unwrap();
        assert_eq!(p.value(), &rat(63, 100));
        assert_eq!(p.render_source(), "0.63");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(Probability::parse("1.2"), Err(ProbError::OutOfRange(_))));
        assert!(matches!(Probability::parse("3/2"), Err(ProbError::OutOfRange(_))));
    }

    #[test]
    fn malformed_rejected() {
        for bad in ["", "x", "1/0", "1.2.3", "-0.5"] {
            assert!(Probability::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_exact(&rat(1, 2)).unwrap(), "0.5");
        assert_eq!(decimal_exact(&rat(100353, 200000)).unwrap(), "0.501765");
        assert_eq!(decimal_exact(&rat(1, 1)).unwrap(), "1");
        assert_eq!(decimal_exact(&rat(0, 1)).unwrap(), "0");
        assert_eq!(decimal_exact(&rat(1, 6)), None);
    }

    #[test]
    fn rounding() {
        assert_eq!(decimal_rounded(&rat(1, 6), 4), "0.1667");
        assert_eq!(decimal_rounded(&rat(1, 2), 0), "1");
        assert_eq!(decimal_rounded(&rat(1, 3), 2), "0.33");
    }

    #[test]
    fn fraction_of_integer() {
        assert_eq!(fraction_string(&rat(4, 2)), "2");
        assert_eq!(fraction_string(&rat(2, 4)), "1/2");
    }
}
