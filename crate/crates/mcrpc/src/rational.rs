//! Exact rational weights: parsing of integer, ratio, and decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"5"`, `"-3/4"`, and exact decimals like `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = denom
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" {
            "0".to_string()
        } else {
            int_part.to_string()
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let int_value: BigInt = int_digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let frac_value: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(frac_value, scale);
        let int = Rational::from_integer(int_value);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Formats a rational as `"5"` or `"num/den"` in lowest terms.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Approximate display value; exact comparisons must not use this.
pub fn rational_to_f64(value: &Rational) -> f64 {
    let numer = value.numer();
    let denom = value.denom();
    // Good enough for report columns: fall back to digit strings for
    // magnitudes beyond f64 integer range.
    let nf = numer.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = denom.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_ratios() {
        assert_eq!(parse_rational("5").unwrap(), rational_int(5));
        assert_eq!(parse_rational(" -3 ").unwrap(), rational_int(-3));
        assert_eq!(
            parse_rational("3/4").unwrap(),
            Rational::new(BigInt::from(3), BigInt::from(4))
        );
        assert_eq!(parse_rational("6/4").unwrap(), parse_rational("3/2").unwrap());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), parse_rational("1/2").unwrap());
        assert_eq!(parse_rational("1.25").unwrap(), parse_rational("5/4").unwrap());
        assert_eq!(parse_rational("0.1").unwrap(), parse_rational("1/10").unwrap());
        assert_eq!(parse_rational("-0.75").unwrap(), parse_rational("-3/4").unwrap());
        assert_eq!(parse_rational(".5").unwrap(), parse_rational("1/2").unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a.b").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("8/4").unwrap()), "2");
    }
}
