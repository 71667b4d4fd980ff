//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `1 / 2^n`.
pub fn inv_pow2(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n as usize)
}

/// Parses the canonical textual form `n` or `n/d` (d > 1, lowest terms).
///
/// Non-canonical spellings such as `2/4`, `3/1`, `+1` or `1/-2` are
/// rejected so that documents round-trip byte-identically.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let parse_int = |s: &str, allow_sign: bool| -> Result<BigInt> {
        let digits = if allow_sign { s.strip_prefix('-').unwrap_or(s) } else { s };
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || (digits.len() > 1 && digits.starts_with('0'))
        {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let value = match text.split_once('/') {
        None => Rational::from_integer(parse_int(text, true)?),
        Some((n, d)) => {
            let numer = parse_int(n, true)?;
            let denom = parse_int(d, false)?;
            if denom.is_zero() || denom.is_one() {
                return Err(bad());
            }
            let r = Rational::new_raw(numer.clone(), denom.clone());
            let reduced = Rational::new(numer, denom);
            if reduced.numer() != r.numer() || reduced.denom() != r.denom() {
                return Err(bad());
            }
            reduced
        }
    };
    if text == "-0" {
        return Err(bad());
    }
    Ok(value)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_parse() {
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7/4").unwrap(), rat(-7, 4));
        assert_eq!(parse_rational("0").unwrap(), int(0));
    }

    #[test]
    fn non_canonical_forms_rejected() {
        for s in ["2/4", "3/1", "+1", "1/-2", "", "1/0", "01", "-0", "1.5", "a"] {
            assert!(parse_rational(s).is_err(), "{s} accepted");
        }
    }

    #[test]
    fn format_is_inverse_of_parse() {
        for s in ["0", "5", "-3", "1/2", "-3/4", "123456789012345678901234567890/11"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }
}
