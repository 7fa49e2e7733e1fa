//! Exact rational helpers: parsing the bias parameter, logarithms of huge
//! integers, and conversions to floating point.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.5"` or `"2.25"`
/// into an exact rational. Decimal input is converted exactly (`0.5` becomes
/// `1/2`), never through a float.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let err = || Error::Parse {
        what: "rational",
        input: input.to_string(),
    };
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(err());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut num: BigInt = joined.parse().map_err(|_| err())?;
    if negative {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Ok(BigRational::new(num, den))
}

/// Parses a bias parameter and checks `q > 0`.
pub fn parse_q(input: &str) -> Result<BigRational> {
    let q = parse_rational(input)?;
    if !q.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "bias parameter must be positive, got {input}"
        )));
    }
    Ok(q)
}

/// Splits a non-negative rational into `(numerator, denominator)` as unsigned
/// integers in lowest terms.
pub fn split_nonneg(q: &BigRational) -> (BigUint, BigUint) {
    assert!(!q.is_negative(), "expected a non-negative rational");
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    (num, den)
}

/// Natural logarithm of a positive big integer, accurate to about 1e-15
/// relative regardless of size.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "logarithm of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive rational");
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

/// Converts a rational to the nearest-ish `f64`, handling numerators and
/// denominators far beyond the `f64` range.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let sign = if x.numer().sign() == Sign::Minus {
        -1.0
    } else {
        1.0
    };
    sign * (ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())).exp()
}

/// `num/den` as a rational built from unsigned parts.
pub fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_u64(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rational_from_u64(1, 2));
        assert_eq!(parse_rational("0.5").unwrap(), rational_from_u64(1, 2));
        assert_eq!(parse_rational("2.25").unwrap(), rational_from_u64(9, 4));
        assert_eq!(parse_rational("3").unwrap(), rational_from_u64(3, 1));
        assert_eq!(parse_rational(".75").unwrap(), rational_from_u64(3, 4));
        assert_eq!(parse_rational("6/4").unwrap(), rational_from_u64(3, 2));
        assert_eq!(
            parse_rational("-1/3").unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(3))
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a", "1/0", "1.2.3", "1e5", "/", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert!(parse_q("0").is_err());
        assert!(parse_q("-2").is_err());
        assert!(parse_q("0.001").is_ok());
    }

    #[test]
    fn logs_of_huge_integers() {
        let x = num_traits::pow(BigUint::from(4u32), 5000);
        let expected = 5000.0 * 4f64.ln();
        assert!((ln_biguint(&x) - expected).abs() / expected < 1e-14);
        assert_eq!(ln_biguint(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn huge_ratio_to_f64() {
        let a = num_traits::pow(BigUint::from(3u32), 3000);
        let b = num_traits::pow(BigUint::from(3u32), 2999) * BigUint::from(2u32);
        let r = ratio(a, b);
        assert!((rational_to_f64(&r) - 1.5).abs() < 1e-12);
    }
}
