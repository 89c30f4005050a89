//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms; panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optionally signed).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// The value as an `i64` if it is an integer in range.
pub fn to_i64_exact(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// The value as a `u64` if it is a non-negative integer in range.
pub fn to_u64_exact(r: &Rational) -> Option<u64> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("6/4"), Some(frac(3, 2)));
        assert_eq!(parse_rational("-3"), Some(rat(-3)));
        assert_eq!(parse_rational("1/0"), None);
        let r = parse_rational("4/-6").unwrap();
        assert_eq!(r, frac(-2, 3));
        assert!(r.denom() > &BigInt::zero());
    }
}
