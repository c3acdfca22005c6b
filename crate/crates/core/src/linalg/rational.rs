use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational. `num_rational` keeps every value in lowest
/// terms with a positive denominator, and zero as `0/1`.
pub type Rational = BigRational;

/// A coordinate vector in the fixed basis of the ambient space.
pub type Vector = Vec<Rational>;

/// Shorthand for `numer/denom`. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"a/b"` or `"a"` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty rational".to_string());
    }
    Rational::from_str(t).map_err(|e| format!("invalid rational {t:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed, Zero};

    #[test]
    fn canonical_form() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = rat(0, -7);
        assert!(z.is_zero());
        assert!(z.denom().is_one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rat(-2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("2/-4")
            .map(|r| r.is_negative())
            .unwrap_or(true));
    }
}
