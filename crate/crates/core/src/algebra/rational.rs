use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise (reduced).
pub fn format_q(q: &Q) -> String {
    q.to_string()
}

pub fn parse_q(text: &str) -> Result<Q> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: `{text}`")))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{text}`")));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
        None => Ok(Q::from_integer(parse_int(text)?)),
    }
}

pub fn parse_nonneg_q(text: &str) -> Result<Q> {
    let q = parse_q(text)?;
    if q.is_negative() {
        return Err(Error::Parse(format!("negative weight `{text}`")));
    }
    Ok(q)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_round_trip() {
        for s in ["0", "1", "1/2", "7/3", "5/123456789012345678901234567891"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("2/4").unwrap()), "1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_nonneg_q("-1/2").is_err());
        assert!(parse_q("x").is_err());
    }
}
