//! Exact rational weights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::io::ParseError;

/// Edge weights and matching sums. Always a reduced fraction with a positive
/// denominator, so `==` is exact equality.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn pow2(k: usize) -> Scalar {
    Scalar::from_integer(BigInt::one() << k)
}

/// Renders `p/q`, or just `p` when the denominator is one. No decimal form.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses an integer (`-3`) or a fraction (`7/2`, `-1/3`). Surrounding
/// whitespace is not accepted.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let bad = || ParseError::new(format!("`{text}` is not an integer or p/q rational"));
    let parse_int = |s: &str| -> Result<BigInt, ParseError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(Scalar::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            if q.starts_with('-') {
                return Err(bad());
            }
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(ParseError::new(format!("`{text}` has a zero denominator")));
            }
            Ok(Scalar::new(numer, denom))
        }
    }
}
