//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn sign(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Renders a scalar as `p` or `p/q`.
pub fn render(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed).
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Scalar::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

pub(crate) fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let s = ratio(6, -4);
        assert_eq!(s.numer(), &BigInt::from(-3));
        assert_eq!(s.denom(), &BigInt::from(2));
        assert_eq!(render(&s), "-3/2");
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse("-7/21"), Some(ratio(-1, 3)));
        assert_eq!(parse("12"), Some(int(12)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("two"), None);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(2, 3), int(0));
    }
}
