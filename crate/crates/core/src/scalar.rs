//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Generalized binomial coefficient `C(p, j) = p(p-1)...(p-j+1)/j!`, valid for
/// negative `p`.
pub fn binomial(p: i64, j: u32) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..j as i64 {
        acc *= int(p - i);
        acc /= int(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| acc * int(k))
}

/// Sign `(-1)^k` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Parse `p/q`, `p` or `-p/q`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// Prints `p/q` with `q > 0`, or a bare integer.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Largest integer `k` with `k <= s`.
pub fn floor_i64(s: &Scalar) -> i64 {
    let f = s.floor();
    let n = f.to_integer();
    i64::try_from(n).expect("weight bound does not fit in i64")
}

pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_negative_upper() {
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(-2, 2), int(3));
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 3), int(0));
        assert_eq!(binomial(7, 0), int(1));
    }

    #[test]
    fn scalar_text_round_trip() {
        for text in ["0", "3", "-7", "1/2", "-3/4"] {
            assert_eq!(format_scalar(&parse_scalar(text).unwrap()), text);
        }
        assert_eq!(format_scalar(&parse_scalar("4/2").unwrap()), "2");
        assert_eq!(format_scalar(&parse_scalar("3/-6").unwrap()), "-1/2");
        assert!(parse_scalar("1/0").is_none());
        assert!(parse_scalar("x").is_none());
    }

    #[test]
    fn floor_of_rationals() {
        assert_eq!(floor_i64(&rat(3, 2)), 1);
        assert_eq!(floor_i64(&rat(-1, 2)), -1);
        assert_eq!(floor_i64(&int(2)), 2);
    }
}
