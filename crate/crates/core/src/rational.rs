//! Exact rational scalars and the small helpers built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar field used everywhere.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Q {
    frac(1, 2)
}

pub fn is_int(x: &Q) -> bool {
    x.is_integer()
}

/// Integer in `ℤ≥0`.
pub fn is_nonneg_int(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}

/// Integer in `ℤ>0`.
pub fn is_pos_int(x: &Q) -> bool {
    x.is_integer() && x.is_positive()
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Generalised binomial coefficient `x(x-1)...(x-i+1)/i!`.
pub fn binom(x: &Q, i: usize) -> Q {
    let mut acc = Q::one();
    for k in 0..i {
        acc = acc * (x - q(k as i64)) / q(k as i64 + 1);
    }
    acc
}

pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Parse `a`, `a/b`, with optional leading `-` or the unicode minus sign.
pub fn parse_q(s: &str) -> Option<Q> {
    let t = s.trim().replace('\u{2212}', "-");
    if t.is_empty() {
        return None;
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), b.trim().to_string()),
        None => (t.clone(), "1".to_string()),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Floor of a rational as `i64` (saturating is not needed at our scale).
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("rational out of i64 range")
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unicode_minus() {
        assert_eq!(parse_q("\u{2212}3/2"), Some(frac(-3, 2)));
        assert_eq!(parse_q(" 4 "), Some(q(4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(&q(5), 2), q(10));
        assert_eq!(binom(&q(-1), 3), q(-1));
        assert_eq!(binom(&half(), 2), frac(-1, 8));
        assert_eq!(binom(&q(3), 0), q(1));
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_q(&frac(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(0)), "0");
    }
}
