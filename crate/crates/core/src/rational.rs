//! Exact rationals and their `"p/q"` text form.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = num_rational::BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `2^e` for any integer `e`.
pub fn pow2(e: i32) -> Q {
    let two = qi(2);
    if e >= 0 {
        Pow::pow(two, e as u32)
    } else {
        Pow::pow(two, (-e) as u32).recip()
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Always `p/q` with `q > 0`; integers keep the `/1` so the form is uniform.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q`, a plain integer, or a terminating decimal such as `0.25`
/// (converted exactly).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("malformed rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = Pow::pow(BigInt::from(10), frac.len() as u32);
        let mut v = Q::new(frac_part, scale);
        if negative {
            v = -v;
        }
        return Ok(Q::from_integer(int_part) + v);
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn to_f64(x: &Q) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Keep the top 64 bits of each side and restore the binary exponent.
    let top = |v: &BigInt| -> (f64, i32) {
        let bits = v.bits() as i64;
        let shift = (bits - 64).max(0);
        let m = (v >> (shift as usize)).to_f64().unwrap_or(0.0);
        (m, shift as i32)
    };
    let (nm, ns) = top(x.numer());
    let (dm, ds) = top(x.denom());
    libm::scalbn(nm / dm, ns - ds)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn gcd_normalized(x: &Q) -> bool {
    x.numer().gcd(x.denom()).is_one() && x.denom().is_positive()
}

pub fn display(x: &Q) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-4").unwrap(), qi(-4));
        assert_eq!(parse_q("0.4").unwrap(), q(2, 5));
        assert_eq!(parse_q("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_q("1/-2").unwrap(), q(-1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("1.").is_err());
    }

    #[test]
    fn formats_reduced_with_positive_denominator() {
        assert_eq!(format_q(&q(6, -4)), "-3/2");
        assert_eq!(format_q(&qi(5)), "5/1");
        assert!(gcd_normalized(&q(6, -4)));
    }

    #[test]
    fn f64_conversion_survives_huge_terms() {
        let big = pow2(3000) / (pow2(3000) * qi(3));
        assert!((to_f64(&big) - 1.0 / 3.0).abs() < 1e-15);
        let x = q(2, 5);
        let p: Q = Pow::pow(x, 700u32);
        let expected = libm::exp(700.0 * libm::log(0.4));
        assert!((to_f64(&p) / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pow2_negative() {
        assert_eq!(pow2(-3), q(1, 8));
        assert_eq!(binomial(5, 2), BigInt::from(10));
    }
}
