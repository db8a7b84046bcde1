//! Exact rational helpers shared by the testbeds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Formats a rational as `p/q` in lowest terms, always with a denominator.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a finite decimal like `0.375` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let magnitude = int.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `x mod 1` for a nonnegative or negative rational, landing in `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

pub fn in_unit_interval(r: &BigRational) -> bool {
    !r.is_negative() && r < &BigRational::one()
}

/// Dyadic approximation `floor(x * 2^bits) / 2^bits` of an `f64`-free square root.
pub fn sqrt_dyadic(n: u64, bits: u32) -> BigRational {
    let scale = BigInt::one() << (2 * bits as usize);
    let root = (BigInt::from(n) * scale).sqrt();
    BigRational::new(root, BigInt::one() << bits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(format_ratio(&parse_ratio("4/10").unwrap()), "2/5");
        assert_eq!(format_ratio(&parse_ratio("1").unwrap()), "1/1");
        assert_eq!(parse_ratio("0.375").unwrap(), ratio(3, 8));
        assert_eq!(parse_ratio("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
    }

    #[test]
    fn frac_wraps_into_unit_interval() {
        assert_eq!(frac(&ratio(7, 5)), ratio(2, 5));
        assert_eq!(frac(&ratio(-1, 5)), ratio(4, 5));
    }

    #[test]
    fn sqrt_dyadic_is_floor() {
        let r = sqrt_dyadic(5, 64);
        let next = &r + BigRational::new(BigInt::one(), BigInt::one() << 64usize);
        assert!(&r * &r <= ratio(5, 1));
        assert!(&next * &next > ratio(5, 1));
    }
}
