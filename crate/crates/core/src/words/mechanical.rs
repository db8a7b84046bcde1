use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Word;
use crate::error::{Error, Result};
use crate::rational::{format_ratio, sqrt_dyadic};

/// Slope and phase of a lower mechanical word
/// `w_n = floor((n+1) gamma + delta) - floor(n gamma + delta)`, `n >= 1`.
///
/// Both parameters are exact rationals. An irrational slope is carried as a
/// dyadic approximation with `approximation_bits` fractional bits; the floors
/// are then evaluated exactly on that approximation, so the word is exact for
/// the approximating slope and agrees with the irrational one until
/// `n gamma + delta` comes within `n 2^-bits` of an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanicalSpec {
    gamma: BigRational,
    delta: BigRational,
    approximation_bits: Option<u32>,
}

impl MechanicalSpec {
    pub fn new(gamma: BigRational, delta: BigRational) -> Result<Self> {
        if gamma.is_negative() || gamma > BigRational::one() {
            return Err(Error::out_of_range(
                "gamma",
                format!("{} not in [0, 1]", format_ratio(&gamma)),
            ));
        }
        if delta.is_negative() || delta >= BigRational::one() {
            return Err(Error::out_of_range(
                "delta",
                format!("{} not in [0, 1)", format_ratio(&delta)),
            ));
        }
        Ok(MechanicalSpec {
            gamma,
            delta,
            approximation_bits: None,
        })
    }

    /// Slope `p/q` with phase 0.
    pub fn ratio(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::out_of_range("q", "denominator must be positive"));
        }
        Self::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )
    }

    /// Uses the exact binary value of `gamma` as a 53-bit approximation.
    pub fn from_f64(gamma: f64, delta: f64) -> Result<Self> {
        let conv = |x: f64, name| {
            BigRational::from_float(x).ok_or_else(|| Error::out_of_range(name, "not finite"))
        };
        let mut spec = Self::new(conv(gamma, "gamma")?, conv(delta, "delta")?)?;
        spec.approximation_bits = Some(53);
        Ok(spec)
    }

    /// `(3 - sqrt 5) / 2`, the slope of the Fibonacci word, to `bits` bits.
    pub fn golden(bits: u32, delta: BigRational) -> Result<Self> {
        let three = BigRational::from_integer(BigInt::from(3));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        // floor of sqrt 5 rounds gamma up by < 2^-bits
        let gamma = (three - sqrt_dyadic(5, bits + 1)) * half;
        let mut spec = Self::new(gamma, delta)?;
        spec.approximation_bits = Some(bits);
        Ok(spec)
    }

    pub fn with_delta(mut self, delta: BigRational) -> Result<Self> {
        let checked = Self::new(self.gamma.clone(), delta)?;
        self.delta = checked.delta;
        Ok(self)
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    /// `None` when the slope is exact.
    pub fn approximation_bits(&self) -> Option<u32> {
        self.approximation_bits
    }

    pub fn gamma_f64(&self) -> f64 {
        self.gamma.to_f64().unwrap_or(f64::NAN)
    }

    /// Symbol `w_n` for `n >= 1`.
    pub fn symbol(&self, n: u64) -> u8 {
        let n = BigInt::from(n);
        let at =
            |k: &BigInt| (&self.gamma * BigRational::from_integer(k.clone()) + &self.delta).floor();
        let diff = at(&(&n + 1u32)) - at(&n);
        u8::from(!diff.is_zero())
    }
}

/// `(w_1, ..., w_n)` for the given slope and phase.
pub fn mechanical_word(spec: &MechanicalSpec, n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::out_of_range("n", "word length must be positive"));
    }
    // floor(k gamma + delta) for k = 1..=n+1, computed incrementally on the
    // common denominator
    let denom = spec.gamma.denom().clone() * spec.delta.denom();
    let step = spec.gamma.numer() * spec.delta.denom();
    let mut acc = step.clone() + spec.delta.numer() * spec.gamma.denom();
    let mut prev = acc.div_floor_big(&denom);
    let mut bits = Vec::with_capacity(n);
    for _ in 0..n {
        acc += &step;
        let next = acc.div_floor_big(&denom);
        bits.push(u8::from(next != prev));
        prev = next;
    }
    Ok(Word(bits))
}

trait DivFloor {
    fn div_floor_big(&self, d: &BigInt) -> BigInt;
}

impl DivFloor for BigInt {
    fn div_floor_big(&self, d: &BigInt) -> BigInt {
        num_integer::Integer::div_floor(self, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::words::{is_balanced, w};

    #[test]
    fn constant_slopes() {
        assert_eq!(
            mechanical_word(&MechanicalSpec::ratio(0, 1).unwrap(), 6).unwrap(),
            w("000000")
        );
        assert_eq!(
            mechanical_word(&MechanicalSpec::ratio(1, 1).unwrap(), 6).unwrap(),
            w("111111")
        );
    }

    #[test]
    fn two_fifths() {
        let spec = MechanicalSpec::ratio(2, 5).unwrap();
        assert_eq!(mechanical_word(&spec, 10).unwrap(), w("0101001010"));
        let direct: Vec<u8> = (1..=10).map(|n| spec.symbol(n)).collect();
        assert_eq!(direct, w("0101001010").bits());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(MechanicalSpec::new(ratio(3, 2), ratio(0, 1)).is_err());
        assert!(MechanicalSpec::new(ratio(1, 2), ratio(1, 1)).is_err());
        assert!(MechanicalSpec::new(ratio(-1, 2), ratio(0, 1)).is_err());
        assert!(mechanical_word(&MechanicalSpec::ratio(1, 2).unwrap(), 0).is_err());
    }

    #[test]
    fn phase_shifts_the_word() {
        let spec = MechanicalSpec::new(ratio(1, 3), ratio(1, 2)).unwrap();
        let word = mechanical_word(&spec, 9).unwrap();
        // floor((n+1)/3 + 1/2) - floor(n/3 + 1/2)
        let expected: Vec<u8> = (1..=9i64)
            .map(|n| {
                let f = |k: i64| (2 * k + 3).div_euclid(6);
                (f(n + 1) - f(n)) as u8
            })
            .collect();
        assert_eq!(word.bits(), &expected[..]);
        assert!(is_balanced(&word));
    }

    #[test]
    fn golden_slope_is_close() {
        let spec = MechanicalSpec::golden(128, BigRational::zero()).unwrap();
        let expected = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((spec.gamma_f64() - expected).abs() < 1e-15);
        assert_eq!(spec.approximation_bits(), Some(128));
    }

    #[test]
    fn from_f64_is_exact_on_binary_value() {
        let spec = MechanicalSpec::from_f64(0.25, 0.0).unwrap();
        // floor((n+1)/4) - floor(n/4) steps at n = 3, 7
        assert_eq!(mechanical_word(&spec, 8).unwrap(), w("00100010"));
    }
}
