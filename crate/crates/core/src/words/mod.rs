//! Finite 0-1 words and the combinatorics shared by every testbed.
//!
//! Words are written as ASCII strings of `0`/`1`. Orbits (necklaces) are
//! represented by their lexicographically least rotation.

mod balance;
mod continued_fraction;
mod mechanical;
mod orbits;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use balance::{
    balance_witness, is_balanced, is_balanced_naive, is_cyclically_balanced, BalanceWitness,
};
pub use continued_fraction::{standard_words, ContinuedFraction};
pub use mechanical::{mechanical_word, MechanicalSpec};
pub use orbits::{balanced_orbit, binomial, enumerate_necklaces, enumerate_orbits, Orbit};

/// A finite word over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0'.wrapping_add(b))));
        }
        Ok(Word(bits))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Word(vec![1; n])
    }

    /// Builds a word of length `len` from the low `len` bits of `mask`,
    /// most significant bit first, so the numeric order of masks matches the
    /// lexicographic order of words.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        Word(
            (0..len)
                .map(|i| ((mask >> (len - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// Inverse of [`Word::from_mask`]; `None` for words longer than 64.
    pub fn to_mask(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of 1 symbols.
    pub fn one_length(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// `one_length / length` in lowest terms.
    pub fn one_ratio(&self) -> Result<BigRational> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(BigRational::new(
            BigInt::from(self.one_length()),
            BigInt::from(self.len()),
        ))
    }

    /// Rotation moving the first `k` symbols to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let mut bits = self.0.clone();
        bits.rotate_left(k % self.len());
        Word(bits)
    }

    /// All `len` cyclic shifts, starting with the word itself.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(move |k| self.rotate(k))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Word(bits)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1, "symbol must be 0 or 1");
        self.0.push(bit);
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Swaps 0 and 1.
    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|b| 1 - b).collect())
    }

    /// Iterator over the length-`n` factors, one per starting position.
    pub fn factors(&self, n: usize) -> impl Iterator<Item = &[u8]> {
        self.0.windows(n.max(1)).filter(move |_| n > 0)
    }

    /// Number of distinct factors of length `n`.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        if n > self.len() {
            return Err(Error::FactorTooLong { n, len: self.len() });
        }
        if n == 0 {
            return Ok(1);
        }
        let distinct: std::collections::HashSet<&[u8]> = self.0.windows(n).collect();
        Ok(distinct.len())
    }

    /// Smallest `d` dividing the length with `rotate(d) == self`.
    pub fn primitive_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|d| n.is_multiple_of(*d) && self.0[*d..] == self.0[..n - d])
            .unwrap_or(0)
    }

    /// Lexicographically least rotation.
    pub fn canonical_rotation(&self) -> Word {
        self.rotations().min().unwrap_or_default()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples; panics on anything but `0`/`1`.
pub fn w(s: &str) -> Word {
    s.parse().expect("word literal over {0,1}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn one_ratio_in_lowest_terms() {
        assert_eq!(w("10100").one_ratio().unwrap(), ratio(2, 5));
        assert_eq!(w("111").one_ratio().unwrap(), ratio(1, 1));
        assert_eq!(Word::empty().one_ratio(), Err(Error::EmptyWord));
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(w("000000").complexity(3).unwrap(), 1);
        assert_eq!(w("01010101").complexity(2).unwrap(), 2);
        assert!(matches!(
            w("0101").complexity(5),
            Err(Error::FactorTooLong { n: 5, len: 4 })
        ));
    }

    #[test]
    fn mask_round_trip_and_order() {
        let a = w("00101");
        assert_eq!(a.to_mask(), Some(5));
        assert_eq!(Word::from_mask(5, 5), a);
        assert!(Word::from_mask(3, 5) < Word::from_mask(5, 5));
    }

    #[test]
    fn rotations_and_period() {
        let a = w("10100");
        assert_eq!(a.rotate(1), w("01001"));
        assert_eq!(a.rotations().count(), 5);
        assert_eq!(a.canonical_rotation(), w("00101"));
        assert_eq!(w("010101").primitive_period(), 2);
        assert_eq!(w("0").primitive_period(), 1);
    }

    #[test]
    fn rejects_bad_symbols() {
        assert_eq!("01a".parse::<Word>(), Err(Error::InvalidSymbol('a')));
        assert!(Word::new(vec![0, 2]).is_err());
    }
}
