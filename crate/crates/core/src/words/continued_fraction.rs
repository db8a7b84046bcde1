use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Word;
use crate::error::{Error, Result};

/// Directive sequence `a_1, ..., a_N` of a slope `gamma` in `(0, 1/2]`.
///
/// The quotients drive the standard words `s_{n+1} = s_n^{a_{n+1}} s_{n-1}`
/// and the standard matrices built the same way. In classical notation
/// `gamma = [0; a_1 + 1, a_2, a_3, ...]`, so the Fibonacci slope
/// `(3 - sqrt 5)/2 = [0; 2, 1, 1, ...]` has directive sequence `1, 1, 1, ...`.
///
/// Convergents are indexed from `n = -1` and start from
/// `(p_{-1}, q_{-1}) = (1, 1)`, `(p_0, q_0) = (0, 1)`, i.e. the 1-length and
/// length of `s_{-1} = 1` and `s_0 = 0`. With this seed the usual recurrence
/// `p_n = a_n p_{n-1} + p_{n-2}` gives `q_n = |s_n|` and `p_n = |s_n|_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<u64>,
    convergents: Vec<(BigUint, BigUint)>,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<u64>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::out_of_range(
                "partial quotients",
                "need at least one",
            ));
        }
        if let Some(pos) = quotients.iter().position(|&a| a == 0) {
            return Err(Error::out_of_range(
                "partial quotients",
                format!("a_{} = 0, every quotient must be >= 1", pos + 1),
            ));
        }
        let mut convergents = vec![
            (BigUint::one(), BigUint::one()),
            (BigUint::zero(), BigUint::one()),
        ];
        for &a in &quotients {
            let n = convergents.len();
            let (p1, q1) = &convergents[n - 1];
            let (p2, q2) = &convergents[n - 2];
            let next = (p1 * a + p2, q1 * a + q2);
            convergents.push(next);
        }
        Ok(ContinuedFraction {
            quotients,
            convergents,
        })
    }

    /// Directive sequence `1, 1, ..., 1` of the Fibonacci slope.
    pub fn fibonacci(terms: usize) -> Result<Self> {
        Self::new(vec![1; terms])
    }

    /// Converts a classical expansion `[0; c_1, c_2, ...]` with `c_1 >= 2`.
    pub fn from_classical(classical: &[u64]) -> Result<Self> {
        match classical.split_first() {
            Some((&c1, rest)) if c1 >= 2 => {
                let mut quotients = vec![c1 - 1];
                quotients.extend_from_slice(rest);
                Self::new(quotients)
            }
            _ => Err(Error::out_of_range(
                "classical expansion",
                "first quotient must be >= 2 (slope at most 1/2)",
            )),
        }
    }

    /// Expansion of a rational slope `p/q` in `(0, 1/2]`.
    pub fn from_ratio(p: u64, q: u64) -> Result<Self> {
        if p == 0 || 2 * p > q {
            return Err(Error::out_of_range(
                "p/q",
                format!("{p}/{q} not in (0, 1/2]"),
            ));
        }
        let mut classical = Vec::new();
        let (mut num, mut den) = (q, p);
        while den != 0 {
            classical.push(num / den);
            let r = num % den;
            num = den;
            den = r;
        }
        // keep the last quotient >= 2 unless it is the only one
        if classical.len() > 1 && *classical.last().unwrap() == 1 {
            classical.pop();
            *classical.last_mut().unwrap() += 1;
        }
        Self::from_classical(&classical)
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// `a_n` for `1 <= n <= N`.
    pub fn quotient(&self, n: usize) -> u64 {
        self.quotients[n - 1]
    }

    /// `(p_n, q_n)` for `-1 <= n <= N`.
    pub fn convergent(&self, n: isize) -> &(BigUint, BigUint) {
        &self.convergents[(n + 1) as usize]
    }

    /// All convergents from `n = -1` to `n = N`.
    pub fn convergents(&self) -> &[(BigUint, BigUint)] {
        &self.convergents
    }

    /// The last convergent `p_N / q_N`.
    pub fn value(&self) -> BigRational {
        let (p, q) = self.convergents.last().unwrap();
        BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
    }

    /// `p_{n-1} q_n - p_n q_{n-1}`, equal to `(-1)^n`.
    pub fn determinant(&self, n: isize) -> BigInt {
        let (p1, q1) = self.convergent(n - 1);
        let (p, q) = self.convergent(n);
        BigInt::from(p1 * q) - BigInt::from(p * q1)
    }

    pub fn is_reduced(&self, n: isize) -> bool {
        let (p, q) = self.convergent(n);
        p.gcd(q).is_one()
    }
}

/// `s_{-1}, s_0, s_1, ..., s_N` with `s_{-1} = 1`, `s_0 = 0` and
/// `s_{n+1} = s_n^{a_{n+1}} s_{n-1}`.
pub fn standard_words(cf: &ContinuedFraction) -> Vec<Word> {
    let mut words = vec![Word(vec![1]), Word(vec![0])];
    for &a in cf.quotients() {
        let n = words.len();
        let next = words[n - 1].repeat(a as usize).concat(&words[n - 2]);
        words.push(next);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;
    use num_bigint::BigUint;

    #[test]
    fn fibonacci_standard_words() {
        let cf = ContinuedFraction::new(vec![1, 1, 1]).unwrap();
        let s = standard_words(&cf);
        assert_eq!(s[0], w("1"));
        assert_eq!(s[1], w("0"));
        assert_eq!(s[2], w("01"));
        assert_eq!(s[3], w("010"));
        assert_eq!(s[4], w("01001"));
    }

    #[test]
    fn single_quotient_two() {
        let cf = ContinuedFraction::new(vec![2]).unwrap();
        assert_eq!(standard_words(&cf)[2], w("001"));
    }

    #[test]
    fn standard_word_ratios_match_convergents() {
        for quotients in [
            vec![1, 1, 1, 1, 1, 1],
            vec![2, 3, 1, 4],
            vec![3, 1, 2, 2, 1],
        ] {
            let cf = ContinuedFraction::new(quotients).unwrap();
            for (n, s) in standard_words(&cf).iter().enumerate() {
                let (p, q) = cf.convergent(n as isize - 1);
                assert_eq!(BigUint::from(s.len()), *q);
                assert_eq!(BigUint::from(s.one_length()), *p);
                assert!(cf.is_reduced(n as isize - 1));
            }
        }
    }

    #[test]
    fn prefix_property() {
        let cf = ContinuedFraction::new(vec![2, 1, 3, 1, 2]).unwrap();
        let s = standard_words(&cf);
        for n in 2..s.len() - 1 {
            assert_eq!(
                s[n + 1].prefix(s[n].len()),
                s[n],
                "s_{} prefix of s_{}",
                n - 1,
                n
            );
        }
    }

    #[test]
    fn classical_and_ratio_conversions() {
        let golden = ContinuedFraction::from_classical(&[2, 1, 1, 1]).unwrap();
        assert_eq!(golden.quotients(), &[1, 1, 1, 1]);
        let cf = ContinuedFraction::from_ratio(2, 5).unwrap();
        assert_eq!(cf.value(), crate::rational::ratio(2, 5));
        let cf = ContinuedFraction::from_ratio(3, 7).unwrap();
        assert_eq!(cf.value(), crate::rational::ratio(3, 7));
        let cf = ContinuedFraction::from_ratio(1, 2).unwrap();
        assert_eq!(cf.quotients(), &[1]);
        assert!(ContinuedFraction::from_ratio(3, 5).is_err());
        assert!(ContinuedFraction::from_classical(&[1, 2]).is_err());
    }

    #[test]
    fn rejects_zero_quotient() {
        assert!(ContinuedFraction::new(vec![1, 0, 2]).is_err());
        assert!(ContinuedFraction::new(vec![]).is_err());
    }

    #[test]
    fn convergent_determinants_alternate() {
        let cf = ContinuedFraction::new(vec![2, 1, 3, 1, 1, 5]).unwrap();
        for n in 0..=6isize {
            let expected = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(cf.determinant(n), BigInt::from(expected));
        }
    }
}
