use num_integer::Integer;

use super::{is_cyclically_balanced, mechanical_word, MechanicalSpec, Word};
use crate::error::{Error, Result};

/// Largest word length handled by the bitmask enumerators.
pub const MAX_ENUMERATION_LENGTH: usize = 32;

/// A rotation class of words, stored as its lexicographically least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbit {
    representative: Word,
    period: usize,
}

impl Orbit {
    /// The orbit containing `word`.
    pub fn of(word: &Word) -> Orbit {
        let representative = word.canonical_rotation();
        let period = representative.primitive_period();
        Orbit {
            representative,
            period,
        }
    }

    pub fn representative(&self) -> &Word {
        &self.representative
    }

    /// Number of distinct members (the primitive period).
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }

    pub fn one_length(&self) -> usize {
        self.representative.one_length()
    }

    /// Distinct members, starting with the representative.
    pub fn members(&self) -> Vec<Word> {
        (0..self.period)
            .map(|k| self.representative.rotate(k))
            .collect()
    }

    /// Every member balanced, i.e. the necklace is balanced.
    pub fn is_balanced(&self) -> bool {
        is_cyclically_balanced(&self.representative)
    }

    pub fn contains(&self, word: &Word) -> bool {
        word.len() == self.len() && word.canonical_rotation() == self.representative
    }
}

impl serde::Serialize for Orbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.representative.to_string())
    }
}

impl std::fmt::Display for Orbit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.representative)
    }
}

fn rotate_mask(x: u64, q: usize, full: u64) -> u64 {
    ((x << 1) | (x >> (q - 1))) & full
}

fn is_canonical_mask(x: u64, q: usize) -> bool {
    let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    let mut y = x;
    for _ in 1..q {
        y = rotate_mask(y, q, full);
        if y < x {
            return false;
        }
    }
    true
}

/// All `q`-bit masks with exactly `p` ones, in increasing order (Gosper's hack).
fn masks_with_weight(p: usize, q: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << q;
    let first = if p == 0 { 0 } else { (1u64 << p) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            let c = current & current.wrapping_neg();
            let r = current + c;
            let candidate = (((r ^ current) >> 2) / c) | r;
            (candidate < limit).then_some(candidate)
        };
        Some(current)
    })
}

fn check_enumeration_length(q: usize) -> Result<()> {
    if q > MAX_ENUMERATION_LENGTH {
        return Err(Error::ExhaustiveBound {
            what: "q",
            value: q,
            limit: MAX_ENUMERATION_LENGTH,
        });
    }
    Ok(())
}

/// One orbit per rotation class of length-`q` words with `p` ones, sorted by
/// representative.
pub fn enumerate_orbits(p: usize, q: usize) -> Result<Vec<Orbit>> {
    if q == 0 {
        return Err(Error::out_of_range("q", "must be at least 1"));
    }
    if p > q {
        return Err(Error::out_of_range(
            "p",
            format!("{p} ones do not fit in length {q}"),
        ));
    }
    check_enumeration_length(q)?;
    Ok(masks_with_weight(p, q)
        .filter(|&m| is_canonical_mask(m, q))
        .map(|m| {
            let representative = Word::from_mask(m, q);
            let period = representative.primitive_period();
            Orbit {
                representative,
                period,
            }
        })
        .collect())
}

/// Every rotation class of length-`q` words, any number of ones, sorted.
pub fn enumerate_necklaces(q: usize) -> Result<Vec<Orbit>> {
    let mut all = Vec::new();
    for p in 0..=q {
        all.extend(enumerate_orbits(p, q)?);
    }
    all.sort();
    Ok(all)
}

/// The unique balanced orbit of `W_{p,q}` for coprime `1 <= p < q`.
pub fn balanced_orbit(p: usize, q: usize) -> Result<Orbit> {
    if p == 0 || p >= q {
        return Err(Error::out_of_range(
            "p",
            format!("need 1 <= p < q, got p={p}, q={q}"),
        ));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime {
            p: p as u64,
            q: q as u64,
        });
    }
    let word = mechanical_word(&MechanicalSpec::ratio(p as u64, q as u64)?, q)?;
    Ok(Orbit::of(&word))
}

/// `C(n, k)` as `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
