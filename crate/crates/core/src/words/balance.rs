use super::Word;

/// Two equal-length factors whose 1-lengths differ by at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceWitness {
    pub heavy: Word,
    pub light: Word,
}

/// `true` iff any two factors of equal length have 1-lengths within 1.
pub fn is_balanced(word: &Word) -> bool {
    balance_witness(word).is_none()
}

/// Returns an unbalanced factor pair of the shortest possible length, if any.
///
/// For each factor length the heaviest and lightest windows are tracked with
/// prefix sums, so the scan is quadratic in the word length.
pub fn balance_witness(word: &Word) -> Option<BalanceWitness> {
    let bits = word.bits();
    let m = bits.len();
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0usize);
    for &b in bits {
        prefix.push(prefix.last().unwrap() + b as usize);
    }
    for k in 1..=m {
        let (mut lo, mut hi) = ((usize::MAX, 0), (0, 0));
        for start in 0..=m - k {
            let ones = prefix[start + k] - prefix[start];
            if ones < lo.0 {
                lo = (ones, start);
            }
            if ones > hi.0 {
                hi = (ones, start);
            }
        }
        if hi.0 >= lo.0 + 2 {
            return Some(BalanceWitness {
                heavy: Word(bits[hi.1..hi.1 + k].to_vec()),
                light: Word(bits[lo.1..lo.1 + k].to_vec()),
            });
        }
    }
    None
}

/// Balance of the bi-infinite periodic word `...www...`, i.e. of every rotation.
pub fn is_cyclically_balanced(word: &Word) -> bool {
    is_balanced(&word.concat(word))
}

/// Reference check comparing every pair of equal-length factors, cubic in
/// the length.
pub fn is_balanced_naive(word: &Word) -> bool {
    let bits = word.bits();
    let m = bits.len();
    for k in 1..=m {
        for i in 0..=m - k {
            for j in 0..=m - k {
                let a: i64 = bits[i..i + k].iter().map(|&b| b as i64).sum();
                let b: i64 = bits[j..j + k].iter().map(|&b| b as i64).sum();
                if (a - b).abs() > 1 {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn examples() {
        assert!(is_balanced(&w("10100")));
        assert!(is_balanced(&Word::empty()));
        let witness = balance_witness(&w("11000")).unwrap();
        assert_eq!(witness.heavy, w("11"));
        assert_eq!(witness.light, w("00"));
        // the longer pair 110 / 000 is also a valid witness
        assert!(w("11000").factors(3).any(|f| f == [1, 1, 0]));
        assert!(w("11000").factors(3).any(|f| f == [0, 0, 0]));
    }

    #[test]
    fn witness_is_always_valid() {
        for len in 1..=10 {
            for mask in 0..(1u64 << len) {
                let word = Word::from_mask(mask, len);
                if let Some(BalanceWitness { heavy, light }) = balance_witness(&word) {
                    assert_eq!(heavy.len(), light.len());
                    assert!(heavy.one_length() >= light.one_length() + 2);
                    let k = heavy.len();
                    assert!(word.factors(k).any(|f| f == heavy.bits()));
                    assert!(word.factors(k).any(|f| f == light.bits()));
                }
            }
        }
    }

    #[test]
    fn agrees_with_naive_oracle_up_to_length_12() {
        for len in 0..=12 {
            for mask in 0..(1u64 << len) {
                let word = Word::from_mask(mask, len);
                assert_eq!(is_balanced(&word), is_balanced_naive(&word), "{word}");
            }
        }
    }

    #[test]
    fn cyclic_balance() {
        assert!(is_cyclically_balanced(&w("00101")));
        // balanced as a finite word, not as a necklace
        assert!(is_balanced(&w("1001")));
        assert!(!is_cyclically_balanced(&w("1001")));
    }
}
