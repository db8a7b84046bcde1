use std::collections::VecDeque;

use serde::Serialize;

use super::lattice::LatticeFunction;
use crate::error::{Error, Result};
use crate::words::{enumerate_orbits, mechanical_word, MechanicalSpec, Word};

/// Where a 0-1 sequence comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolSource {
    Mechanical(MechanicalSpec),
    /// The word repeated forever.
    Periodic(Word),
    /// Exactly these symbols, then nothing.
    Finite(Word),
}

impl SymbolSource {
    /// The first `count` symbols.
    pub fn take(&self, count: usize) -> Result<Word> {
        match self {
            SymbolSource::Mechanical(spec) => mechanical_word(spec, count),
            SymbolSource::Periodic(w) => {
                if w.is_empty() {
                    return Err(Error::EmptyWord);
                }
                Ok(w.repeat(count.div_ceil(w.len())).prefix(count))
            }
            SymbolSource::Finite(w) => {
                if w.len() < count {
                    return Err(Error::InsufficientSymbols {
                        needed: count,
                        available: w.len(),
                    });
                }
                Ok(w.prefix(count))
            }
        }
    }

    /// Symbols one at a time, evaluated independently of [`Self::take`].
    pub fn stream(&self) -> Box<dyn Iterator<Item = u8> + '_> {
        match self {
            SymbolSource::Mechanical(spec) => Box::new((1u64..).map(move |n| spec.symbol(n))),
            SymbolSource::Periodic(w) => Box::new(w.bits().iter().copied().cycle()),
            SymbolSource::Finite(w) => Box::new(w.bits().iter().copied()),
        }
    }
}

fn window_value(j: &LatticeFunction, window: &[u8]) -> Result<f64> {
    let u: Vec<i64> = window.iter().map(|&b| i64::from(b)).collect();
    j.eval_checked(&u)
}

fn check_horizon(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("n", "horizon must be positive"));
    }
    Ok(())
}

/// `(1/n) sum_{k=1}^{n} J(x_k, ..., x_{k+m-1})`.
pub fn window_average(j: &LatticeFunction, x: &SymbolSource, n: usize) -> Result<f64> {
    check_horizon(n)?;
    let m = j.arity();
    let symbols = x.take(n + m - 1)?;
    let values = symbols
        .bits()
        .windows(m)
        .map(|w| window_value(j, w))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / n as f64)
}

/// Same quantity as [`window_average`], accumulated over a sliding buffer.
pub fn streaming_window_average(j: &LatticeFunction, x: &SymbolSource, n: usize) -> Result<f64> {
    check_horizon(n)?;
    let m = j.arity();
    let needed = n + m - 1;
    let mut buffer: VecDeque<u8> = VecDeque::with_capacity(m);
    let mut total = 0.0;
    let mut seen = 0;
    let mut done = 0;
    for symbol in x.stream().take(needed) {
        seen += 1;
        buffer.push_back(symbol);
        if buffer.len() > m {
            buffer.pop_front();
        }
        if buffer.len() == m {
            total += window_value(j, buffer.make_contiguous())?;
            done += 1;
        }
    }
    if done < n {
        return Err(Error::InsufficientSymbols {
            needed,
            available: seen,
        });
    }
    Ok(total / n as f64)
}

/// `sum_k J(w_k, ..., w_{k+m-1})` with indices taken cyclically.
pub fn cyclic_window_sum(j: &LatticeFunction, w: &Word) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let m = j.arity();
    let bits = w.bits();
    let len = bits.len();
    let mut window = vec![0u8; m];
    let mut total = 0.0;
    for k in 0..len {
        for (i, slot) in window.iter_mut().enumerate() {
            *slot = bits[(k + i) % len];
        }
        total += window_value(j, &window)?;
    }
    Ok(total)
}

/// Largest length handled by [`min_cyclic_window_sum_brute`].
const BRUTE_LENGTH: usize = 22;

/// Minimum of [`cyclic_window_sum`] over length-`n` words with `k` ones, by
/// enumerating rotation classes.
pub fn min_cyclic_window_sum_brute(j: &LatticeFunction, n: usize, k: usize) -> Result<(f64, Word)> {
    if n > BRUTE_LENGTH {
        return Err(Error::ExhaustiveBound {
            what: "n",
            value: n,
            limit: BRUTE_LENGTH,
        });
    }
    let mut best: Option<(f64, Word)> = None;
    for orbit in enumerate_orbits(k, n)? {
        let w = orbit.representative().clone();
        let value = cyclic_window_sum(j, &w)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, w));
        }
    }
    Ok(best.expect("at least one orbit"))
}

/// Minimum of [`cyclic_window_sum`] over length-`n` words with `k` ones.
///
/// Dynamic programming over the last `m - 1` symbols and the running
/// 1-count, once per choice of the first `m - 1` symbols, which close the
/// cycle. Exact and polynomial in `n`.
pub fn min_cyclic_window_sum(j: &LatticeFunction, n: usize, k: usize) -> Result<(f64, Word)> {
    if n == 0 {
        return Err(Error::out_of_range("n", "length must be positive"));
    }
    if k > n {
        return Err(Error::out_of_range(
            "k",
            format!("{k} ones do not fit in length {n}"),
        ));
    }
    let m = j.arity();
    if n < m {
        return min_cyclic_window_sum_brute(j, n, k);
    }
    let h = m - 1;
    let states = 1usize << h;
    let mask = states - 1;
    let bits_of = |s: usize| -> Vec<u8> { (0..h).rev().map(|i| ((s >> i) & 1) as u8).collect() };
    // window values for every (state, next bit)
    let mut step_cost = vec![[0.0f64; 2]; states];
    for (s, costs) in step_cost.iter_mut().enumerate() {
        for b in 0..2u8 {
            let mut w = bits_of(s);
            w.push(b);
            costs[b as usize] = window_value(j, &w)?;
        }
    }
    let mut best: Option<(f64, Vec<u8>)> = None;
    for prefix in 0..states {
        let prefix_bits = bits_of(prefix);
        let prefix_ones = prefix.count_ones() as usize;
        if prefix_ones > k {
            continue;
        }
        // cost[s][c] after the current position; parents for reconstruction
        let unset = f64::INFINITY;
        let mut cost = vec![vec![unset; k + 1]; states];
        cost[prefix][prefix_ones] = 0.0;
        let mut parents: Vec<Vec<Vec<(usize, u8)>>> = Vec::with_capacity(n - h);
        for _ in h..n {
            let mut next = vec![vec![unset; k + 1]; states];
            let mut parent = vec![vec![(usize::MAX, 0u8); k + 1]; states];
            for s in 0..states {
                for c in 0..=k {
                    let base = cost[s][c];
                    if base == unset {
                        continue;
                    }
                    for b in 0..2u8 {
                        let c2 = c + b as usize;
                        if c2 > k {
                            continue;
                        }
                        let s2 = ((s << 1) | b as usize) & mask;
                        let v = base + step_cost[s][b as usize];
                        if v < next[s2][c2] {
                            next[s2][c2] = v;
                            parent[s2][c2] = (s, b);
                        }
                    }
                }
            }
            cost = next;
            parents.push(parent);
        }
        for (s, row) in cost.iter().enumerate() {
            if row[k] == unset {
                continue;
            }
            // windows wrapping from the last h symbols into the prefix
            let mut tail = bits_of(s);
            tail.extend_from_slice(&prefix_bits);
            let mut closing = 0.0;
            for start in 0..h {
                closing += window_value(j, &tail[start..start + m])?;
            }
            let total = row[k] + closing;
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                let mut suffix = Vec::with_capacity(n - h);
                let (mut state, mut c) = (s, k);
                for parent in parents.iter().rev() {
                    let (prev, b) = parent[state][c];
                    suffix.push(b);
                    c -= b as usize;
                    state = prev;
                }
                suffix.reverse();
                let mut word = prefix_bits.clone();
                word.extend(suffix);
                best = Some((total, word));
            }
        }
    }
    let (value, bits) = best.ok_or_else(|| Error::out_of_range("k", "no admissible word"))?;
    Ok((value, Word::new(bits)?.canonical_rotation()))
}

/// Mechanical word against the exact minimum over all words with the same
/// length and 1-count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub function: String,
    pub p: u64,
    pub q: u64,
    pub n: usize,
    pub mechanical: Word,
    pub mechanical_average: f64,
    pub minimum_average: f64,
    pub minimizer: Word,
    pub attains: bool,
}

/// Whether the slope-`p/q` mechanical word of length `n` (a multiple of
/// `q`) attains the minimal cyclic window average among words with the same
/// 1-count. Ties count as attaining.
pub fn verify_mechanical_minimality(
    j: &LatticeFunction,
    p: u64,
    q: u64,
    n: usize,
) -> Result<MinimalityReport> {
    if q == 0 || p > q {
        return Err(Error::out_of_range(
            "p",
            format!("need 0 <= p <= q, q > 0, got {p}/{q}"),
        ));
    }
    if n == 0 || !(n as u64).is_multiple_of(q) {
        return Err(Error::out_of_range(
            "n",
            format!("{n} is not a positive multiple of {q}"),
        ));
    }
    let mechanical = mechanical_word(&MechanicalSpec::ratio(p, q)?, n)?;
    let k = mechanical.one_length();
    let mechanical_sum = cyclic_window_sum(j, &mechanical)?;
    let (min_sum, minimizer) = min_cyclic_window_sum(j, n, k)?;
    let attains = mechanical_sum <= min_sum + 1e-9 * (1.0 + min_sum.abs());
    Ok(MinimalityReport {
        function: j.name().to_string(),
        p,
        q,
        n,
        mechanical,
        mechanical_average: mechanical_sum / n as f64,
        minimum_average: min_sum / n as f64,
        minimizer,
        attains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multimodular_queue::multimodular_fixtures;
    use crate::words::w;

    #[test]
    fn constant_and_projection() {
        let c = LatticeFunction::total("c", 3, |_| 2.5);
        let x = SymbolSource::Periodic(w("0110"));
        assert_eq!(window_average(&c, &x, 17).unwrap(), 2.5);
        let proj = LatticeFunction::total("u1", 2, |u| u[0] as f64);
        let x = SymbolSource::Mechanical(MechanicalSpec::ratio(3, 7).unwrap());
        assert!((window_average(&proj, &x, 21).unwrap() - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn insufficient_symbols() {
        let j = LatticeFunction::total("c", 3, |_| 1.0);
        let x = SymbolSource::Finite(w("01101"));
        assert!(window_average(&j, &x, 3).is_ok());
        assert!(matches!(
            window_average(&j, &x, 4),
            Err(Error::InsufficientSymbols {
                needed: 6,
                available: 5
            })
        ));
        assert!(matches!(
            streaming_window_average(&j, &x, 4),
            Err(Error::InsufficientSymbols {
                needed: 6,
                available: 5
            })
        ));
    }

    #[test]
    fn streaming_agrees() {
        for j in multimodular_fixtures() {
            for (p, q) in [(1, 3), (2, 5), (3, 8)] {
                let x = SymbolSource::Mechanical(MechanicalSpec::ratio(p, q).unwrap());
                let a = window_average(&j, &x, 200).unwrap();
                let b = streaming_window_average(&j, &x, 200).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dp_matches_brute_force() {
        for j in multimodular_fixtures() {
            for n in 1..=12 {
                for k in 0..=n {
                    let (dp, word) = min_cyclic_window_sum(&j, n, k).unwrap();
                    let (brute, _) = min_cyclic_window_sum_brute(&j, n, k).unwrap();
                    assert!(
                        (dp - brute).abs() < 1e-9 * (1.0 + brute.abs()),
                        "{} n={n} k={k}",
                        j.name()
                    );
                    assert_eq!(word.one_length(), k);
                    assert!(
                        (cyclic_window_sum(&j, &word).unwrap() - dp).abs()
                            < 1e-9 * (1.0 + dp.abs())
                    );
                }
            }
        }
    }

    #[test]
    fn non_multimodular_function_can_prefer_clusters() {
        // rewards adjacent ones, so 0011-type clusters beat the mechanical word
        let j = LatticeFunction::total("neg-pair", 2, |u| -(u[0] * u[1]) as f64);
        let r = verify_mechanical_minimality(&j, 2, 5, 10).unwrap();
        assert!(!r.attains);
    }

    #[test]
    fn mechanical_attains_minimum() {
        for j in multimodular_fixtures() {
            for q in 1..=6u64 {
                for p in 0..=q {
                    let r = verify_mechanical_minimality(&j, p, q, 2 * q as usize).unwrap();
                    assert!(r.attains, "{r:?}");
                }
            }
        }
    }
}
