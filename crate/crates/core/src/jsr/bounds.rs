use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::mat2::{a0, a1, Mat2};
use crate::error::{Error, Result};
use crate::words::{enumerate_orbits, Word};

/// Default exhaustive length for necklace scans.
pub const DEFAULT_SCAN_BOUND: usize = 18;

/// Total number of words across all lengths we are willing to enumerate.
const MAX_WORDS: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixNorm {
    #[default]
    Spectral,
    MaxRowSum,
}

impl MatrixNorm {
    pub fn eval(self, m: &Mat2<f64>) -> f64 {
        match self {
            MatrixNorm::Spectral => m.spectral_norm(),
            MatrixNorm::MaxRowSum => m.max_row_sum(),
        }
    }
}

impl std::str::FromStr for MatrixNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" | "2" => Ok(MatrixNorm::Spectral),
            "max-row-sum" | "inf" => Ok(MatrixNorm::MaxRowSum),
            _ => Err(Error::Config(format!("unknown norm {s:?}"))),
        }
    }
}

/// Per-length brute-force values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthBounds {
    pub n: usize,
    /// `max rho(P_w)^{1/n}` over necklaces of length `n`.
    pub radius: f64,
    /// `max ||P_w||^{1/n}` over words of length `n`.
    pub norm: f64,
    /// Running lower bound after length `n`.
    pub lower: f64,
    /// Running upper bound after length `n`, non-increasing.
    pub upper: f64,
    pub radius_argmax: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    pub norm: MatrixNorm,
    /// A word attaining the lower bound.
    pub lower_word: Vec<usize>,
    pub per_length: Vec<LengthBounds>,
}

fn index_word(mut code: u64, n: usize, r: usize) -> Vec<usize> {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = (code % r as u64) as usize;
        code /= r as u64;
    }
    w
}

fn is_least_rotation(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|k| {
        let rotated = w[k..].iter().chain(&w[..k]);
        w.iter().le(rotated)
    })
}

/// Brute-force lower and upper bounds on the joint spectral radius.
///
/// Lower: spectral radii of cyclic products over necklaces. Upper: norms
/// over all words, with the running minimum taken across lengths.
pub fn jsr_bounds(matrices: &[Mat2<f64>], n_max: usize, norm: MatrixNorm) -> Result<JsrBounds> {
    if matrices.is_empty() {
        return Err(Error::out_of_range("matrices", "empty matrix set"));
    }
    if n_max == 0 {
        return Err(Error::out_of_range("n_max", "must be at least 1"));
    }
    let r = matrices.len();
    let total: u128 = (1..=n_max)
        .map(|n| (r as u128).saturating_pow(n as u32))
        .sum();
    if total > MAX_WORDS {
        return Err(Error::ExhaustiveBound {
            what: "word count",
            value: total.min(usize::MAX as u128) as usize,
            limit: MAX_WORDS as usize,
        });
    }
    let mut lower = 0.0f64;
    let mut lower_word = Vec::new();
    let mut upper = f64::INFINITY;
    let mut per_length = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let count = (r as u64).pow(n as u32);
        let inv = 1.0 / n as f64;
        let (radius, radius_code, norm_max) = (0..count)
            .into_par_iter()
            .map(|code| {
                let w = index_word(code, n, r);
                let p = Mat2::product(matrices, &w);
                let rho = if is_least_rotation(&w) {
                    p.spectral_radius().powf(inv)
                } else {
                    f64::NEG_INFINITY
                };
                (rho, code, norm.eval(&p).powf(inv))
            })
            .reduce(
                || (f64::NEG_INFINITY, u64::MAX, 0.0),
                |a, b| {
                    let (rho, code) = if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        (b.0, b.1)
                    } else {
                        (a.0, a.1)
                    };
                    (rho, code, a.2.max(b.2))
                },
            );
        let word = index_word(radius_code, n, r);
        if radius > lower {
            lower = radius;
            lower_word = word.clone();
        }
        upper = upper.min(norm_max);
        per_length.push(LengthBounds {
            n,
            radius,
            norm: norm_max,
            lower,
            upper,
            radius_argmax: word,
        });
    }
    Ok(JsrBounds {
        lower,
        upper,
        norm,
        lower_word,
        per_length,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::out_of_range(
            "alpha",
            format!("{alpha} not in [0, 1]"),
        ));
    }
    Ok(())
}

/// `{A_0, alpha A_1}`.
pub fn scaled_pair(alpha: f64) -> Result<[Mat2<f64>; 2]> {
    check_alpha(alpha)?;
    Ok([a0(), a1::<f64>().scale(&alpha)])
}

/// Exact version of [`scaled_pair`] for rational `alpha`.
pub fn scaled_pair_exact(alpha: &BigRational) -> Result<[Mat2<BigRational>; 2]> {
    use num_traits::{One, Zero};
    if alpha < &BigRational::zero() || alpha > &BigRational::one() {
        return Err(Error::out_of_range(
            "alpha",
            format!("{alpha} not in [0, 1]"),
        ));
    }
    Ok([a0(), a1::<BigRational>().scale(alpha)])
}

/// Outcome of one optimal-ratio scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioScan {
    pub alpha: f64,
    pub n: usize,
    /// Number of ones in the argmax necklace.
    pub ones: usize,
    pub ratio: f64,
    pub necklace: Word,
    /// `rho(P_w)^{1/n}` for the argmax under `{A_0, alpha A_1}`.
    pub growth: f64,
}

/// Precomputed necklace data for optimal-ratio scans at a fixed length.
///
/// Under `{A_0, alpha A_1}` a word with `k` ones has cyclic product
/// `alpha^k P_w`, so only the best `rho(P_w)` per one-count matters and each
/// `alpha` costs `O(n)` once the table is built.
#[derive(Clone, Debug)]
pub struct RatioScanner {
    n: usize,
    /// `(ln rho(P_w), w)` maximizing per one-count `k = 0..=n`.
    best: Vec<(f64, Word)>,
}

/// `ln` of the spectral radius of an integer matrix with determinant 1 and
/// nonnegative trace.
fn ln_sl2_radius(trace: u128) -> f64 {
    if trace <= 2 {
        return 0.0;
    }
    let t = trace as f64;
    t.ln() + ((1.0 + (1.0 - 4.0 / (t * t)).sqrt()) / 2.0).ln()
}

impl RatioScanner {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_bound(n, DEFAULT_SCAN_BOUND)
    }

    pub fn with_bound(n: usize, bound: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::out_of_range("n", "must be at least 1"));
        }
        if n > bound {
            return Err(Error::ExhaustiveBound {
                what: "n",
                value: n,
                limit: bound,
            });
        }
        let best = (0..=n)
            .into_par_iter()
            .map(|k| {
                enumerate_orbits(k, n).map(|orbits| {
                    orbits
                        .into_iter()
                        .map(|o| {
                            let w = o.representative().clone();
                            let word: Vec<usize> = w.bits().iter().map(|&b| b as usize).collect();
                            let p = Mat2::product(&[a0::<u128>(), a1::<u128>()], &word);
                            (ln_sl2_radius(p.trace()), w)
                        })
                        // orbits arrive sorted, so keep the first maximum
                        .fold(None::<(f64, Word)>, |acc, cand| match acc {
                            Some(a) if a.0 >= cand.0 => Some(a),
                            _ => Some(cand),
                        })
                        .expect("every one-count has an orbit")
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RatioScanner { n, best })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scan(&self, alpha: f64) -> Result<RatioScan> {
        check_alpha(alpha)?;
        let (k, score) = if alpha == 0.0 {
            (0, self.best[0].0)
        } else {
            let la = alpha.ln();
            // strict improvement only: ties resolve to the smaller ratio
            self.best
                .iter()
                .enumerate()
                .map(|(k, (c, _))| (k, k as f64 * la + c))
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (k, s)| if s > acc.1 { (k, s) } else { acc },
                )
        };
        Ok(RatioScan {
            alpha,
            n: self.n,
            ones: k,
            ratio: k as f64 / self.n as f64,
            necklace: self.best[k].1.clone(),
            growth: (score / self.n as f64).exp(),
        })
    }
}

/// Necklace of length `n` maximizing `rho^{1/n}` under `{A_0, alpha A_1}`.
pub fn optimal_ratio_scan(alpha: f64, n: usize) -> Result<RatioScan> {
    RatioScanner::new(n)?.scan(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn golden_lower_bound() {
        let pair = scaled_pair(1.0).unwrap();
        let b = jsr_bounds(&pair, 8, MatrixNorm::Spectral).unwrap();
        assert!((b.lower - GOLDEN).abs() < 1e-12);
        assert!((b.per_length[1].lower - GOLDEN).abs() < 1e-12);
        assert_eq!(b.per_length[1].radius_argmax, vec![0, 1]);
        assert!(b.upper >= b.lower);
        for pair in b.per_length.windows(2) {
            assert!(pair[1].upper <= pair[0].upper);
        }
    }

    #[test]
    fn single_and_degenerate_sets() {
        let b = jsr_bounds(&[a0()], 6, MatrixNorm::MaxRowSum).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        let zero = scaled_pair(0.0).unwrap();
        let b = jsr_bounds(&zero, 10, MatrixNorm::Spectral).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!(b.lower_word.iter().all(|&i| i == 0));
        assert!(jsr_bounds(&[], 3, MatrixNorm::Spectral).is_err());
    }

    #[test]
    fn alpha_range() {
        assert!(scaled_pair(1.5).is_err());
        assert!(scaled_pair(-0.1).is_err());
        let half = scaled_pair(0.5).unwrap();
        assert_eq!(half[1], Mat2::new(0.5, 0.0, 0.5, 0.5));
    }

    #[test]
    fn scan_endpoints() {
        let s = optimal_ratio_scan(1.0, 10).unwrap();
        assert_eq!(s.ratio, 0.5);
        assert_eq!(s.necklace.to_string(), "0101010101");
        assert!((s.growth - GOLDEN).abs() < 1e-12);
        let s = optimal_ratio_scan(0.0, 9).unwrap();
        assert_eq!(s.ones, 0);
        assert!(optimal_ratio_scan(0.5, 19).is_err());
    }

    #[test]
    fn scanner_matches_direct_scan() {
        let n = 9;
        let scanner = RatioScanner::new(n).unwrap();
        for i in 0..=20 {
            let alpha = i as f64 / 20.0;
            let pair = scaled_pair(alpha).unwrap();
            let direct = enumerate_orbits_all(n)
                .into_iter()
                .map(|w| {
                    let word: Vec<usize> = w.bits().iter().map(|&b| b as usize).collect();
                    Mat2::product(&pair, &word)
                        .spectral_radius()
                        .powf(1.0 / n as f64)
                })
                .fold(0.0f64, f64::max);
            let s = scanner.scan(alpha).unwrap();
            assert!(
                (s.growth - direct).abs() < 1e-9 * direct.max(1.0),
                "alpha {alpha}"
            );
        }
    }

    fn enumerate_orbits_all(n: usize) -> Vec<Word> {
        crate::words::enumerate_necklaces(n)
            .unwrap()
            .into_iter()
            .map(|o| o.representative().clone())
            .collect()
    }
}
