//! Invariant measures of the doubling map `T x = 2x mod 1` carried by
//! periodic orbits, and the convex order between them.
//!
//! A word `w` of length `q` generates the orbit
//! `{ b(w^(i)) / (2^q - 1) }` of `T`; the orbit measure puts mass `1/q` on
//! each rotation (so a word with a proper period collapses onto fewer
//! points). The Sturmian measure `S_{p/q}` is the orbit measure of the
//! balanced word of `W_{p,q}`.
//!
//! Convex order between two finitely supported measures with equal
//! barycenters is decided by the hockey-stick functions `(x - t)_+` at the
//! merged support points; all of it runs in exact rationals.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclic_products::binary_value;
use crate::error::{Error, Result};
use crate::rational::{format_ratio, frac, in_unit_interval, to_f64};
use crate::words::{
    balanced_orbit, enumerate_necklaces, enumerate_orbits, is_cyclically_balanced, Word,
};

/// A probability measure with finitely many atoms at exact rational points.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiscreteMeasure {
    atoms: BTreeMap<BigRational, BigRational>,
}

impl DiscreteMeasure {
    pub fn dirac(x: BigRational) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(x, BigRational::one());
        DiscreteMeasure { atoms }
    }

    /// Adds `weight` at `x`, merging coincident atoms.
    pub fn add_atom(&mut self, x: BigRational, weight: BigRational) {
        if weight.is_zero() {
            return;
        }
        *self.atoms.entry(x).or_insert_with(BigRational::zero) += weight;
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> Vec<BigRational> {
        self.atoms.keys().cloned().collect()
    }

    pub fn weight_of(&self, x: &BigRational) -> BigRational {
        self.atoms.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.atoms.values().sum()
    }

    /// `bar(mu) = int x dmu`.
    pub fn barycenter(&self) -> BigRational {
        self.atoms.iter().map(|(x, w)| x * w).sum()
    }

    /// `int (x - t)_+ dmu`.
    pub fn hockey_stick(&self, t: &BigRational) -> BigRational {
        self.atoms
            .range(t.clone()..)
            .map(|(x, w)| (x - t) * w)
            .sum()
    }

    /// `int f dmu` in floating point.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|(x, w)| f(to_f64(x)) * to_f64(w))
            .sum()
    }

    /// Convex combination `sum_i c_i mu_i`; the coefficients must sum to 1.
    pub fn mixture<'a>(
        parts: impl IntoIterator<Item = (&'a DiscreteMeasure, BigRational)>,
    ) -> Self {
        let mut out = DiscreteMeasure::default();
        for (mu, c) in parts {
            for (x, w) in &mu.atoms {
                out.add_atom(x.clone(), w * &c);
            }
        }
        out
    }

    /// Image of the support under `x -> 2x mod 1`.
    pub fn doubled_support(&self) -> Vec<BigRational> {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut image: Vec<BigRational> = self.atoms.keys().map(|x| frac(&(x * &two))).collect();
        image.sort();
        image
    }
}

impl AsRef<DiscreteMeasure> for DiscreteMeasure {
    fn as_ref(&self) -> &DiscreteMeasure {
        self
    }
}

/// Uniform measure on the doubling-map orbit generated by a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMeasure {
    word: Word,
    measure: DiscreteMeasure,
}

impl OrbitMeasure {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    /// Support points in the order of the rotations of the generating word,
    /// without repeats.
    pub fn orbit_points(&self) -> Vec<BigRational> {
        let q = self.word.len();
        let denom = BigInt::from((BigUint::one() << q) - 1u32);
        let mut points = Vec::new();
        for r in self.word.rotations() {
            let x = BigRational::new(BigInt::from(binary_value(&r)), denom.clone());
            if !points.contains(&x) {
                points.push(x);
            }
        }
        points
    }

    pub fn barycenter(&self) -> BigRational {
        self.measure.barycenter()
    }

    pub fn record(&self) -> MeasureRecord {
        let support = self.orbit_points();
        let weight = BigRational::new(BigInt::one(), BigInt::from(support.len()));
        MeasureRecord {
            word: self.word.clone(),
            support: support.iter().map(format_ratio).collect(),
            weight: format_ratio(&weight),
        }
    }
}

impl AsRef<DiscreteMeasure> for OrbitMeasure {
    fn as_ref(&self) -> &DiscreteMeasure {
        &self.measure
    }
}

/// Serialized form `{word, support: ["p/q", ...], weight}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MeasureRecord {
    pub word: Word,
    pub support: Vec<String>,
    pub weight: String,
}

/// Orbit measure of any nonempty word except `1^q` (whose point `1` lies
/// outside `[0, 1)`).
pub fn orbit_measure(word: &Word) -> Result<OrbitMeasure> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if word.one_length() == word.len() {
        return Err(Error::out_of_range(
            "word",
            format!("{word} generates the point 1, outside [0, 1)"),
        ));
    }
    let q = word.len();
    let denom = BigInt::from((BigUint::one() << q) - 1u32);
    let weight = BigRational::new(BigInt::one(), BigInt::from(q));
    let mut measure = DiscreteMeasure::default();
    for r in word.rotations() {
        let x = BigRational::new(BigInt::from(binary_value(&r)), denom.clone());
        measure.add_atom(x, weight.clone());
    }
    Ok(OrbitMeasure {
        word: word.clone(),
        measure,
    })
}

/// `S_{p/q}` for coprime `1 <= p < q`; `p = 0` gives the point mass at 0.
pub fn sturmian_measure(p: usize, q: usize) -> Result<OrbitMeasure> {
    if p == 0 {
        return orbit_measure(&Word::zeros(1));
    }
    let orbit = balanced_orbit(p, q)?;
    orbit_measure(orbit.representative())
}

pub fn barycenter(mu: &impl AsRef<DiscreteMeasure>) -> BigRational {
    mu.as_ref().barycenter()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexOrderVerdict {
    pub holds: bool,
    /// A threshold `t` with `int (x-t)_+ dmu > int (x-t)_+ dnu`.
    pub witness: Option<BigRational>,
}

/// Decides `mu ≺ nu` in the convex order.
pub fn convex_order_leq(
    mu: &impl AsRef<DiscreteMeasure>,
    nu: &impl AsRef<DiscreteMeasure>,
) -> Result<ConvexOrderVerdict> {
    let (mu, nu) = (mu.as_ref(), nu.as_ref());
    let (bm, bn) = (mu.barycenter(), nu.barycenter());
    if bm != bn {
        return Err(Error::BarycenterMismatch {
            left: format_ratio(&bm),
            right: format_ratio(&bn),
        });
    }
    let mut thresholds: Vec<&BigRational> = mu.atoms.keys().chain(nu.atoms.keys()).collect();
    thresholds.sort();
    thresholds.dedup();
    let witness = thresholds
        .into_iter()
        .find(|t| mu.hockey_stick(t) > nu.hockey_stick(t))
        .cloned();
    Ok(ConvexOrderVerdict {
        holds: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LeastElementRow {
    pub p: usize,
    pub q: usize,
    pub orbit_competitors: usize,
    pub mixed_competitors: usize,
    pub counterexamples: usize,
}

#[derive(Clone, Debug)]
pub struct LeastElementReport {
    pub q_max: usize,
    pub rows: Vec<LeastElementRow>,
    /// `(p, q, competitor description)` for every failed comparison.
    pub counterexamples: Vec<(usize, usize, String)>,
}

impl LeastElementReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn comparisons(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.orbit_competitors + r.mixed_competitors)
            .sum()
    }
}

/// Checks `S_{p/q} ≺ nu` for every coprime `p/q` with `q <= q_max` against
/// all orbit measures of `W_{kp,kq}`, `kq <= q_max`, and `mixtures` seeded
/// random convex combinations of them (all share the barycenter `p/q`).
pub fn verify_least_element(
    q_max: usize,
    mixtures: usize,
    seed: u64,
) -> Result<LeastElementReport> {
    if q_max < 2 {
        return Err(Error::out_of_range("q_max", "must be at least 2"));
    }
    let pairs: Vec<(usize, usize)> = (2..=q_max)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect();
    let results: Vec<(LeastElementRow, Vec<(usize, usize, String)>)> = pairs
        .par_iter()
        .map(|&(p, q)| -> Result<_> {
            let sturmian = sturmian_measure(p, q)?;
            let mut competitors = Vec::new();
            for k in 1..=q_max / q {
                for orbit in enumerate_orbits(k * p, k * q)? {
                    competitors.push(orbit_measure(orbit.representative())?);
                }
            }
            let mut failures = Vec::new();
            for nu in &competitors {
                if !convex_order_leq(&sturmian, nu)?.holds {
                    failures.push((p, q, nu.word().to_string()));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((p as u64) << 32 | q as u64));
            for i in 0..mixtures {
                let size = rng.random_range(2..=4usize).min(competitors.len());
                let chosen: Vec<usize> = (0..size)
                    .map(|_| rng.random_range(0..competitors.len()))
                    .collect();
                let raw: Vec<u64> = chosen
                    .iter()
                    .map(|_| rng.random_range(1..=1000u64))
                    .collect();
                let total: u64 = raw.iter().sum();
                let mix = DiscreteMeasure::mixture(chosen.iter().zip(&raw).map(|(&j, &c)| {
                    (
                        competitors[j].measure(),
                        BigRational::new(BigInt::from(c), BigInt::from(total)),
                    )
                }));
                if !convex_order_leq(&sturmian, &mix)?.holds {
                    let parts: Vec<String> = chosen
                        .iter()
                        .zip(&raw)
                        .map(|(&j, c)| format!("{c}/{total}*{}", competitors[j].word()))
                        .collect();
                    failures.push((p, q, format!("mixture #{i}: {}", parts.join(" + "))));
                }
            }
            Ok((
                LeastElementRow {
                    p,
                    q,
                    orbit_competitors: competitors.len(),
                    mixed_competitors: mixtures,
                    counterexamples: failures.len(),
                },
                failures,
            ))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for (row, failures) in results {
        rows.push(row);
        counterexamples.extend(failures);
    }
    Ok(LeastElementReport {
        q_max,
        rows,
        counterexamples,
    })
}

/// Truncated evaluation of `phi_gamma(x) = sum_n chi_[1-gamma,1)(x + n gamma mod 1) / 2^(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSample {
    pub gamma: BigRational,
    pub x: BigRational,
    pub truncation: usize,
    /// Exact value of the first `truncation` terms.
    pub value: BigRational,
    /// The binary digits summed, most significant first.
    pub digits: Word,
}

impl PhiSample {
    /// The neglected tail is at most `2^-N`.
    pub fn error_bound(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.truncation)
    }
}

pub fn phi_sample(gamma: &BigRational, x: &BigRational, truncation: usize) -> Result<PhiSample> {
    if truncation == 0 {
        return Err(Error::out_of_range("N", "truncation must be at least 1"));
    }
    if gamma.is_negative() || gamma > &BigRational::one() {
        return Err(Error::out_of_range(
            "gamma",
            format!("{} not in [0, 1]", format_ratio(gamma)),
        ));
    }
    if !in_unit_interval(x) {
        return Err(Error::out_of_range(
            "x",
            format!("{} not in [0, 1)", format_ratio(x)),
        ));
    }
    let threshold = BigRational::one() - gamma;
    let mut point = x.clone();
    let mut digits = Word::empty();
    let mut numer = BigInt::zero();
    for _ in 0..truncation {
        let bit = u8::from(point >= threshold);
        digits.push(bit);
        numer = (numer << 1usize) + bit as u32;
        point = frac(&(point + gamma));
    }
    Ok(PhiSample {
        gamma: gamma.clone(),
        x: x.clone(),
        truncation,
        value: BigRational::new(numer, BigInt::one() << truncation),
        digits,
    })
}

#[derive(Clone, Debug)]
pub struct OrbitMaximum {
    pub measure: OrbitMeasure,
    pub value: f64,
}

/// Values within this distance of the best are treated as ties.
pub const MAXIMIZATION_TIE_TOLERANCE: f64 = 1e-12;

/// Maximizes `int f dnu` over the orbit measures of all primitive necklaces of
/// length `<= max_period` (the all-ones necklaces excluded). Ties go to the
/// shorter, then lexicographically smaller generating word.
pub fn maximize_over_orbits(
    f: impl Fn(f64) -> f64 + Sync,
    max_period: usize,
) -> Result<OrbitMaximum> {
    if max_period == 0 {
        return Err(Error::out_of_range("max_period", "must be at least 1"));
    }
    let mut candidates = Vec::new();
    for q in 1..=max_period {
        for orbit in enumerate_necklaces(q)? {
            if orbit.period() == q && orbit.one_length() < q {
                candidates.push(orbit.representative().clone());
            }
        }
    }
    let scored: Vec<(Word, f64, OrbitMeasure)> = candidates
        .par_iter()
        .map(|word| {
            let measure = orbit_measure(word)?;
            let value = measure.measure().integrate(&f);
            Ok((word.clone(), value, measure))
        })
        .collect::<Result<_>>()?;
    let best = scored
        .iter()
        .map(|(_, v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let (_, value, measure) = scored
        .into_iter()
        .filter(|(_, v, _)| *v >= best - MAXIMIZATION_TIE_TOLERANCE)
        .min_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)))
        .expect("at least the fixed point 0 is a candidate");
    Ok(OrbitMaximum { measure, value })
}

/// `g_theta(x) = cos 2 pi (x - theta)`.
pub fn cosine_family(theta: f64) -> impl Fn(f64) -> f64 + Sync {
    move |x| (2.0 * std::f64::consts::PI * (x - theta)).cos()
}

/// `f_theta(x) = 1 - 4 dist_T(x, theta)` with the circle distance on `R/Z`.
pub fn tent_family(theta: f64) -> impl Fn(f64) -> f64 + Sync {
    move |x| {
        let d = (x - theta).rem_euclid(1.0);
        1.0 - 4.0 * d.min(1.0 - d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub best_word: Word,
    pub value: f64,
    pub is_balanced: bool,
}

/// Runs [`maximize_over_orbits`] for each `theta` with the given family.
pub fn theta_experiment<F>(
    family: impl Fn(f64) -> F + Sync,
    thetas: &[f64],
    max_period: usize,
) -> Result<Vec<ThetaRow>>
where
    F: Fn(f64) -> f64 + Sync,
{
    thetas
        .iter()
        .map(|&theta| {
            let best = maximize_over_orbits(family(theta), max_period)?;
            let word = best.measure.word().clone();
            Ok(ThetaRow {
                theta,
                is_balanced: is_cyclically_balanced(&word),
                best_word: word,
                value: best.value,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::words::w;

    fn set(points: &[(i64, i64)]) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = points.iter().map(|&(a, b)| ratio(a, b)).collect();
        v.sort();
        v
    }

    #[test]
    fn sturmian_two_fifths() {
        let s = sturmian_measure(2, 5).unwrap();
        assert_eq!(s.word(), &w("00101"));
        assert_eq!(
            s.measure().support(),
            set(&[(5, 31), (10, 31), (20, 31), (9, 31), (18, 31)])
        );
        for x in s.measure().support() {
            assert_eq!(s.measure().weight_of(&x), ratio(1, 5));
        }
        assert_eq!(s.barycenter(), ratio(2, 5));
        assert_eq!(
            s.orbit_points(),
            vec![
                ratio(5, 31),
                ratio(10, 31),
                ratio(20, 31),
                ratio(9, 31),
                ratio(18, 31)
            ]
        );
    }

    #[test]
    fn sturmian_half_and_degenerate() {
        let s = sturmian_measure(1, 2).unwrap();
        assert_eq!(s.measure().support(), set(&[(1, 3), (2, 3)]));
        assert_eq!(s.measure().weight_of(&ratio(1, 3)), ratio(1, 2));
        let zero = sturmian_measure(0, 1).unwrap();
        assert_eq!(zero.measure(), &DiscreteMeasure::dirac(ratio(0, 1)));
        assert!(matches!(
            sturmian_measure(2, 4),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn orbit_measure_examples() {
        let mu = orbit_measure(&w("00011")).unwrap();
        assert_eq!(
            mu.measure().support(),
            set(&[(3, 31), (6, 31), (12, 31), (24, 31), (17, 31)])
        );
        assert_eq!(mu.barycenter(), ratio(2, 5));
        assert_eq!(
            orbit_measure(&w("01")).unwrap().measure().support(),
            set(&[(1, 3), (2, 3)])
        );
        assert_eq!(orbit_measure(&w("0")).unwrap().barycenter(), ratio(0, 1));
        assert!(orbit_measure(&w("111")).is_err());
        assert!(orbit_measure(&Word::empty()).is_err());
        // a proper period collapses the support
        let collapsed = orbit_measure(&w("0101")).unwrap();
        assert_eq!(
            collapsed.measure(),
            orbit_measure(&w("01")).unwrap().measure()
        );
    }

    #[test]
    fn barycenter_is_one_ratio() {
        for q in 1..=12 {
            for mask in 0..(1u64 << q) - 1 {
                let word = Word::from_mask(mask, q);
                let mu = orbit_measure(&word).unwrap();
                assert_eq!(mu.barycenter(), word.one_ratio().unwrap());
                assert_eq!(mu.measure().total_mass(), BigRational::one());
            }
        }
    }

    #[test]
    fn doubling_permutes_support() {
        for q in 1..=12 {
            for mask in 0..(1u64 << q) - 1 {
                let mu = orbit_measure(&Word::from_mask(mask, q)).unwrap();
                assert_eq!(mu.measure().doubled_support(), mu.measure().support());
            }
        }
    }

    #[test]
    fn convex_order_examples() {
        let s = sturmian_measure(2, 5).unwrap();
        let other = orbit_measure(&w("00011")).unwrap();
        assert!(convex_order_leq(&s, &s).unwrap().holds);
        assert!(convex_order_leq(&s, &other).unwrap().holds);
        let reverse = convex_order_leq(&other, &s).unwrap();
        assert!(!reverse.holds);
        let t = reverse.witness.unwrap();
        assert!(other.measure().hockey_stick(&t) > s.measure().hockey_stick(&t));
        let half = sturmian_measure(1, 2).unwrap();
        assert!(matches!(
            convex_order_leq(&s, &half),
            Err(Error::BarycenterMismatch { .. })
        ));
    }

    #[test]
    fn hockey_stick_hand_values() {
        let s = sturmian_measure(2, 5).unwrap();
        // (20-10 + 18-10) / 31 / 5 at t = 10/31
        assert_eq!(s.measure().hockey_stick(&ratio(10, 31)), ratio(18, 155));
        assert_eq!(s.measure().hockey_stick(&ratio(0, 1)), ratio(2, 5));
    }

    #[test]
    fn least_element_small() {
        let report = verify_least_element(2, 5, 7).unwrap();
        assert!(report.passed());
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].orbit_competitors, 1);
        let report = verify_least_element(5, 20, 7).unwrap();
        assert!(report.passed());
        assert!(report.rows.iter().any(|r| (r.p, r.q) == (2, 5)));
        assert!(verify_least_element(1, 5, 7).is_err());
    }

    #[test]
    fn phi_rational() {
        let sample = phi_sample(&ratio(2, 5), &ratio(0, 1), 40).unwrap();
        assert_eq!(sample.digits.prefix(10), w("0010100101"));
        let diff = (&sample.value - ratio(5, 31)).abs();
        assert!(diff <= sample.error_bound());
        let zero = phi_sample(&ratio(0, 1), &ratio(1, 3), 16).unwrap();
        assert!(zero.value.is_zero());
        assert!(phi_sample(&ratio(2, 5), &ratio(1, 1), 4).is_err());
        assert!(phi_sample(&ratio(2, 5), &ratio(0, 1), 0).is_err());
    }

    #[test]
    fn cosine_examples() {
        let best = maximize_over_orbits(cosine_family(0.0), 6).unwrap();
        assert_eq!(best.measure.word(), &w("0"));
        assert!((best.value - 1.0).abs() < 1e-15);
        let best = maximize_over_orbits(cosine_family(0.5), 3).unwrap();
        assert_eq!(best.measure.word(), &w("01"));
        assert!((best.value - 0.5).abs() < 1e-12);
        for word in ["001", "011"] {
            let v = orbit_measure(&w(word))
                .unwrap()
                .measure()
                .integrate(cosine_family(0.5));
            assert!((v - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tent_family_shape() {
        let f = tent_family(0.25);
        assert!((f(0.25) - 1.0).abs() < 1e-15);
        assert!((f(0.75) + 1.0).abs() < 1e-15);
        assert!((f(0.0) - 0.0).abs() < 1e-15);
        assert!((tent_family(0.9)(0.05) - (1.0 - 0.6)).abs() < 1e-12);
    }
}
