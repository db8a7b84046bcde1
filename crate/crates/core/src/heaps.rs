//! Two-piece heaps of pieces.
//!
//! A piece occupies a set of columns and has a lower and an upper contour.
//! Dropping it onto the heap lands it at `L = max_c (h[c] - lower(c))` and
//! raises each of its columns to `L + upper(c)`. A drop is therefore a
//! linear map in the (max, +) semiring, and the growth rate of a periodic
//! schedule `w^∞` is the maximum cycle mean of the composed matrix, divided
//! by `|w|`. All heights are exact rationals.

use std::path::Path;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{balanced_orbit, enumerate_necklaces, is_cyclically_balanced, Word};

/// Largest `n` for the `2^n` scans.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    columns: Vec<usize>,
    lower: Vec<Rational64>,
    upper: Vec<Rational64>,
}

impl Piece {
    /// `columns[i]` has contours `lower[i]` and `upper[i]`.
    pub fn new(
        columns: Vec<usize>,
        lower: Vec<Rational64>,
        upper: Vec<Rational64>,
    ) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidModel("piece has no columns".into()));
        }
        if columns.len() != lower.len() || columns.len() != upper.len() {
            return Err(Error::InvalidModel(
                "contour lengths differ from column count".into(),
            ));
        }
        let mut sorted = columns.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != columns.len() {
            return Err(Error::InvalidModel("repeated column in piece".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| u < l) {
            return Err(Error::InvalidModel(
                "upper contour below lower contour".into(),
            ));
        }
        if lower.iter().any(|l| *l < Rational64::zero()) || !lower.iter().any(Zero::is_zero) {
            return Err(Error::InvalidModel(
                "lower contour must be nonnegative with minimum 0".into(),
            ));
        }
        Ok(Piece {
            columns,
            lower,
            upper,
        })
    }

    /// Integer-contour convenience constructor.
    pub fn from_ints(columns: &[usize], lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(
            columns.to_vec(),
            lower.iter().map(|&x| Rational64::from_integer(x)).collect(),
            upper.iter().map(|&x| Rational64::from_integer(x)).collect(),
        )
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    fn cells(&self) -> impl Iterator<Item = (usize, Rational64, Rational64)> + '_ {
        self.columns
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&c, (&l, &u))| (c, l, u))
    }

    /// The same piece reflected through the column axis of a `num_columns` board.
    pub fn mirrored(&self, num_columns: usize) -> Piece {
        Piece {
            columns: self.columns.iter().map(|c| num_columns - 1 - c).collect(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeapModel {
    num_columns: usize,
    pieces: [Piece; 2],
}

impl HeapModel {
    pub fn new(num_columns: usize, piece0: Piece, piece1: Piece) -> Result<Self> {
        let pieces = [piece0, piece1];
        let mut covered = vec![false; num_columns];
        for piece in &pieces {
            for &c in piece.columns() {
                if c >= num_columns {
                    return Err(Error::InvalidModel(format!(
                        "column {c} out of range for {num_columns} columns"
                    )));
                }
                covered[c] = true;
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(Error::InvalidModel(
                "pieces do not cover every column".into(),
            ));
        }
        Ok(HeapModel {
            num_columns,
            pieces,
        })
    }

    /// Three columns with two flat-bottomed dominoes: piece 0 on columns
    /// {0, 1} with upper contour (2, 1), piece 1 on {1, 2} with upper
    /// contour (1, 3). Pure schedules grow by 2 and 3 per piece; the balanced
    /// schedule `(001)^∞` grows by 4/3.
    pub fn default_model() -> Self {
        let piece0 = Piece::from_ints(&[0, 1], &[0, 0], &[2, 1]).unwrap();
        let piece1 = Piece::from_ints(&[1, 2], &[0, 0], &[1, 3]).unwrap();
        HeapModel::new(3, piece0, piece1).unwrap()
    }

    /// Piece 0 on {0, 1} with upper (2, 1) and its mirror image on {1, 2};
    /// symmetry under swapping the pieces forces the ratio 1/2.
    pub fn symmetric_model() -> Self {
        let piece0 = Piece::from_ints(&[0, 1], &[0, 0], &[2, 1]).unwrap();
        let piece1 = piece0.mirrored(3);
        HeapModel::new(3, piece0, piece1).unwrap()
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn piece(&self, symbol: u8) -> &Piece {
        &self.pieces[symbol as usize]
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: HeapModelConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.into_model()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }
}

/// File form of a [`HeapModel`]; contours are numbers or `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeapModelConfig {
    pub num_columns: usize,
    pub piece0: PieceConfig,
    pub piece1: PieceConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceConfig {
    pub columns: Vec<usize>,
    pub lower: Vec<Contour>,
    pub upper: Vec<Contour>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Contour {
    Int(i64),
    Text(String),
}

impl Contour {
    fn value(&self) -> Result<Rational64> {
        match self {
            Contour::Int(v) => Ok(Rational64::from_integer(*v)),
            Contour::Text(s) => {
                let r = crate::rational::parse_ratio(s)?;
                match (r.numer().to_i64(), r.denom().to_i64()) {
                    (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
                    _ => Err(Error::Config(format!("contour {s} overflows i64"))),
                }
            }
        }
    }
}

impl PieceConfig {
    fn into_piece(self) -> Result<Piece> {
        let conv = |v: Vec<Contour>| v.iter().map(Contour::value).collect::<Result<Vec<_>>>();
        Piece::new(self.columns, conv(self.lower)?, conv(self.upper)?)
    }
}

impl HeapModelConfig {
    pub fn into_model(self) -> Result<HeapModel> {
        HeapModel::new(
            self.num_columns,
            self.piece0.into_piece()?,
            self.piece1.into_piece()?,
        )
    }
}

/// Column heights of a heap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heights(pub Vec<Rational64>);

impl Heights {
    pub fn zero(num_columns: usize) -> Self {
        Heights(vec![Rational64::zero(); num_columns])
    }

    pub fn max(&self) -> Rational64 {
        self.0
            .iter()
            .copied()
            .max()
            .unwrap_or_else(Rational64::zero)
    }
}

/// Drops `piece` onto the heap.
pub fn drop(heights: &Heights, piece: &Piece) -> Heights {
    let mut next = heights.clone();
    drop_in_place(&mut next, piece);
    next
}

fn drop_in_place(heights: &mut Heights, piece: &Piece) {
    let landing = piece
        .cells()
        .map(|(c, l, _)| heights.0[c] - l)
        .max()
        .expect("pieces are nonempty");
    for (c, _, u) in piece.cells() {
        heights.0[c] = landing + u;
    }
}

/// Heights after dropping the pieces of `word` in order onto an empty board.
pub fn heap_profile(word: &Word, model: &HeapModel) -> Heights {
    let mut heights = Heights::zero(model.num_columns);
    for &b in word.bits() {
        drop_in_place(&mut heights, model.piece(b));
    }
    heights
}

/// `h(w)`: the maximum column height of the heap built by `word`.
pub fn heap_height(word: &Word, model: &HeapModel) -> Rational64 {
    heap_profile(word, model).max()
}

/// Square matrix over the (max, +) semiring; `None` is `-∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPlusMatrix {
    entries: Vec<Vec<Option<Rational64>>>,
}

impl MaxPlusMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| (i == j).then(Rational64::zero)).collect())
            .collect();
        MaxPlusMatrix { entries }
    }

    /// The drop of `piece` as `x -> M ⊗ x`.
    pub fn of_piece(piece: &Piece, num_columns: usize) -> Self {
        let mut m = Self::identity(num_columns);
        for (i, _, u) in piece.cells() {
            m.entries[i] = vec![None; num_columns];
            for (j, l, _) in piece.cells() {
                m.entries[i][j] = Some(u - l);
            }
        }
        m
    }

    /// Composed operator of a schedule: the last piece acts last.
    pub fn of_word(word: &Word, model: &HeapModel) -> Self {
        let mut m = Self::identity(model.num_columns);
        for &b in word.bits() {
            m = Self::of_piece(model.piece(b), model.num_columns).mul(&m);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Rational64> {
        self.entries[i][j]
    }

    /// `(self ⊗ rhs)[i][j] = max_k self[i][k] + rhs[k][j]`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .filter_map(|k| Some(self.entries[i][k]? + rhs.entries[k][j]?))
                            .max()
                    })
                    .collect()
            })
            .collect();
        MaxPlusMatrix { entries }
    }

    pub fn apply(&self, x: &Heights) -> Heights {
        Heights(
            self.entries
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&x.0)
                        .filter_map(|(a, &xj)| Some((*a)? + xj))
                        .max()
                        .expect("every row has a finite entry")
                })
                .collect(),
        )
    }

    /// Maximum cycle mean of the precedence graph (Karp), `None` if acyclic.
    ///
    /// `D_k(v)` is the heaviest walk of exactly `k` edges ending at `v`,
    /// started anywhere; then `λ = max_v min_k (D_n(v) - D_k(v)) / (n - k)`.
    pub fn max_cycle_mean(&self) -> Option<Rational64> {
        let n = self.dim();
        let mut walks: Vec<Vec<Option<Rational64>>> = vec![vec![Some(Rational64::zero()); n]];
        for k in 1..=n {
            let prev = &walks[k - 1];
            let next = (0..n)
                .map(|i| {
                    (0..n)
                        .filter_map(|j| Some(self.entries[i][j]? + prev[j]?))
                        .max()
                })
                .collect();
            walks.push(next);
        }
        (0..n)
            .filter_map(|v| {
                let last = walks[n][v]?;
                (0..n)
                    .filter_map(|k| {
                        let dk = walks[k][v]?;
                        Some((last - dk) / Rational64::from_integer((n - k) as i64))
                    })
                    .min()
            })
            .max()
    }
}

/// Growth per piece of the periodic schedule `w^∞`.
pub fn cycle_rate(word: &Word, model: &HeapModel) -> Result<Rational64> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let lambda = MaxPlusMatrix::of_word(word, model)
        .max_cycle_mean()
        .expect("every column carries a cycle");
    Ok(lambda / Rational64::from_integer(word.len() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveMinimum {
    pub n: usize,
    /// `min_w h(w) / n` over `{0,1}^n`.
    pub min_rate: Rational64,
    pub argmin: Vec<Word>,
}

impl ExhaustiveMinimum {
    pub fn contains_balanced(&self) -> bool {
        self.argmin.iter().any(crate::words::is_balanced)
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::ExhaustiveBound {
            what: "n (use best_balanced_schedule for longer schedules)",
            value: n,
            limit: bound,
        });
    }
    Ok(())
}

/// Minimum of `h(w)/n` over all `2^n` words with the full argmin set.
pub fn min_rate_exhaustive(model: &HeapModel, n: usize) -> Result<ExhaustiveMinimum> {
    min_rate_exhaustive_bounded(model, n, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn min_rate_exhaustive_bounded(
    model: &HeapModel,
    n: usize,
    bound: usize,
) -> Result<ExhaustiveMinimum> {
    if n == 0 {
        return Err(Error::out_of_range("n", "must be at least 1"));
    }
    check_bound(n, bound)?;
    // split on the first few symbols, depth-first below
    let split = n.min(6);
    let (min_height, argmin) = (0u64..1 << split)
        .into_par_iter()
        .map(|head| {
            let prefix = Word::from_mask(head, split);
            let heights = heap_profile(&prefix, model);
            let mut best = (None, Vec::new());
            let mut path = prefix.bits().to_vec();
            dfs_min(model, &heights, n, &mut path, &mut best);
            best
        })
        .reduce(|| (None, Vec::new()), merge_min);
    let min_height = min_height.expect("at least one word");
    let mut argmin = argmin;
    argmin.sort();
    Ok(ExhaustiveMinimum {
        n,
        min_rate: min_height / Rational64::from_integer(n as i64),
        argmin,
    })
}

type Best = (Option<Rational64>, Vec<Word>);

fn merge_min(a: Best, b: Best) -> Best {
    match (a.0, b.0) {
        (None, _) => b,
        (_, None) => a,
        (Some(x), Some(y)) if x < y => a,
        (Some(x), Some(y)) if y < x => b,
        (Some(x), _) => {
            let mut words = a.1;
            words.extend(b.1);
            (Some(x), words)
        }
    }
}

fn dfs_min(model: &HeapModel, heights: &Heights, n: usize, path: &mut Vec<u8>, best: &mut Best) {
    let current = heights.max();
    if let Some(b) = best.0 {
        // heights never decrease
        if current > b {
            return;
        }
    }
    if path.len() == n {
        match best.0 {
            Some(b) if current > b => {}
            Some(b) if current == b => best.1.push(Word::new(path.clone()).unwrap()),
            _ => *best = (Some(current), vec![Word::new(path.clone()).unwrap()]),
        }
        return;
    }
    for bit in 0..2u8 {
        let next = drop(heights, model.piece(bit));
        path.push(bit);
        dfs_min(model, &next, n, path, best);
        path.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicMinimum {
    pub n: usize,
    /// `min cycle_rate(v)` over all `v` of length `n`.
    pub min_rate: Rational64,
    /// Necklace representatives attaining it.
    pub argmin: Vec<Word>,
}

/// Best periodic schedule with period exactly `n` (necklace scan).
pub fn min_cycle_rate_exhaustive(model: &HeapModel, n: usize) -> Result<PeriodicMinimum> {
    if n == 0 {
        return Err(Error::out_of_range("n", "must be at least 1"));
    }
    check_bound(n, DEFAULT_EXHAUSTIVE_BOUND)?;
    let rated: Vec<(Word, Rational64)> = enumerate_necklaces(n)?
        .par_iter()
        .map(|o| {
            let rep = o.representative().clone();
            let rate = cycle_rate(&rep, model)?;
            Ok((rep, rate))
        })
        .collect::<Result<_>>()?;
    let min_rate = rated.iter().map(|(_, r)| *r).min().expect("nonempty");
    let argmin = rated
        .into_iter()
        .filter(|(_, r)| *r == min_rate)
        .map(|(w, _)| w)
        .collect();
    Ok(PeriodicMinimum {
        n,
        min_rate,
        argmin,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedSchedule {
    pub p: usize,
    pub q: usize,
    pub word: Word,
    pub rate: Rational64,
}

/// The balanced necklace of ratio `p/q`; `0/1` is `0` and `1/1` is `1`.
fn balanced_word(p: usize, q: usize) -> Result<Word> {
    match (p, q) {
        (0, 1) => Ok(Word::zeros(1)),
        (1, 1) => Ok(Word::ones(1)),
        _ => Ok(balanced_orbit(p, q)?.representative().clone()),
    }
}

/// Minimizes `cycle_rate` over the balanced necklaces of every ratio `p/q`
/// with `q <= q_max`; ties go to the smaller `q`, then the smaller `p`.
pub fn best_balanced_schedule(model: &HeapModel, q_max: usize) -> Result<BalancedSchedule> {
    if q_max == 0 {
        return Err(Error::out_of_range("q_max", "must be at least 1"));
    }
    let mut best: Option<BalancedSchedule> = None;
    for q in 1..=q_max {
        for p in 0..=q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let word = balanced_word(p, q)?;
            let rate = cycle_rate(&word, model)?;
            if best.as_ref().is_none_or(|b| rate < b.rate) {
                best = Some(BalancedSchedule { p, q, word, rate });
            }
        }
    }
    Ok(best.expect("q_max >= 1 yields candidates"))
}

#[derive(Clone, Debug, Serialize)]
pub struct HeapScanRow {
    pub n: usize,
    pub min_rate: String,
    pub argmin_words: String,
    pub balanced_flag: bool,
    pub best_periodic_rate: String,
}

/// Scan rows for `n = 1..=n_max`.
pub fn scan(model: &HeapModel, n_max: usize) -> Result<Vec<HeapScanRow>> {
    (1..=n_max)
        .map(|n| {
            let finite = min_rate_exhaustive(model, n)?;
            let periodic = min_cycle_rate_exhaustive(model, n)?;
            Ok(HeapScanRow {
                n,
                min_rate: finite.min_rate.to_string(),
                argmin_words: finite
                    .argmin
                    .iter()
                    .map(Word::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                balanced_flag: finite.contains_balanced(),
                best_periodic_rate: periodic.min_rate.to_string(),
            })
        })
        .collect()
}

/// Outcome of comparing the best balanced schedule with exhaustive periodic
/// minima at periods that are multiples of its `q`.
#[derive(Clone, Debug)]
pub struct ScheduleCertificate {
    pub schedule: BalancedSchedule,
    /// `(n, exhaustive periodic minimum)` for every compatible `n <= n_max`.
    pub periodic_minima: Vec<(usize, Rational64)>,
    /// `(n, min_w h(w)/n)` for every `n <= n_max`.
    pub finite_minima: Vec<(usize, Rational64)>,
}

impl ScheduleCertificate {
    /// The balanced rate equals every compatible periodic minimum and
    /// lower-bounds every finite-horizon minimum.
    pub fn certified(&self) -> bool {
        self.periodic_minima
            .iter()
            .all(|(_, r)| *r == self.schedule.rate)
            && self
                .finite_minima
                .iter()
                .all(|(_, r)| *r >= self.schedule.rate)
    }

    /// Largest `|balanced rate - periodic minimum|` as a float.
    pub fn max_gap(&self) -> f64 {
        self.periodic_minima
            .iter()
            .map(|(_, r)| (*r - self.schedule.rate).to_f64().unwrap_or(f64::NAN).abs())
            .fold(0.0, f64::max)
    }

    /// No compatible `n` fit under the bound: the optimum may be Sturmian or
    /// of longer period, reported but not certified.
    pub fn inconclusive(&self) -> bool {
        self.periodic_minima.is_empty()
    }
}

pub fn certify_balanced_schedule(
    model: &HeapModel,
    q_max: usize,
    n_max: usize,
) -> Result<ScheduleCertificate> {
    let schedule = best_balanced_schedule(model, q_max)?;
    let periodic_minima = (1..=n_max)
        .filter(|n| n % schedule.q == 0)
        .map(|n| Ok((n, min_cycle_rate_exhaustive(model, n)?.min_rate)))
        .collect::<Result<_>>()?;
    let finite_minima = (1..=n_max)
        .map(|n| Ok((n, min_rate_exhaustive(model, n)?.min_rate)))
        .collect::<Result<_>>()?;
    Ok(ScheduleCertificate {
        schedule,
        periodic_minima,
        finite_minima,
    })
}

/// Some argmin necklace is balanced as a cyclic word.
pub fn argmin_necklaces_balanced(min: &PeriodicMinimum) -> bool {
    min.argmin.iter().any(is_cyclically_balanced)
}
