use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

type Evaluator = dyn Fn(&[i64]) -> Option<f64> + Send + Sync;

/// A real function on `Z^m`, possibly undefined outside some region.
#[derive(Clone)]
pub struct LatticeFunction {
    name: String,
    arity: usize,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for LatticeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeFunction({}, m={})", self.name, self.arity)
    }
}

impl LatticeFunction {
    /// A partial function; `None` marks points where it is undefined.
    pub fn partial(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[i64]) -> Option<f64> + Send + Sync + 'static,
    ) -> Self {
        LatticeFunction {
            name: name.into(),
            arity,
            eval: Arc::new(f),
        }
    }

    pub fn total(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[i64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::partial(name, arity, move |u| Some(f(u)))
    }

    /// `c . u + b`.
    pub fn affine(coefficients: Vec<f64>, constant: f64) -> Self {
        let m = coefficients.len();
        Self::total("affine", m, move |u| {
            coefficients
                .iter()
                .zip(u)
                .map(|(c, &x)| c * x as f64)
                .sum::<f64>()
                + constant
        })
    }

    /// `phi(u_1 + ... + u_m)`.
    pub fn block_sum(
        name: impl Into<String>,
        arity: usize,
        phi: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::total(name, arity, move |u| phi(u.iter().sum()))
    }

    /// `sum over i <= j of phi(u_i + ... + u_j)`; multimodular for convex `phi`.
    pub fn consecutive_sums(
        name: impl Into<String>,
        arity: usize,
        phi: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::total(name, arity, move |u| {
            let mut total = 0.0;
            for i in 0..u.len() {
                let mut s = 0;
                for &x in &u[i..] {
                    s += x;
                    total += phi(s);
                }
            }
            total
        })
    }

    /// Tabulated on a box, undefined elsewhere.
    pub fn tabulated(
        name: impl Into<String>,
        domain: LatticeBox,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::out_of_range(
                "values",
                format!(
                    "{} values for a box of {} points",
                    values.len(),
                    domain.size()
                ),
            ));
        }
        let m = domain.dim();
        Ok(Self::partial(name, m, move |u| {
            domain.index_of(u).map(|i| values[i])
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, u: &[i64]) -> Option<f64> {
        if u.len() != self.arity {
            return None;
        }
        (self.eval)(u)
    }

    pub fn eval_checked(&self, u: &[i64]) -> Result<f64> {
        self.eval(u).ok_or_else(|| Error::UndefinedAt(u.to_vec()))
    }
}

/// Multimodular functions used as test fixtures, all built from convex
/// functions of consecutive partial sums.
pub fn multimodular_fixtures() -> Vec<LatticeFunction> {
    vec![
        LatticeFunction::block_sum("square-sum-3", 3, |s| (s * s) as f64),
        LatticeFunction::consecutive_sums("consecutive-squares-4", 4, |s| (s * s) as f64),
        LatticeFunction::block_sum("hinge-2", 2, |s| (s - 1).max(0) as f64),
        LatticeFunction::block_sum("exp-sum-3", 3, |s| (s as f64).exp()),
    ]
}

/// The basis `f_0, ..., f_m` of `Z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultimodularBasis {
    vectors: Vec<Vec<i64>>,
}

impl MultimodularBasis {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::out_of_range("m", "arity must be at least 1"));
        }
        let mut vectors = vec![vec![0i64; m]; m + 1];
        vectors[0][0] = -1;
        for i in 1..m {
            vectors[i][i - 1] = 1;
            vectors[i][i] = -1;
        }
        vectors[m][m - 1] = 1;
        Ok(MultimodularBasis { vectors })
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }
}

/// An inclusive integer box `lo <= u <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::out_of_range(
                "box",
                "corner dimensions differ or are zero",
            ));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::out_of_range(
                "box",
                format!("empty box {lo:?}..{hi:?}"),
            ));
        }
        Ok(LatticeBox { lo, hi })
    }

    /// `[lo, hi]^m`.
    pub fn cube(m: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo; m], vec![hi; m])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn size(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as usize)
            .product()
    }

    /// Point with the given mixed-radix index, first coordinate slowest.
    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let mut u = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            let width = (self.hi[i] - self.lo[i] + 1) as usize;
            u[i] = self.lo[i] + (index % width) as i64;
            index /= width;
        }
        u
    }

    pub fn index_of(&self, u: &[i64]) -> Option<usize> {
        if u.len() != self.dim() {
            return None;
        }
        let mut index = 0usize;
        for i in 0..self.dim() {
            if u[i] < self.lo[i] || u[i] > self.hi[i] {
                return None;
            }
            index = index * (self.hi[i] - self.lo[i] + 1) as usize + (u[i] - self.lo[i]) as usize;
        }
        Some(index)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.size()).map(|i| self.point(i))
    }
}

/// One failed instance of the multimodular inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub u: Vec<i64>,
    /// Indices into the basis.
    pub v: usize,
    pub w: usize,
    /// `J(u + v) + J(u + w)`.
    pub lhs: f64,
    /// `J(u) + J(u + v + w)`.
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultimodularVerdict {
    pub holds: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

fn add(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

/// Check the multimodular inequality at every `u` in the box and every pair
/// `v != w` of basis vectors. The function must be defined one basis step
/// outside the box.
pub fn check_multimodular(j: &LatticeFunction, domain: &LatticeBox) -> Result<MultimodularVerdict> {
    if domain.dim() != j.arity() {
        return Err(Error::out_of_range(
            "box",
            format!(
                "dimension {} for a function of arity {}",
                domain.dim(),
                j.arity()
            ),
        ));
    }
    let basis = MultimodularBasis::new(j.arity())?;
    let f = basis.vectors();
    let pairs: Vec<(usize, usize)> = (0..f.len())
        .flat_map(|a| (a + 1..f.len()).map(move |b| (a, b)))
        .collect();
    let per_point = (0..domain.size())
        .into_par_iter()
        .map(|i| {
            let u = domain.point(i);
            let ju = j.eval_checked(&u)?;
            let mut found = Vec::new();
            for &(a, b) in &pairs {
                let uv = add(&u, &f[a]);
                let uw = add(&u, &f[b]);
                let uvw = add(&uv, &f[b]);
                let lhs = j.eval_checked(&uv)? + j.eval_checked(&uw)?;
                let rhs = ju + j.eval_checked(&uvw)?;
                if lhs + 1e-12 * (1.0 + lhs.abs().max(rhs.abs())) < rhs {
                    found.push(Violation {
                        u: u.clone(),
                        v: a,
                        w: b,
                        lhs,
                        rhs,
                    });
                }
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<Violation> = per_point.into_iter().flatten().collect();
    Ok(MultimodularVerdict {
        holds: violations.is_empty(),
        checked: domain.size() * pairs.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent scan: every u in the box, every ordered v != w, spelled
    /// out without the shared helpers.
    fn naive_violations(j: impl Fn(i64, i64) -> f64, lo: i64, hi: i64) -> usize {
        let f = [(-1, 0), (1, -1), (0, 1)];
        let mut bad = 0;
        for x in lo..=hi {
            for y in lo..=hi {
                for a in 0..3 {
                    for b in a + 1..3 {
                        let (v, w) = (f[a], f[b]);
                        let lhs = j(x + v.0, y + v.1) + j(x + w.0, y + w.1);
                        let rhs = j(x, y) + j(x + v.0 + w.0, y + v.1 + w.1);
                        if lhs < rhs {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad
    }

    #[test]
    fn basis_sums_to_zero() {
        for m in 1..6 {
            let b = MultimodularBasis::new(m).unwrap();
            assert_eq!(b.vectors().len(), m + 1);
            let total = b.vectors().iter().fold(vec![0; m], |acc, v| add(&acc, v));
            assert!(total.iter().all(|&x| x == 0));
        }
        assert_eq!(
            MultimodularBasis::new(2).unwrap().vectors(),
            &[vec![-1, 0], vec![1, -1], vec![0, 1]]
        );
    }

    #[test]
    fn affine_always_holds() {
        let j = LatticeFunction::affine(vec![0.5, -2.0, 3.0], 1.0);
        let v = check_multimodular(&j, &LatticeBox::cube(3, -2, 2).unwrap()).unwrap();
        assert!(v.holds);
        assert_eq!(v.checked, 125 * 6);
    }

    #[test]
    fn negative_product_matches_scan() {
        let j = LatticeFunction::total("neg-product", 2, |u| -(u[0] * u[1]) as f64);
        let v = check_multimodular(&j, &LatticeBox::cube(2, 0, 2).unwrap()).unwrap();
        let oracle = naive_violations(|x, y| -(x * y) as f64, 0, 2);
        assert_eq!(v.violations.len(), oracle);
        // recorded verdict
        assert!(!v.holds);
        assert_eq!(oracle, 9);
    }

    #[test]
    fn maximum_matches_scan() {
        let j = LatticeFunction::total("max", 2, |u| u[0].max(u[1]) as f64);
        let v = check_multimodular(&j, &LatticeBox::cube(2, 0, 2).unwrap()).unwrap();
        let oracle = naive_violations(|x, y| x.max(y) as f64, 0, 2);
        assert_eq!(v.violations.len(), oracle);
        assert!(!v.holds);
        assert_eq!(oracle, 2);
    }

    #[test]
    fn fixtures_are_multimodular() {
        for j in multimodular_fixtures() {
            let v = check_multimodular(&j, &LatticeBox::cube(j.arity(), -1, 2).unwrap()).unwrap();
            assert!(v.holds, "{}: {:?}", j.name(), v.violations.first());
        }
    }

    #[test]
    fn undefined_points_are_reported() {
        let domain = LatticeBox::cube(2, 0, 1).unwrap();
        let j = LatticeFunction::tabulated("t", domain.clone(), vec![0.0; 4]).unwrap();
        match check_multimodular(&j, &domain) {
            Err(Error::UndefinedAt(p)) => assert!(p.iter().any(|&x| !(0..=1).contains(&x))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn box_indexing_round_trips() {
        let b = LatticeBox::new(vec![-1, 0, 2], vec![1, 3, 2]).unwrap();
        assert_eq!(b.size(), 12);
        for (i, p) in b.points().enumerate() {
            assert_eq!(b.index_of(&p), Some(i));
        }
        assert!(LatticeBox::new(vec![1], vec![0]).is_err());
    }
}
