//! Binary values of words and their products over all rotations.
//!
//! `B(w)` multiplies `b` over every cyclic shift of `w`, the word itself
//! included. Among the orbits of `W_{p,q}` with `p`, `q` coprime the balanced
//! one maximizes `B`; [`verify_product_maximizer`] checks that exhaustively.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{balanced_orbit, enumerate_orbits, Orbit, Word};

/// `b(w) = sum_k w_k 2^(m-k)`, the big-endian binary value.
pub fn binary_value(word: &Word) -> BigUint {
    word.bits()
        .iter()
        .fold(BigUint::zero(), |acc, &b| (acc << 1usize) + b as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitProductReport {
    pub orbit: Orbit,
    /// `b` of each rotation `w^(1) = w, w^(2), ..., w^(m)` of the input word.
    #[serde(serialize_with = "ser_biguints")]
    pub factors: Vec<BigUint>,
    #[serde(serialize_with = "ser_biguint")]
    pub product: BigUint,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_biguints<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `B(w)`: product of `b` over all `m` rotations.
pub fn orbit_product(word: &Word) -> Result<OrbitProductReport> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let factors: Vec<BigUint> = word.rotations().map(|r| binary_value(&r)).collect();
    let product = factors.iter().fold(BigUint::one(), |acc, f| acc * f);
    Ok(OrbitProductReport {
        orbit: Orbit::of(word),
        factors,
        product,
    })
}

/// One row per orbit of `W_{p,q}`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitProductRow {
    pub representative: Word,
    pub factors: String,
    pub product: String,
    pub is_balanced: bool,
    pub is_argmax: bool,
}

#[derive(Clone, Debug)]
pub struct ProductMaximizerReport {
    pub p: usize,
    pub q: usize,
    pub reports: Vec<OrbitProductReport>,
    pub argmax: Vec<Orbit>,
    pub max_product: BigUint,
    pub balanced: Orbit,
}

impl ProductMaximizerReport {
    /// The maximizer is unique and it is the balanced orbit.
    pub fn passed(&self) -> bool {
        self.argmax.len() == 1 && self.argmax[0] == self.balanced
    }

    pub fn rows(&self) -> Vec<OrbitProductRow> {
        self.reports
            .iter()
            .map(|r| OrbitProductRow {
                representative: r.orbit.representative().clone(),
                factors: r
                    .factors
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                product: r.product.to_string(),
                is_balanced: r.orbit == self.balanced,
                is_argmax: self.argmax.contains(&r.orbit),
            })
            .collect()
    }
}

/// Computes `B` on every orbit of `W_{p,q}` and compares the maximizers with
/// the balanced orbit.
pub fn verify_product_maximizer(p: usize, q: usize) -> Result<ProductMaximizerReport> {
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
    let balanced = balanced_orbit(p, q)?;
    let reports: Vec<OrbitProductReport> = enumerate_orbits(p, q)?
        .par_iter()
        .map(|o| orbit_product(o.representative()))
        .collect::<Result<_>>()?;
    let max_product = reports
        .iter()
        .map(|r| &r.product)
        .max()
        .cloned()
        .unwrap_or_default();
    let argmax = reports
        .iter()
        .filter(|r| r.product == max_product)
        .map(|r| r.orbit.clone())
        .collect();
    Ok(ProductMaximizerReport {
        p,
        q,
        reports,
        argmax,
        max_product,
        balanced,
    })
}
