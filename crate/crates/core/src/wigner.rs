//! Ground states of the one-dimensional Wigner lattice on a ring.
//!
//! `p` electrons sit on `q` sites; the energy is
//! `E = 1/2 sum_{i != j} V(d(i, j))` over ordered pairs of distinct
//! electrons. For convex decreasing `V` vanishing at infinity the minimizing
//! configurations are expected to be balanced words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::format_ratio;
use crate::words::{enumerate_orbits, is_cyclically_balanced, Orbit, Word};

/// Largest ring size for exhaustive ground states.
pub const MAX_RING: usize = 20;

/// Relative margin for comparing inexact energies.
pub const ENERGY_MARGIN: f64 = 1e-12;

/// Pair potential `V(r)`, `r > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Potential {
    /// `1 / r`
    Coulomb,
    /// `r^{-s}`
    Power { s: f64 },
    /// `e^{-lambda r}`
    Exponential { lambda: f64 },
    /// `e^{-lambda r} / r`
    Screened { lambda: f64 },
    /// `r^s` for `0 < s <= 1`: concave and increasing, so it favours
    /// clustering. Not a physical potential.
    AntiPower { s: f64 },
}

/// A potential value, exact when the potential is rational at integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Energy {
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl Energy {
    pub fn zero() -> Self {
        Energy {
            exact: Some(BigRational::zero()),
            approx: 0.0,
        }
    }

    fn exact(r: BigRational) -> Self {
        let approx = r.to_f64().unwrap_or(f64::NAN);
        Energy {
            exact: Some(r),
            approx,
        }
    }

    fn float(x: f64) -> Self {
        Energy {
            exact: None,
            approx: x,
        }
    }

    /// `sum_k weights[k] * values[k]`.
    fn combine(weights: &[u64], values: &[Energy]) -> Self {
        let exact = values
            .iter()
            .zip(weights)
            .try_fold(BigRational::zero(), |acc, (v, &w)| {
                v.exact
                    .as_ref()
                    .map(|e| acc + e * BigRational::from_integer(BigInt::from(w)))
            });
        match exact {
            Some(e) => Energy::exact(e),
            None => Energy::float(
                values
                    .iter()
                    .zip(weights)
                    .map(|(v, &w)| v.approx * w as f64)
                    .sum(),
            ),
        }
    }

    fn halve(self) -> Self {
        match self.exact {
            Some(e) => Energy::exact(e / BigRational::from_integer(BigInt::from(2))),
            None => Energy::float(self.approx / 2.0),
        }
    }

    /// Exact order when both are exact, otherwise equal within
    /// [`ENERGY_MARGIN`].
    pub fn compare(&self, other: &Energy) -> Ordering {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a.cmp(b);
        }
        let (a, b) = (self.approx, other.approx);
        if (a - b).abs() <= ENERGY_MARGIN * (1.0 + a.abs().max(b.abs())) {
            Ordering::Equal
        } else {
            a.total_cmp(&b)
        }
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(e) => write!(f, "{}", format_ratio(e)),
            None => write!(f, "{:.15e}", self.approx),
        }
    }
}

impl Potential {
    /// Coulomb, `r^{-3}` and `e^{-r}`.
    pub fn default_family() -> [Potential; 3] {
        [
            Potential::Coulomb,
            Potential::Power { s: 3.0 },
            Potential::Exponential { lambda: 1.0 },
        ]
    }

    /// `r^{1/2}`, for checking that balance is not automatic.
    pub fn anti_fixture() -> Potential {
        Potential::AntiPower { s: 0.5 }
    }

    pub fn name(&self) -> String {
        match self {
            Potential::Coulomb => "coulomb".into(),
            Potential::Power { s } => format!("power:{s}"),
            Potential::Exponential { lambda } => format!("exp:{lambda}"),
            Potential::Screened { lambda } => format!("screened:{lambda}"),
            Potential::AntiPower { s } => format!("anti-power:{s}"),
        }
    }

    fn check_params(&self) -> Result<()> {
        let (name, v, ok) = match *self {
            Potential::Coulomb => return Ok(()),
            Potential::Power { s } => ("s", s, s > 0.0),
            Potential::Exponential { lambda } | Potential::Screened { lambda } => {
                ("lambda", lambda, lambda > 0.0)
            }
            Potential::AntiPower { s } => ("s", s, s > 0.0 && s <= 1.0),
        };
        if !(v.is_finite() && ok) {
            return Err(Error::out_of_range(
                name,
                format!("{v} invalid for {}", self.name()),
            ));
        }
        Ok(())
    }

    /// `V(r)` for a positive integer distance.
    pub fn value(&self, r: u64) -> Result<Energy> {
        self.check_params()?;
        if r == 0 {
            return Err(Error::out_of_range(
                "r",
                "potential undefined at distance 0",
            ));
        }
        let rf = r as f64;
        Ok(match *self {
            Potential::Coulomb => Energy::exact(BigRational::new(BigInt::one(), BigInt::from(r))),
            Potential::Power { s } if s.fract() == 0.0 && s <= 64.0 => {
                let den = num_traits::pow(BigInt::from(r), s as usize);
                Energy::exact(BigRational::new(BigInt::one(), den))
            }
            Potential::Power { s } => Energy::float(rf.powf(-s)),
            Potential::Exponential { lambda } => Energy::float((-lambda * rf).exp()),
            Potential::Screened { lambda } => Energy::float((-lambda * rf).exp() / rf),
            Potential::AntiPower { s } if s == 1.0 => {
                Energy::exact(BigRational::from_integer(BigInt::from(r)))
            }
            Potential::AntiPower { s } => Energy::float(rf.powf(s)),
        })
    }

    fn value_f64(&self, r: f64) -> f64 {
        match *self {
            Potential::Coulomb => 1.0 / r,
            Potential::Power { s } => r.powf(-s),
            Potential::Exponential { lambda } => (-lambda * r).exp(),
            Potential::Screened { lambda } => (-lambda * r).exp() / r,
            Potential::AntiPower { s } => r.powf(s),
        }
    }

    /// Discrete convexity and monotone decrease on `1..=grid`, and decay
    /// at the far end.
    pub fn validate(&self, grid: u64) -> Result<()> {
        self.check_params()?;
        let v: Vec<f64> = (1..=grid.max(3))
            .map(|r| self.value_f64(r as f64))
            .collect();
        for r in 1..v.len() {
            if v[r] > v[r - 1] {
                return Err(Error::InvalidModel(format!(
                    "{} increases at r = {}",
                    self.name(),
                    r + 1
                )));
            }
        }
        for r in 1..v.len() - 1 {
            if v[r - 1] + v[r + 1] < 2.0 * v[r] * (1.0 - 1e-14) {
                return Err(Error::InvalidModel(format!(
                    "{} is not convex at r = {}",
                    self.name(),
                    r + 1
                )));
            }
        }
        if v[v.len() - 1] > 0.01 * v[0] {
            return Err(Error::InvalidModel(format!(
                "{} does not decay on 1..={grid}",
                self.name()
            )));
        }
        Ok(())
    }

    pub fn is_physical(&self) -> bool {
        self.validate(1000).is_ok()
    }

    /// `sum_{n > start} V(n)` bounded by an integral, for summable power
    /// and exponential tails.
    fn tail_bound(&self, start: f64) -> Result<f64> {
        Ok(match *self {
            Potential::Power { s } if s > 1.0 => start.powf(1.0 - s) / (s - 1.0),
            Potential::Exponential { lambda } | Potential::Screened { lambda } => {
                (-lambda * start).exp() / lambda
            }
            _ => {
                return Err(Error::InvalidModel(format!(
                    "periodic images need a summable potential, {} is not",
                    self.name()
                )))
            }
        })
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// `coulomb`, `power:S`, `exp:L`, `screened:L`, `anti-power:S`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, param) = s.split_once(':').unwrap_or((s, ""));
        let num = || -> Result<f64> {
            param
                .parse()
                .map_err(|_| Error::Config(format!("potential {s:?} needs a numeric parameter")))
        };
        let p = match kind {
            "coulomb" => Potential::Coulomb,
            "power" => Potential::Power { s: num()? },
            "exp" | "exponential" => Potential::Exponential { lambda: num()? },
            "screened" => Potential::Screened { lambda: num()? },
            "anti-power" => Potential::AntiPower { s: num()? },
            _ => return Err(Error::Config(format!("unknown potential {s:?}"))),
        };
        p.check_params()?;
        Ok(p)
    }
}

/// How pair distances are measured on the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum DistanceMode {
    /// `min(|i - j|, q - |i - j|)`.
    #[default]
    Ring,
    /// `sum_{|k| <= images} V(|i - j + k q|)`, plus a tail bound.
    Images { images: u32 },
}

/// Ordered-pair counts by ring distance, `hist[d]` for `d = 1..=q/2`.
fn distance_histogram(occupancy: &Word) -> Vec<u64> {
    let q = occupancy.len();
    let sites: Vec<usize> = (0..q).filter(|&i| occupancy.bits()[i] == 1).collect();
    let mut hist = vec![0u64; q / 2 + 1];
    for (a, &i) in sites.iter().enumerate() {
        for &j in &sites[a + 1..] {
            let d = (j - i).min(q - (j - i));
            hist[d] += 2;
        }
    }
    hist
}

/// Ring energy under the nearest-image distance.
pub fn ring_energy(occupancy: &Word, v: &Potential) -> Result<Energy> {
    if occupancy.one_length() < 2 {
        return Ok(Energy::zero());
    }
    let hist = distance_histogram(occupancy);
    let values = (0..hist.len())
        .map(|d| {
            if d == 0 {
                Ok(Energy::zero())
            } else {
                v.value(d as u64)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Energy::combine(&hist, &values).halve())
}

/// Energy summed over periodic images, with a bound on the omitted tail.
pub fn ring_energy_images(occupancy: &Word, v: &Potential, images: u32) -> Result<(f64, f64)> {
    let q = occupancy.len() as i64;
    let p = occupancy.one_length() as f64;
    let start = (images as i64 * q) as f64;
    // each ordered pair omits two tails beyond |k| > images
    let tail = p * (p - 1.0) * v.tail_bound(start.max(1.0))?;
    let sites: Vec<i64> = (0..q)
        .filter(|&i| occupancy.bits()[i as usize] == 1)
        .collect();
    let mut total = 0.0;
    for &i in &sites {
        for &j in &sites {
            if i == j {
                continue;
            }
            for k in -(images as i64)..=images as i64 {
                let d = (i - j + k * q).unsigned_abs();
                if d > 0 {
                    total += v.value_f64(d as f64);
                }
            }
        }
    }
    Ok((total / 2.0, tail))
}

fn energy_with_mode(occupancy: &Word, v: &Potential, mode: DistanceMode) -> Result<Energy> {
    match mode {
        DistanceMode::Ring => ring_energy(occupancy, v),
        DistanceMode::Images { images } => {
            ring_energy_images(occupancy, v, images).map(|(e, _)| Energy::float(e))
        }
    }
}

/// CSV row: one orbit of a ground-state scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerRow {
    pub representative: Word,
    pub energy: String,
    pub energy_f64: f64,
    pub is_balanced: bool,
    pub is_argmin: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    pub p: usize,
    pub q: usize,
    pub potential: Potential,
    pub min_energy: Energy,
    pub argmin: Vec<Orbit>,
    /// Every argmin orbit is balanced.
    pub balanced: bool,
    pub unique: bool,
    pub rows: Vec<WignerRow>,
}

/// Exhaustive minimum of the ring energy over rotation classes of `W_{p,q}`.
pub fn ground_state(p: usize, q: usize, v: &Potential) -> Result<GroundState> {
    ground_state_with_mode(p, q, v, DistanceMode::Ring)
}

pub fn ground_state_with_mode(
    p: usize,
    q: usize,
    v: &Potential,
    mode: DistanceMode,
) -> Result<GroundState> {
    if q > MAX_RING {
        return Err(Error::ExhaustiveBound {
            what: "q",
            value: q,
            limit: MAX_RING,
        });
    }
    let orbits = enumerate_orbits(p, q)?;
    let energies = orbits
        .par_iter()
        .map(|o| energy_with_mode(o.representative(), v, mode))
        .collect::<Result<Vec<_>>>()?;
    let min = energies
        .iter()
        .min_by(|a, b| a.compare(b))
        .expect("W_{p,q} is nonempty")
        .clone();
    let mut argmin = Vec::new();
    let mut rows = Vec::with_capacity(orbits.len());
    for (o, e) in orbits.iter().zip(&energies) {
        let is_argmin = e.compare(&min) == Ordering::Equal;
        let is_balanced = is_cyclically_balanced(o.representative());
        if is_argmin {
            argmin.push(o.clone());
        }
        rows.push(WignerRow {
            representative: o.representative().clone(),
            energy: e.to_string(),
            energy_f64: e.approx,
            is_balanced,
            is_argmin,
        });
    }
    let balanced = argmin.iter().all(|o| o.is_balanced());
    Ok(GroundState {
        p,
        q,
        potential: *v,
        min_energy: min,
        unique: argmin.len() == 1,
        argmin,
        balanced,
        rows,
    })
}
