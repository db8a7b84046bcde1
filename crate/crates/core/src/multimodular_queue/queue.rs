use std::collections::VecDeque;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::window::SymbolSource;
use crate::error::{Error, Result};
use crate::rational::{parse_ratio, to_f64};
use crate::words::{MechanicalSpec, Word};

/// Which customers are sent to the server.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdmissionSource {
    Mechanical {
        gamma: String,
        #[serde(default)]
        delta: Option<String>,
    },
    /// Repeated periodically.
    Word { word: Word },
}

impl AdmissionSource {
    pub fn mechanical(gamma: &str) -> Self {
        AdmissionSource::Mechanical {
            gamma: gamma.to_string(),
            delta: None,
        }
    }

    pub fn to_symbols(&self) -> Result<SymbolSource> {
        match self {
            AdmissionSource::Mechanical { gamma, delta } => {
                let g = parse_ratio(gamma)?;
                let d = match delta {
                    Some(d) => parse_ratio(d)?,
                    None => num_traits::Zero::zero(),
                };
                Ok(SymbolSource::Mechanical(MechanicalSpec::new(g, d)?))
            }
            AdmissionSource::Word { word } => {
                if word.is_empty() {
                    return Err(Error::EmptyWord);
                }
                Ok(SymbolSource::Periodic(word.clone()))
            }
        }
    }

    /// Nominal admission ratio.
    pub fn gamma(&self) -> Result<f64> {
        match self {
            AdmissionSource::Mechanical { gamma, .. } => Ok(to_f64(&parse_ratio(gamma)?)),
            AdmissionSource::Word { word } => Ok(to_f64(&word.one_ratio()?)),
        }
    }
}

/// Single FIFO server with deterministic service and exponential
/// interarrival times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueueConfig {
    /// Mean time between consecutive arrivals.
    #[serde(alias = "arrival_rate")]
    pub mean_interarrival: f64,
    pub service_time: f64,
    /// Number of arriving customers.
    pub horizon: usize,
    pub seed: u64,
    pub admission: AdmissionSource,
}

impl QueueConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mean_interarrival.is_finite() && self.mean_interarrival > 0.0) {
            return Err(Error::out_of_range(
                "mean_interarrival",
                format!("{} is not positive", self.mean_interarrival),
            ));
        }
        if !(self.service_time.is_finite() && self.service_time > 0.0) {
            return Err(Error::out_of_range(
                "service_time",
                format!("{} is not positive", self.service_time),
            ));
        }
        if self.horizon == 0 {
            return Err(Error::out_of_range("horizon", "must be at least 1"));
        }
        self.admission.to_symbols().map(|_| ())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: QueueConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// One simulation run; also the CSV row layout.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueueSummary {
    pub seed: u64,
    pub gamma: f64,
    pub horizon: usize,
    /// Average over all customers of `N_k + x_k`, rejected ones counting 0.
    pub mean_cost: f64,
    pub max_queue: usize,
    pub admitted_fraction: f64,
}

/// Run the queue with an explicit admission sequence. Arrival times depend
/// only on `seed`, so runs with different admissions share them.
pub fn simulate_admission(
    mean_interarrival: f64,
    service_time: f64,
    seed: u64,
    admission: &[u8],
) -> Result<QueueSummary> {
    if admission.is_empty() {
        return Err(Error::EmptyWord);
    }
    let exp = Exp::new(1.0 / mean_interarrival)
        .map_err(|e| Error::out_of_range("mean_interarrival", e.to_string()))?;
    if !(service_time.is_finite() && service_time > 0.0) {
        return Err(Error::out_of_range(
            "service_time",
            format!("{service_time} is not positive"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clock = 0.0f64;
    let mut departures: VecDeque<f64> = VecDeque::new();
    let mut last_departure = 0.0f64;
    let mut total_cost = 0u64;
    let mut max_queue = 0usize;
    let mut admitted = 0usize;
    for &x in admission {
        clock += rng.sample(exp);
        while departures.front().is_some_and(|&d| d <= clock) {
            departures.pop_front();
        }
        if x == 1 {
            last_departure = last_departure.max(clock) + service_time;
            departures.push_back(last_departure);
            admitted += 1;
            let cost = departures.len();
            total_cost += cost as u64;
            max_queue = max_queue.max(cost);
        }
    }
    let horizon = admission.len();
    Ok(QueueSummary {
        seed,
        gamma: admitted as f64 / horizon as f64,
        horizon,
        mean_cost: total_cost as f64 / horizon as f64,
        max_queue,
        admitted_fraction: admitted as f64 / horizon as f64,
    })
}

/// Run the configured queue.
pub fn simulate_queue(cfg: &QueueConfig) -> Result<QueueSummary> {
    cfg.validate()?;
    let admission = cfg.admission.to_symbols()?.take(cfg.horizon)?;
    let mut summary = simulate_admission(
        cfg.mean_interarrival,
        cfg.service_time,
        cfg.seed,
        admission.bits(),
    )?;
    summary.gamma = cfg.admission.gamma()?;
    Ok(summary)
}

/// A uniformly random 0-1 sequence of length `horizon` with `ones` ones.
pub fn random_admission(horizon: usize, ones: usize, rng: &mut impl Rng) -> Result<Word> {
    if ones > horizon {
        return Err(Error::out_of_range(
            "ones",
            format!("{ones} > horizon {horizon}"),
        ));
    }
    let mut bits = vec![0u8; horizon];
    for i in rand::seq::index::sample(rng, horizon, ones) {
        bits[i] = 1;
    }
    Word::new(bits)
}

/// The configured admission against random sequences with the same count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompetitionReport {
    pub reference: QueueSummary,
    pub competitors: Vec<QueueSummary>,
    /// Reference mean cost at most every competitor's.
    pub dominated: bool,
}

impl CompetitionReport {
    pub fn best_competitor_cost(&self) -> f64 {
        self.competitors
            .iter()
            .map(|c| c.mean_cost)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Compare the configured admission with `competitors` random sequences of
/// the same 1-count on the same arrival times. Competitor `i` draws its
/// positions from seed `competitor_seed + i`.
pub fn queue_competition(
    cfg: &QueueConfig,
    competitors: usize,
    competitor_seed: u64,
) -> Result<CompetitionReport> {
    let reference = simulate_queue(cfg)?;
    let ones = cfg.admission.to_symbols()?.take(cfg.horizon)?.one_length();
    let competitors = (0..competitors as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(competitor_seed.wrapping_add(i));
            let word = random_admission(cfg.horizon, ones, &mut rng)?;
            simulate_admission(
                cfg.mean_interarrival,
                cfg.service_time,
                cfg.seed,
                word.bits(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let dominated = competitors
        .iter()
        .all(|c| reference.mean_cost <= c.mean_cost);
    Ok(CompetitionReport {
        reference,
        competitors,
        dominated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    fn config(admission: AdmissionSource) -> QueueConfig {
        QueueConfig {
            mean_interarrival: 1.0,
            service_time: 2.0,
            horizon: 5000,
            seed: 11,
            admission,
        }
    }

    #[test]
    fn all_zeros_and_all_ones() {
        let s = simulate_queue(&config(AdmissionSource::Word { word: w("0") })).unwrap();
        assert_eq!(s.mean_cost, 0.0);
        assert_eq!(s.admitted_fraction, 0.0);
        let mut cfg = config(AdmissionSource::Word { word: w("1") });
        cfg.service_time = 1e-6;
        let s = simulate_queue(&cfg).unwrap();
        assert_eq!(s.admitted_fraction, 1.0);
        assert_eq!(s.max_queue, 1);
    }

    #[test]
    fn reproducible() {
        let cfg = config(AdmissionSource::mechanical("1/3"));
        assert_eq!(simulate_queue(&cfg).unwrap(), simulate_queue(&cfg).unwrap());
    }

    #[test]
    fn admitted_fraction_tracks_gamma() {
        for (g, v) in [("1/3", 1.0 / 3.0), ("2/7", 2.0 / 7.0), ("0.45", 0.45)] {
            let s = simulate_queue(&config(AdmissionSource::mechanical(g))).unwrap();
            assert!((s.admitted_fraction - v).abs() <= 1.0 / 5000.0);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = config(AdmissionSource::mechanical("1/3"));
        cfg.mean_interarrival = 0.0;
        assert!(simulate_queue(&cfg).is_err());
        cfg.mean_interarrival = 1.0;
        cfg.service_time = -1.0;
        assert!(simulate_queue(&cfg).is_err());
        cfg.service_time = 1.0;
        cfg.horizon = 0;
        assert!(simulate_queue(&cfg).is_err());
        assert!(simulate_queue(&config(AdmissionSource::mechanical("3/2"))).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            arrival_rate = 1.0
            service_time = 2.0
            horizon = 1000
            seed = 3
            [admission]
            kind = "mechanical"
            gamma = "1/3"
        "#;
        let cfg = QueueConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.admission, AdmissionSource::mechanical("1/3"));
        let text = "mean_interarrival = 1.0\nservice_time = 2.0\nhorizon = 10\nseed = 0\n[admission]\nkind = \"word\"\nword = \"011\"\n";
        let cfg = QueueConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.admission, AdmissionSource::Word { word: w("011") });
        assert!(QueueConfig::from_toml_str("service_time = 1.0").is_err());
    }

    #[test]
    fn random_admission_has_requested_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let word = random_admission(100, 37, &mut rng).unwrap();
        assert_eq!(word.one_length(), 37);
        assert!(random_admission(3, 4, &mut rng).is_err());
    }

    #[test]
    fn mechanical_beats_random_on_a_short_horizon() {
        let report =
            queue_competition(&config(AdmissionSource::mechanical("1/3")), 10, 100).unwrap();
        assert!(
            report.dominated,
            "{} vs {}",
            report.reference.mean_cost,
            report.best_competitor_cost()
        );
    }
}
