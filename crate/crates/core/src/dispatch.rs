//! Verb dispatch for the command-line front end.
//!
//! A [`RunManifest`] names a verb, an optional action and flat `key = value`
//! parameters. [`dispatch`] runs it and returns a [`Table`] which
//! [`render`] turns into CSV or JSON. Nothing here touches the filesystem
//! except reading configs named in the parameters.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cyclic_products::{orbit_product, verify_product_maximizer};
use crate::error::Error;
use crate::heaps::{
    certify_balanced_schedule, cycle_rate, heap_height, scan as heap_scan, HeapModel,
};
use crate::jsr::{
    alpha_inverse, alpha_star_tau, jsr_bounds, scaled_pair, standard_matrices, MatrixNorm,
    RatioScanner,
};
use crate::multimodular_queue::{
    check_multimodular, multimodular_fixtures, queue_competition, simulate_queue,
    verify_mechanical_minimality, LatticeBox, LatticeFunction, QueueConfig,
};
use crate::precision::PrecisionContext;
use crate::rational::{format_ratio, parse_ratio};
use crate::sturmian_measures::{
    cosine_family, orbit_measure, phi_sample, sturmian_measure, tent_family, theta_experiment,
    verify_least_element, OrbitMeasure,
};
use crate::verify::{verify_all, DEFAULT_SEED};
use crate::wigner::{ground_state, Potential};
use crate::words::{
    balance_witness, enumerate_orbits, is_balanced, is_cyclically_balanced, mechanical_word,
    standard_words, ContinuedFraction, MechanicalSpec, Word,
};

pub const VERBS: [&str; 8] = [
    "words",
    "cyclic",
    "measures",
    "queue",
    "heaps",
    "jsr",
    "wigner",
    "verify-all",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = DispatchError;

    fn from_str(s: &str) -> Result<Self, DispatchError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(DispatchError::Usage(format!(
                "unknown format {s:?}, expected csv or json"
            ))),
        }
    }
}

/// Everything needed to replay a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub verb: String,
    #[serde(default)]
    pub action: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl RunManifest {
    /// `verb [action] [--key value | --key=value | --flag]...`; `--seed`,
    /// `--output` and `--format` fill the manifest fields.
    pub fn from_args(verb: &str, rest: &[String]) -> Result<Self, DispatchError> {
        let mut manifest = RunManifest {
            verb: verb.to_string(),
            ..Default::default()
        };
        let mut i = 0;
        if let Some(first) = rest.first() {
            if !first.starts_with("--") {
                manifest.action = Some(first.clone());
                i = 1;
            }
        }
        while i < rest.len() {
            let token = &rest[i];
            let key = token
                .strip_prefix("--")
                .ok_or_else(|| DispatchError::Usage(format!("unexpected argument {token:?}")))?;
            let (key, value) = match key.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => match rest.get(i + 1) {
                    Some(v) if !v.starts_with("--") => {
                        i += 1;
                        (key.to_string(), v.clone())
                    }
                    _ => (key.to_string(), "true".to_string()),
                },
            };
            i += 1;
            match key.as_str() {
                "seed" => manifest.seed = Some(parse_value("seed", &value)?),
                "output" => manifest.output_path = Some(PathBuf::from(value)),
                "format" => manifest.format = value.parse()?,
                _ => {
                    if manifest.parameters.insert(key.clone(), value).is_some() {
                        return Err(DispatchError::Usage(format!("--{key} given twice")));
                    }
                }
            }
        }
        Ok(manifest)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, DispatchError> {
        toml::from_str(text).map_err(|e| DispatchError::Usage(format!("manifest: {e}")))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("manifest fields are TOML-representable")
    }
}

#[derive(Debug)]
pub enum DispatchError {
    /// Bad verb, flags, config or parameter values.
    Usage(String),
    /// Bug or I/O failure.
    Internal(String),
}

impl DispatchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DispatchError::Usage(_) => 2,
            DispatchError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for DispatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispatchError::Usage(m) => write!(f, "usage error: {m}"),
            DispatchError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for DispatchError {}

impl From<Error> for DispatchError {
    fn from(e: Error) -> Self {
        match e {
            Error::BarycenterMismatch { .. } => DispatchError::Internal(e.to_string()),
            _ => DispatchError::Usage(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, DispatchError>;

fn parse_value<T: FromStr>(key: &str, value: &str) -> Outcome<T> {
    value
        .parse()
        .map_err(|_| DispatchError::Usage(format!("--{key}: cannot parse {value:?}")))
}

/// Parameter lookup that remembers which keys were read.
struct Params<'a> {
    map: &'a BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, String>) -> Self {
        Params {
            map,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.used.borrow_mut().insert(key.to_string());
        self.map.get(key).map(String::as_str)
    }

    fn opt<T: FromStr>(&self, key: &str) -> Outcome<Option<T>> {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Outcome<T> {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn req<T: FromStr>(&self, key: &str) -> Outcome<T> {
        self.opt(key)?
            .ok_or_else(|| DispatchError::Usage(format!("missing --{key}")))
    }

    fn ratio(&self, key: &str) -> Outcome<Option<BigRational>> {
        self.raw(key)
            .map(|v| parse_ratio(v).map_err(DispatchError::from))
            .transpose()
    }

    /// Error on any parameter nobody asked for.
    fn finish(&self) -> Outcome<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self.map.keys().filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(DispatchError::Usage(format!(
                "unknown parameters {unknown:?}"
            )))
        }
    }
}

/// Rows with named columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    /// Columns follow the field order of `T`.
    pub fn from_rows<T: Serialize>(rows: &[T]) -> Outcome<Self> {
        let mut table = Table::default();
        for row in rows {
            let value =
                serde_json::to_value(row).map_err(|e| DispatchError::Internal(e.to_string()))?;
            let Value::Object(map) = value else {
                return Err(DispatchError::Internal("row is not a struct".into()));
            };
            if table.columns.is_empty() {
                table.columns = map.keys().cloned().collect();
            }
            table.rows.push(map.into_iter().map(|(_, v)| v).collect());
        }
        Ok(table)
    }

    fn from_values(columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }
}

/// Output of one dispatched run.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub table: Table,
    /// `false` turns into exit status 1.
    pub passed: bool,
    /// Human-readable lines for stderr.
    pub notes: Vec<String>,
}

impl Report {
    fn new(table: Table, passed: bool) -> Self {
        Report {
            table,
            passed,
            notes: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// CSV with a header row, or `{meta, rows}` JSON.
pub fn render(manifest: &RunManifest, report: &Report) -> Outcome<String> {
    match manifest.format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let internal = |e: csv::Error| DispatchError::Internal(e.to_string());
            w.write_record(&report.table.columns).map_err(internal)?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(cell)).map_err(internal)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| DispatchError::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| DispatchError::Internal(e.to_string()))
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = report
                .table
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        report
                            .table
                            .columns
                            .iter()
                            .cloned()
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect();
            let doc = json!({
                "meta": {
                    "verb": manifest.verb,
                    "action": manifest.action,
                    "parameters": manifest.parameters,
                    "seed": manifest.seed,
                    "version": env!("CARGO_PKG_VERSION"),
                    "passed": report.passed,
                },
                "rows": rows,
            });
            let mut text = serde_json::to_string_pretty(&doc)
                .map_err(|e| DispatchError::Internal(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Run the verb named in the manifest.
pub fn dispatch(manifest: &RunManifest) -> Outcome<Report> {
    let params = Params::new(&manifest.parameters);
    let action = manifest.action.as_deref();
    let report = match manifest.verb.as_str() {
        "words" => words(action, &params)?,
        "cyclic" => cyclic(action, &params)?,
        "measures" => measures(action, &params, manifest.seed)?,
        "queue" => queue(action, &params, manifest.seed)?,
        "heaps" => heaps(action, &params)?,
        "jsr" => jsr(action, &params)?,
        "wigner" => wigner(action, &params)?,
        "verify-all" => {
            if let Some(a) = action {
                return Err(DispatchError::Usage(format!(
                    "verify-all takes no action, got {a:?}"
                )));
            }
            verify_everything(manifest.seed.unwrap_or(DEFAULT_SEED))?
        }
        other => {
            return Err(DispatchError::Usage(format!(
                "unknown verb {other:?}; expected one of {}",
                VERBS.join(", ")
            )))
        }
    };
    params.finish()?;
    Ok(report)
}

fn unknown_action(verb: &str, action: Option<&str>, known: &[&str]) -> DispatchError {
    DispatchError::Usage(format!(
        "{verb}: unknown action {:?}; expected one of {}",
        action.unwrap_or(""),
        known.join(", ")
    ))
}

fn parse_word(params: &Params, key: &str) -> Outcome<Word> {
    Ok(params.req::<String>(key)?.parse::<Word>()?)
}

/// `golden`, or a ratio/decimal.
fn parse_slope(params: &Params) -> Outcome<MechanicalSpec> {
    let delta = params
        .ratio("delta")?
        .unwrap_or_else(|| BigRational::from_integer(0.into()));
    match params.raw("gamma") {
        Some("golden") => Ok(MechanicalSpec::golden(params.or("bits", 256u32)?, delta)?),
        Some(g) => Ok(MechanicalSpec::new(parse_ratio(g)?, delta)?),
        None => Err(DispatchError::Usage("missing --gamma".into())),
    }
}

/// Comma-separated directive quotients, or `--classical` ones.
fn parse_cf(params: &Params, default_terms: usize) -> Outcome<ContinuedFraction> {
    let list = |s: &str| -> Outcome<Vec<u64>> {
        s.split(',').map(|x| parse_value("cf", x.trim())).collect()
    };
    match (params.raw("cf"), params.raw("classical")) {
        (Some(_), Some(_)) => Err(DispatchError::Usage(
            "give --cf or --classical, not both".into(),
        )),
        (Some(cf), None) => Ok(ContinuedFraction::new(list(cf)?)?),
        (None, Some(c)) => Ok(ContinuedFraction::from_classical(&list(c)?)?),
        (None, None) => Ok(ContinuedFraction::fibonacci(default_terms)?),
    }
}

fn words(action: Option<&str>, p: &Params) -> Outcome<Report> {
    const ACTIONS: [&str; 5] = ["mechanical", "balance", "orbits", "standard", "complexity"];
    match action {
        Some("mechanical") => {
            let spec = parse_slope(p)?;
            let n = p.req("n")?;
            let word = mechanical_word(&spec, n)?;
            let table = Table::from_values(
                &["word", "gamma", "delta", "n", "one_length", "balanced"],
                vec![vec![
                    json!(word.to_string()),
                    json!(match spec.approximation_bits() {
                        Some(_) => format!("{:.17}", spec.gamma_f64()),
                        None => format_ratio(spec.gamma()),
                    }),
                    json!(format_ratio(spec.delta())),
                    json!(n),
                    json!(word.one_length()),
                    json!(is_balanced(&word)),
                ]],
            );
            Ok(Report::new(table, true).note(word.to_string()))
        }
        Some("balance") => {
            let word = parse_word(p, "word")?;
            let witness = balance_witness(&word);
            let table = Table::from_values(
                &[
                    "word",
                    "balanced",
                    "cyclically_balanced",
                    "witness_heavy",
                    "witness_light",
                ],
                vec![vec![
                    json!(word.to_string()),
                    json!(witness.is_none()),
                    json!(is_cyclically_balanced(&word)),
                    json!(witness.as_ref().map(|w| w.heavy.to_string())),
                    json!(witness.as_ref().map(|w| w.light.to_string())),
                ]],
            );
            Ok(Report::new(table, true))
        }
        Some("orbits") => {
            let (ones, q) = (p.req("p")?, p.req("q")?);
            let rows = enumerate_orbits(ones, q)?
                .into_iter()
                .map(|o| {
                    vec![
                        json!(o.representative().to_string()),
                        json!(o.period()),
                        json!(o.is_balanced()),
                    ]
                })
                .collect();
            Ok(Report::new(
                Table::from_values(&["representative", "period", "balanced"], rows),
                true,
            ))
        }
        Some("standard") => {
            let cf = parse_cf(p, 6)?;
            let rows = standard_words(&cf)
                .into_iter()
                .zip(-1isize..)
                .map(|(w, n)| {
                    let (pn, qn) = cf.convergent(n);
                    vec![
                        json!(n),
                        json!(w.to_string()),
                        json!(pn.to_string()),
                        json!(qn.to_string()),
                    ]
                })
                .collect();
            Ok(Report::new(
                Table::from_values(&["n", "word", "p_n", "q_n"], rows),
                true,
            ))
        }
        Some("complexity") => {
            let spec = parse_slope(p)?;
            let len: usize = p.or("length", 1000)?;
            let n_max: usize = p.or("n-max", 20)?;
            let word = mechanical_word(&spec, len)?;
            let rows = (1..=n_max.min(len))
                .map(|n| Ok(vec![json!(n), json!(word.complexity(n)?)]))
                .collect::<Outcome<_>>()?;
            Ok(Report::new(
                Table::from_values(&["n", "complexity"], rows),
                true,
            ))
        }
        _ => Err(unknown_action("words", action, &ACTIONS)),
    }
}

fn coprime_pairs(q_max: usize) -> Vec<(usize, usize)> {
    (2..=q_max)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect()
}

fn cyclic(action: Option<&str>, p: &Params) -> Outcome<Report> {
    match action {
        Some("product") => {
            let report = orbit_product(&parse_word(p, "word")?)?;
            Ok(Report::new(Table::from_rows(&[report])?, true))
        }
        Some("verify") => {
            let pairs = match (p.opt("p")?, p.opt("q")?) {
                (Some(a), Some(b)) => vec![(a, b)],
                (None, None) => coprime_pairs(p.or("q-max", 14)?),
                _ => {
                    return Err(DispatchError::Usage(
                        "give both --p and --q, or --q-max".into(),
                    ))
                }
            };
            let mut rows = Vec::new();
            let mut all = true;
            for (a, b) in pairs {
                let r = verify_product_maximizer(a, b)?;
                all &= r.passed();
                let argmax: Vec<String> = r
                    .argmax
                    .iter()
                    .map(|o| o.representative().to_string())
                    .collect();
                rows.push(vec![
                    json!(a),
                    json!(b),
                    json!(r.reports.len()),
                    json!(argmax.join(" ")),
                    json!(r.max_product.to_string()),
                    json!(r.balanced.representative().to_string()),
                    json!(r.passed()),
                ]);
            }
            let table = Table::from_values(
                &[
                    "p",
                    "q",
                    "orbits",
                    "argmax",
                    "max_product",
                    "balanced",
                    "passed",
                ],
                rows,
            );
            Ok(Report::new(table, all))
        }
        _ => Err(unknown_action("cyclic", action, &["product", "verify"])),
    }
}

fn measure_table(m: &OrbitMeasure) -> Table {
    let rows = m
        .measure()
        .atoms()
        .map(|(x, w)| vec![json!(format_ratio(x)), json!(format_ratio(w))])
        .collect();
    Table::from_values(&["point", "weight"], rows)
}

fn measures(action: Option<&str>, p: &Params, seed: Option<u64>) -> Outcome<Report> {
    const ACTIONS: [&str; 5] = ["sturmian", "orbit", "least-element", "theta", "phi"];
    match action {
        Some("sturmian") | Some("orbit") => {
            let m = if action == Some("sturmian") {
                sturmian_measure(p.req("p")?, p.req("q")?)?
            } else {
                orbit_measure(&parse_word(p, "word")?)?
            };
            let bary = format_ratio(&m.barycenter());
            Ok(Report::new(measure_table(&m), true).note(format!("barycenter {bary}")))
        }
        Some("least-element") => {
            let report = verify_least_element(
                p.or("q-max", 10)?,
                p.or("mixtures", 100)?,
                seed.unwrap_or(DEFAULT_SEED),
            )?;
            let note = format!(
                "{} comparisons, {} counterexamples",
                report.comparisons(),
                report.counterexamples.len()
            );
            Ok(Report::new(Table::from_rows(&report.rows)?, report.passed()).note(note))
        }
        Some("theta") => {
            let grid: usize = p.or("grid", 20)?;
            let max_period = p.or("max-period", 10)?;
            let thetas: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
            let rows = match p.or("family", "tent".to_string())?.as_str() {
                "tent" => theta_experiment(tent_family, &thetas, max_period)?,
                "cosine" => theta_experiment(cosine_family, &thetas, max_period)?,
                other => return Err(DispatchError::Usage(format!("unknown family {other:?}"))),
            };
            let all = rows.iter().all(|r| r.is_balanced);
            Ok(Report::new(Table::from_rows(&rows)?, all))
        }
        Some("phi") => {
            let gamma = p
                .ratio("gamma")?
                .ok_or_else(|| DispatchError::Usage("missing --gamma".into()))?;
            let x = p
                .ratio("x")?
                .unwrap_or_else(|| BigRational::from_integer(0.into()));
            let s = phi_sample(&gamma, &x, p.or("n", 64)?)?;
            let table = Table::from_values(
                &["gamma", "x", "truncation", "value", "error_bound", "digits"],
                vec![vec![
                    json!(format_ratio(&s.gamma)),
                    json!(format_ratio(&s.x)),
                    json!(s.truncation),
                    json!(format_ratio(&s.value)),
                    json!(format_ratio(&s.error_bound())),
                    json!(s.digits.to_string()),
                ]],
            );
            Ok(Report::new(table, true))
        }
        _ => Err(unknown_action("measures", action, &ACTIONS)),
    }
}

fn queue_config(p: &Params, seed: Option<u64>) -> Outcome<QueueConfig> {
    let path: String = p.req("config")?;
    let mut cfg = QueueConfig::from_path(&path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(h) = p.opt("horizon")? {
        cfg.horizon = h;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn named_function(name: &str) -> Outcome<LatticeFunction> {
    if let Some(f) = multimodular_fixtures()
        .into_iter()
        .find(|f| f.name() == name)
    {
        return Ok(f);
    }
    match name {
        "neg-product" => Ok(LatticeFunction::total("neg-product", 2, |u| {
            -(u[0] * u[1]) as f64
        })),
        "max" => Ok(LatticeFunction::total("max", 2, |u| u[0].max(u[1]) as f64)),
        _ => Err(DispatchError::Usage(format!(
            "unknown lattice function {name:?}"
        ))),
    }
}

fn queue(action: Option<&str>, p: &Params, seed: Option<u64>) -> Outcome<Report> {
    const ACTIONS: [&str; 4] = ["simulate", "compete", "minimality", "check"];
    match action {
        Some("simulate") => {
            let summary = simulate_queue(&queue_config(p, seed)?)?;
            Ok(Report::new(Table::from_rows(&[summary])?, true))
        }
        Some("compete") => {
            let cfg = queue_config(p, seed)?;
            let report = queue_competition(
                &cfg,
                p.or("competitors", 50)?,
                p.or("competitor-seed", cfg.seed + 1)?,
            )?;
            let mut rows = vec![report.reference.clone()];
            rows.extend(report.competitors.iter().cloned());
            let mut table = Table::from_rows(&rows)?;
            table.columns.insert(0, "kind".into());
            for (i, row) in table.rows.iter_mut().enumerate() {
                row.insert(0, json!(if i == 0 { "reference" } else { "random" }));
            }
            let note = format!(
                "reference {:.6} vs best random {:.6}",
                report.reference.mean_cost,
                report.best_competitor_cost()
            );
            Ok(Report::new(table, report.dominated).note(note))
        }
        Some("minimality") => {
            let q_max: u64 = p.or("q-max", 8)?;
            let mut rows = Vec::new();
            for j in multimodular_fixtures() {
                for q in 1..=q_max {
                    for a in 0..=q {
                        if a.gcd(&q) == 1 {
                            rows.push(verify_mechanical_minimality(&j, a, q, 4 * q as usize)?);
                        }
                    }
                }
            }
            let all = rows.iter().all(|r| r.attains);
            Ok(Report::new(Table::from_rows(&rows)?, all))
        }
        Some("check") => {
            let j = named_function(&p.req::<String>("function")?)?;
            let domain = LatticeBox::cube(j.arity(), p.or("lo", -1)?, p.or("hi", 2)?)?;
            let verdict = check_multimodular(&j, &domain)?;
            let note = format!(
                "{} inequalities checked, holds: {}",
                verdict.checked, verdict.holds
            );
            Ok(Report::new(Table::from_rows(&verdict.violations)?, verdict.holds).note(note))
        }
        _ => Err(unknown_action("queue", action, &ACTIONS)),
    }
}

fn heap_model(p: &Params) -> Outcome<HeapModel> {
    Ok(match p.opt::<String>("config")? {
        Some(path) => HeapModel::from_path(path)?,
        None => HeapModel::default_model(),
    })
}

fn heaps(action: Option<&str>, p: &Params) -> Outcome<Report> {
    match action {
        Some("scan") => {
            let model = heap_model(p)?;
            let rows = heap_scan(&model, p.or("n-max", 12)?)?;
            let all = rows.iter().all(|r| r.balanced_flag);
            Ok(Report::new(Table::from_rows(&rows)?, all))
        }
        Some("certify") => {
            let model = heap_model(p)?;
            let cert = certify_balanced_schedule(&model, p.or("q-max", 8)?, p.or("n-max", 14)?)?;
            let periodic: BTreeMap<usize, String> = cert
                .periodic_minima
                .iter()
                .map(|(n, r)| (*n, r.to_string()))
                .collect();
            let rows = cert
                .finite_minima
                .iter()
                .map(|(n, r)| {
                    vec![
                        json!(n),
                        json!(r.to_string()),
                        json!(periodic.get(n)),
                        json!(cert.schedule.rate.to_string()),
                    ]
                })
                .collect();
            let table = Table::from_values(
                &["n", "finite_min_rate", "periodic_min_rate", "balanced_rate"],
                rows,
            );
            let note = format!(
                "best balanced schedule {} ({}/{}) rate {}",
                cert.schedule.word, cert.schedule.p, cert.schedule.q, cert.schedule.rate
            );
            Ok(Report::new(table, cert.certified() && !cert.inconclusive()).note(note))
        }
        Some("rate") => {
            let model = heap_model(p)?;
            let word = parse_word(p, "word")?;
            let table = Table::from_values(
                &["word", "height", "cycle_rate"],
                vec![vec![
                    json!(word.to_string()),
                    json!(heap_height(&word, &model).to_string()),
                    json!(cycle_rate(&word, &model)?.to_string()),
                ]],
            );
            Ok(Report::new(table, true))
        }
        _ => Err(unknown_action(
            "heaps",
            action,
            &["scan", "certify", "rate"],
        )),
    }
}

fn jsr(action: Option<&str>, p: &Params) -> Outcome<Report> {
    const ACTIONS: [&str; 5] = [
        "bounds",
        "scan-ratio",
        "alpha-star",
        "alpha-inverse",
        "standard",
    ];
    match action {
        Some("bounds") => {
            let pair = scaled_pair(p.or("alpha", 1.0)?)?;
            let norm: MatrixNorm = p.or("norm", "spectral".to_string())?.parse()?;
            let b = jsr_bounds(&pair, p.or("n-max", 8)?, norm)?;
            let note = format!("lower {:.15} upper {:.15}", b.lower, b.upper);
            Ok(Report::new(Table::from_rows(&b.per_length)?, b.lower <= b.upper).note(note))
        }
        Some("scan-ratio") => {
            let grid: usize = p.or("alpha-grid", 50)?;
            if grid < 2 {
                return Err(DispatchError::Usage(
                    "--alpha-grid needs at least 2 points".into(),
                ));
            }
            let scanner = RatioScanner::new(p.or("n", 14)?)?;
            let scans = (0..grid)
                .map(|i| scanner.scan(i as f64 / (grid - 1) as f64))
                .collect::<Result<Vec<_>, _>>()?;
            let monotone = scans.windows(2).all(|w| w[0].ratio <= w[1].ratio);
            Ok(Report::new(Table::from_rows(&scans)?, monotone))
        }
        Some("alpha-star") | Some("alpha-inverse") => {
            let terms = p.or("terms", 12)?;
            let mut ctx = PrecisionContext::new(p.or("bits", 256)?)?;
            let digits = p.or("digits", 45)?;
            let est = if action == Some("alpha-star") {
                alpha_star_tau(terms, &mut ctx)?
            } else {
                alpha_inverse(&parse_cf(p, terms)?, terms, &mut ctx)?
            };
            let record = est.record(&mut ctx, digits);
            let note = format!(
                "{} +/- {:.3e} ({} digits match the published constant)",
                record.value, record.error_estimate, record.digits_matched
            );
            Ok(Report::new(Table::from_rows(&[record])?, est.forms_agree(&mut ctx)).note(note))
        }
        Some("standard") => {
            let cf = parse_cf(p, 8)?;
            let alpha = p.ratio("alpha")?.unwrap_or_else(BigRational::one);
            let seq = standard_matrices(&cf, &alpha)?;
            let rows = (-1..=seq.last_index() as isize)
                .map(|n| {
                    vec![
                        json!(n),
                        json!(format_ratio(&seq.trace(n))),
                        json!(format_ratio(&seq.det(n))),
                        json!(format!("{:.15e}", seq.rho(n))),
                    ]
                })
                .collect();
            Ok(Report::new(
                Table::from_values(&["n", "trace", "det", "rho"], rows),
                true,
            ))
        }
        _ => Err(unknown_action("jsr", action, &ACTIONS)),
    }
}

fn potential(p: &Params) -> Outcome<Potential> {
    match (
        p.opt::<String>("potential")?,
        p.opt::<String>("potential-config")?,
    ) {
        (Some(_), Some(_)) => Err(DispatchError::Usage(
            "give --potential or --potential-config".into(),
        )),
        (Some(s), None) => Ok(s.parse()?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| DispatchError::Usage(format!("{path}: {e}")))?;
            toml::from_str(&text).map_err(|e| DispatchError::Usage(format!("{path}: {e}")))
        }
        (None, None) => Ok(Potential::Coulomb),
    }
}

fn wigner(action: Option<&str>, p: &Params) -> Outcome<Report> {
    match action {
        Some("ground-state") => {
            let v = potential(p)?;
            let g = ground_state(p.req("p")?, p.req("q")?, &v)?;
            let note = format!(
                "{} min energy {} at {:?}; balanced {}",
                v.name(),
                g.min_energy,
                g.argmin
                    .iter()
                    .map(|o| o.representative().to_string())
                    .collect::<Vec<_>>(),
                g.balanced
            );
            Ok(Report::new(Table::from_rows(&g.rows)?, true).note(note))
        }
        Some("scan") => {
            let v = potential(p)?;
            let mut rows = Vec::new();
            let mut all = true;
            for (a, b) in coprime_pairs(p.or("q-max", 14)?) {
                let g = ground_state(a, b, &v)?;
                all &= g.balanced;
                let argmin: Vec<String> = g
                    .argmin
                    .iter()
                    .map(|o| o.representative().to_string())
                    .collect();
                rows.push(vec![
                    json!(a),
                    json!(b),
                    json!(argmin.join(" ")),
                    json!(g.min_energy.to_string()),
                    json!(g.balanced),
                    json!(g.unique),
                ]);
            }
            let table = Table::from_values(
                &["p", "q", "argmin", "min_energy", "balanced", "unique"],
                rows,
            );
            Ok(Report::new(table, all))
        }
        _ => Err(unknown_action("wigner", action, &["ground-state", "scan"])),
    }
}

fn verify_everything(seed: u64) -> Outcome<Report> {
    let outcomes = verify_all(seed);
    let all = outcomes.iter().all(|o| o.passed);
    let mut report = Report::new(Table::from_rows(&outcomes)?, all);
    for o in &outcomes {
        report.notes.push(format!(
            "[{}] {:>2} {} ({:.1}s): {}",
            if o.passed { "pass" } else { "FAIL" },
            o.criterion,
            o.name,
            o.seconds,
            o.detail
        ));
    }
    Ok(report)
}
