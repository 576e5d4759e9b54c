//! Experiment harness: dictionary sources, randomized recovery trials and
//! CSV/JSON reports.
//!
//! A dictionary source is either a path to a dictionary JSON file or a
//! generator source `gen:NAME[:key=value,...]`:
//!
//! | spec                                         | dictionary                          |
//! |----------------------------------------------|-------------------------------------|
//! | `gen:identity:n=4`                           | standard basis of `R^n`             |
//! | `gen:two_ortho:n=16[,seed=7]`                | identity + Hadamard, optional scales|
//! | `gen:simplex:n=6[,seed=3]`                   | regular simplex, optional scales    |
//! | `gen:random:n=8,N=16[,lo=0.5,hi=2,seed=1]`   | Gaussian atoms with random norms    |
//!
//! Trials are independent: trial `k` draws everything from a sub-seed
//! derived from the experiment seed and `k`, so rows do not depend on how
//! many trials run or on the order they execute in.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DVector;
use rand::{seq::index::sample, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dictionary::{
    orthonormal_basis, random_dictionary, simplex_dictionary, two_ortho_dictionary, welch_lower_bound, Dictionary,
    DEFAULT_SCALE_RANGE,
};
use crate::error::{Error, Result};
use crate::l1solver::{verify_recovery, SolverConfig};
use crate::CoefVector;

/// Resolves a dictionary source string (file path or `gen:` spec).
pub fn load_dictionary(source: &str) -> Result<Dictionary> {
    match source.strip_prefix("gen:") {
        Some(spec) => generate_dictionary(spec),
        None => Dictionary::load(source),
    }
}

fn generate_dictionary(spec: &str) -> Result<Dictionary> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut kv = BTreeMap::new();
    for item in params.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("generator parameter `{item}` is not key=value")))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut take = |key: &str| kv.remove(key);
    fn parse<T: FromStr>(key: &str, v: Option<String>) -> Result<Option<T>> {
        v.map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::Config(format!("generator parameter `{key}` has invalid value `{s}`")))
        })
        .transpose()
    }
    fn required<T>(key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("generator parameter `{key}` is required")))
    }

    let dict = match name {
        "identity" => orthonormal_basis(required("n", parse("n", take("n"))?)?)?,
        "two_ortho" => {
            let n = required("n", parse("n", take("n"))?)?;
            two_ortho_dictionary(n, parse("seed", take("seed"))?)?
        }
        "simplex" => {
            let n = required("n", parse("n", take("n"))?)?;
            simplex_dictionary(n, parse("seed", take("seed"))?)?
        }
        "random" => {
            let n = required("n", parse("n", take("n"))?)?;
            let big = required("N", parse("N", take("N"))?)?;
            let lo = parse("lo", take("lo"))?.unwrap_or(DEFAULT_SCALE_RANGE.0);
            let hi = parse("hi", take("hi"))?.unwrap_or(DEFAULT_SCALE_RANGE.1);
            let seed = parse("seed", take("seed"))?.unwrap_or(0);
            random_dictionary(n, big, (lo, hi), seed)?
        }
        other => return Err(Error::Config(format!("unknown generator `{other}`"))),
    };
    if let Some(key) = kv.keys().next() {
        return Err(Error::Config(format!(
            "unknown generator parameter `{key}` for `{name}`"
        )));
    }
    Ok(dict)
}

/// Summary printed by the `coherence` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_atoms: usize,
    pub mu: f64,
    pub welch: f64,
    pub weight_min: f64,
    pub weight_max: f64,
}

impl CoherenceReport {
    pub fn new(dict: &Dictionary) -> Self {
        let (weight_min, weight_max) = dict.weight_range();
        Self {
            n: dict.dim(),
            num_atoms: dict.len(),
            mu: dict.coherence(),
            welch: welch_lower_bound(dict.dim(), dict.len()),
            weight_min,
            weight_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        }
    }
}

fn default_coef_range() -> (f64, f64) {
    (1.0, 2.0)
}

/// A randomized verification campaign for the weighted recovery bound.
///
/// `eps` and `eta` are paired entry by entry; an empty `eta` means
/// `eta = eps`. Every `(s, (eps, eta))` combination runs `trials` trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Dictionary source, see [`load_dictionary`].
    pub dictionary: String,
    pub trials: usize,
    pub s: Vec<usize>,
    pub eps: Vec<f64>,
    #[serde(default)]
    pub eta: Vec<f64>,
    pub seed: u64,
    /// Magnitude range of the nonzero coefficients of `c_true` (random signs).
    #[serde(default = "default_coef_range")]
    pub coef_range: (f64, f64),
    /// Standard deviation of a dense Gaussian tail added off the support,
    /// making `c_true` compressible rather than exactly sparse.
    #[serde(default)]
    pub tail: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The `(eps, eta)` pairs after defaulting `eta` to `eps`.
    pub fn noise_levels(&self) -> Vec<(f64, f64)> {
        if self.eta.is_empty() {
            self.eps.iter().map(|&e| (e, e)).collect()
        } else {
            self.eps.iter().copied().zip(self.eta.iter().copied()).collect()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.s.is_empty() || self.eps.is_empty() {
            return Err(Error::Config("the s and eps grids must be nonempty".into()));
        }
        if self.s.contains(&0) {
            return Err(Error::Config("sparsity levels must be >= 1".into()));
        }
        if !self.eta.is_empty() && self.eta.len() != self.eps.len() {
            return Err(Error::Config(format!(
                "eta grid has {} entries but eps grid has {}",
                self.eta.len(),
                self.eps.len()
            )));
        }
        for (eps, eta) in self.noise_levels() {
            if !(eps >= 0.0 && eps.is_finite() && eta.is_finite() && eta >= eps) {
                return Err(Error::Config(format!(
                    "need eta >= eps >= 0, got eps = {eps}, eta = {eta}"
                )));
            }
        }
        let (lo, hi) = self.coef_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Config(format!("coef_range [{lo}, {hi}] is invalid")));
        }
        if !(self.tail >= 0.0 && self.tail.is_finite()) {
            return Err(Error::Config(format!("tail must be >= 0, got {}", self.tail)));
        }
        self.solver.validate()
    }
}

/// One trial of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub s: usize,
    pub mu: f64,
    pub eps: f64,
    pub eta: f64,
    pub e0: f64,
    pub observed: f64,
    pub bound: Option<f64>,
    pub cai_bound: Option<f64>,
    pub applicable: bool,
    pub satisfied: Option<bool>,
    pub l1_ordering: bool,
    pub converged: bool,
}

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 14] = [
    "trial",
    "seed",
    "s",
    "mu",
    "eps",
    "eta",
    "e0",
    "observed",
    "bound",
    "cai_bound",
    "applicable",
    "satisfied",
    "l1_ordering",
    "converged",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub applicable: usize,
    pub satisfied: usize,
    /// Satisfied fraction of the applicable trials (1 when none apply).
    pub satisfied_rate: f64,
    pub converged_rate: f64,
    pub l1_ordering_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<TrialRow>,
    pub summary: Summary,
}

/// Sub-seed of trial `counter`: the first word of stream `counter` of the
/// generator seeded with the experiment seed.
pub fn trial_seed(seed: u64, counter: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    rng.next_u64()
}

/// Random `c_true` with `s` nonzeros of magnitude in `coef_range` and random
/// signs, plus an optional dense Gaussian tail of standard deviation `tail`.
pub fn random_sparse_vector(len: usize, s: usize, coef_range: (f64, f64), tail: f64, rng: &mut impl Rng) -> CoefVector {
    let mut c = DVector::zeros(len);
    if tail > 0.0 {
        for x in c.iter_mut() {
            *x = tail * rng.sample::<f64, _>(StandardNormal);
        }
    }
    let (lo, hi) = coef_range;
    for i in sample(rng, len, s).into_iter() {
        let mag = if lo == hi { lo } else { rng.random_range(lo..=hi) };
        c[i] = if rng.random_bool(0.5) { mag } else { -mag };
    }
    c
}

/// Runs every trial of `cfg` and aggregates the results.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let dict = load_dictionary(&cfg.dictionary)?;
    if let Some(&s) = cfg.s.iter().find(|&&s| s > dict.len()) {
        return Err(Error::InvalidSparsity { s, len: dict.len() });
    }

    let mut plan = Vec::new();
    for &s in &cfg.s {
        for (eps, eta) in cfg.noise_levels() {
            for _ in 0..cfg.trials {
                plan.push((plan.len(), s, eps, eta));
            }
        }
    }

    let rows = plan
        .into_par_iter()
        .map(|(trial, s, eps, eta)| {
            let seed = trial_seed(cfg.seed, trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c_true = random_sparse_vector(dict.len(), s, cfg.coef_range, cfg.tail, &mut rng);
            let noise_seed = rng.next_u64();
            let report = verify_recovery(&dict, &c_true, s, eps, eta, &cfg.solver, noise_seed)?;
            Ok(TrialRow {
                trial,
                seed,
                s,
                mu: report.mu,
                eps,
                eta,
                e0: report.e0,
                observed: report.observed.unwrap_or(f64::NAN),
                bound: report.bound_value,
                cai_bound: report.cai_bound,
                applicable: report.applicable,
                satisfied: report.satisfied,
                l1_ordering: report.l1_ordering.unwrap_or(false),
                converged: report.solver_converged.unwrap_or(false),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = summarize(&rows);
    Ok(ExperimentReport {
        config: cfg.clone(),
        rows,
        summary,
    })
}

fn summarize(rows: &[TrialRow]) -> Summary {
    let trials = rows.len();
    let applicable = rows.iter().filter(|r| r.applicable).count();
    let satisfied = rows.iter().filter(|r| r.satisfied == Some(true)).count();
    let rate = |k: usize, of: usize| if of == 0 { 1.0 } else { k as f64 / of as f64 };
    Summary {
        trials,
        applicable,
        satisfied,
        satisfied_rate: rate(satisfied, applicable),
        converged_rate: rate(rows.iter().filter(|r| r.converged).count(), trials),
        l1_ordering_rate: rate(rows.iter().filter(|r| r.l1_ordering).count(), trials),
    }
}

/// Float with 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn format_opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn format_opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

/// Writes the per-trial rows as CSV with the fixed [`CSV_COLUMNS`] order.
pub fn write_csv<W: Write>(rows: &[TrialRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for r in rows {
        writer.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.s.to_string(),
            format_float(r.mu),
            format_float(r.eps),
            format_float(r.eta),
            format_float(r.e0),
            format_float(r.observed),
            format_opt_float(r.bound),
            format_opt_float(r.cai_bound),
            r.applicable.to_string(),
            format_opt_bool(r.satisfied),
            r.l1_ordering.to_string(),
            r.converged.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Serializes the full report (config, rows and summary) as JSON.
pub fn write_json<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

/// Renders the report in `format`.
pub fn render(report: &ExperimentReport, format: OutputFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(&report.rows, &mut buf)?,
        OutputFormat::Json => write_json(report, &mut buf)?,
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            dictionary: "gen:two_ortho:n=8,seed=2".into(),
            trials: 3,
            s: vec![1, 2],
            eps: vec![0.0, 0.01],
            eta: vec![],
            seed: 11,
            coef_range: (1.0, 2.0),
            tail: 0.0,
            solver: SolverConfig::default(),
        }
    }

    #[test]
    fn generator_specs() {
        assert_eq!(load_dictionary("gen:identity:n=3").unwrap().len(), 3);
        assert_eq!(load_dictionary("gen:two_ortho:n=4").unwrap().len(), 8);
        assert_eq!(load_dictionary("gen:simplex:n=4,seed=1").unwrap().len(), 5);
        let d = load_dictionary("gen:random:n=4,N=6,lo=1,hi=1,seed=3").unwrap();
        assert_eq!((d.dim(), d.len()), (4, 6));
        assert!(load_dictionary("gen:two_ortho:n=6").is_err());
        assert!(load_dictionary("gen:nope:n=6").is_err());
        assert!(load_dictionary("gen:two_ortho").is_err());
        assert!(load_dictionary("gen:two_ortho:n=4,bogus=1").is_err());
        assert!(load_dictionary("gen:two_ortho:n=four").is_err());
        assert!(load_dictionary("/definitely/not/here.json").is_err());
    }

    #[test]
    fn coherence_report_fields() {
        let r = CoherenceReport::new(&load_dictionary("gen:two_ortho:n=4").unwrap());
        assert_eq!((r.n, r.num_atoms), (4, 8));
        assert!((r.mu - 0.5).abs() < 1e-12);
        assert!((r.welch - (4.0f64 / 28.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(config().validate().is_ok());
        assert!(ExperimentConfig { trials: 0, ..config() }.validate().is_err());
        assert!(ExperimentConfig { s: vec![], ..config() }.validate().is_err());
        assert!(ExperimentConfig {
            eps: vec![],
            ..config()
        }
        .validate()
        .is_err());
        assert!(ExperimentConfig {
            eta: vec![0.1],
            ..config()
        }
        .validate()
        .is_err());
        assert!(ExperimentConfig {
            eta: vec![0.0, 0.005],
            ..config()
        }
        .validate()
        .is_err());
        assert!(ExperimentConfig {
            eta: vec![0.0, 0.02],
            ..config()
        }
        .validate()
        .is_ok());
        assert!(ExperimentConfig { tail: -1.0, ..config() }.validate().is_err());
    }

    #[test]
    fn experiment_rows_and_determinism() {
        let cfg = config();
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.rows.len(), 12);
        assert_eq!(a.summary.trials, 12);
        // mu = 1/sqrt(8): s = 1 applies, s = 2 does not (mu * 3 > 1)
        assert_eq!(a.summary.applicable, 6);
        assert_eq!(a.summary.satisfied_rate, 1.0);
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(
            render(&a, OutputFormat::Csv).unwrap(),
            render(&b, OutputFormat::Csv).unwrap()
        );
        assert_eq!(
            render(&a, OutputFormat::Json).unwrap(),
            render(&b, OutputFormat::Json).unwrap()
        );
    }

    #[test]
    fn trial_rows_do_not_depend_on_trial_count() {
        let small = run_experiment(&ExperimentConfig {
            s: vec![1],
            eps: vec![0.01],
            trials: 2,
            ..config()
        })
        .unwrap();
        let large = run_experiment(&ExperimentConfig {
            s: vec![1],
            eps: vec![0.01],
            trials: 5,
            ..config()
        })
        .unwrap();
        assert_eq!(small.rows[..], large.rows[..2]);
    }

    #[test]
    fn csv_layout() {
        let report = run_experiment(&ExperimentConfig {
            trials: 1,
            s: vec![1],
            eps: vec![0.01],
            ..config()
        })
        .unwrap();
        let text = String::from_utf8(render(&report, OutputFormat::Csv).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), CSV_COLUMNS.len());
        assert_eq!(fields[4], "1.00000000000e-2");
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn sparse_vector_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_sparse_vector(10, 3, (1.0, 2.0), 0.0, &mut rng);
        assert_eq!(c.iter().filter(|x| **x != 0.0).count(), 3);
        assert!(c.iter().filter(|x| **x != 0.0).all(|x| (1.0..=2.0).contains(&x.abs())));
    }
}
