//! Trial execution and reports.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::properties::config::Config;
use crate::properties::registry::{lookup, registry};
use crate::properties::sampler::{sample_with, trial_seed, ClassConstraint, SamplerProfile};
use crate::symbol::{symbol_to_value, RationalSymbol};

/// State of one trial: its random stream, recorded inputs and observed metrics.
pub struct Trial<'a> {
    pub seed: u64,
    pub rng: ChaCha8Rng,
    pub config: &'a Config,
    inputs: Vec<Value>,
    metrics: BTreeMap<String, f64>,
    failures: Vec<String>,
}

impl<'a> Trial<'a> {
    pub fn new(seed: u64, config: &'a Config) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed), config, inputs: Vec::new(), metrics: BTreeMap::new(), failures: Vec::new() }
    }

    pub fn draw(&mut self, name: &str, class: ClassConstraint) -> RationalSymbol {
        self.draw_profile(name, &SamplerProfile::with_class(class))
    }

    pub fn draw_profile(&mut self, name: &str, profile: &SamplerProfile) -> RationalSymbol {
        let f = sample_with(profile, &mut self.rng);
        self.record(name, &f);
        f
    }

    /// Records a derived input so that failures show it.
    pub fn record(&mut self, name: &str, f: &RationalSymbol) {
        self.inputs.push(serde_json::json!({ "name": name, "symbol": symbol_to_value(f) }));
    }

    pub fn note(&mut self, name: &str, value: Value) {
        self.inputs.push(serde_json::json!({ "name": name, "value": value }));
    }

    /// Keeps the largest value observed for `name`.
    pub fn metric(&mut self, name: &str, value: f64) {
        let e = self.metrics.entry(name.to_string()).or_insert(f64::NEG_INFINITY);
        if value > *e || value.is_nan() {
            *e = value;
        }
    }

    /// Records a failed condition unless `ok`.
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn fail(&mut self, detail: impl Into<String>) {
        self.failures.push(detail.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub type CheckFn = fn(&mut Trial<'_>) -> Result<()>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub inputs: Vec<Value>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub anchor: String,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub master_seed: u64,
    pub tolerances: Value,
    /// Largest value of each metric over all trials.
    pub metrics: BTreeMap<String, f64>,
    pub wall_time: f64,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.passes == self.trials
    }

    /// The report with the timing removed, for comparisons between runs.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_time");
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub all_pass: bool,
    pub properties: Vec<PropertyReport>,
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn payload(&self) -> Value {
        serde_json::json!({
            "all_pass": self.all_pass,
            "properties": self.properties.iter().map(PropertyReport::payload).collect::<Vec<_>>(),
        })
    }
}

struct TrialResult {
    passed: bool,
    failure: Option<Failure>,
    metrics: BTreeMap<String, f64>,
}

fn run_trial(check: CheckFn, index: usize, master: u64, config: &Config) -> TrialResult {
    let seed = trial_seed(master, index as u64);
    let mut t = Trial::new(seed, config);
    if let Err(e) = check(&mut t) {
        t.fail(format!("error: {e}"));
    }
    let passed = t.passed();
    let failure = (!passed).then(|| Failure { trial: index, seed, inputs: std::mem::take(&mut t.inputs), detail: t.failures.join("; ") });
    TrialResult { passed, failure, metrics: t.metrics }
}

fn pool(config: &Config) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::MalformedConfig(format!("parallelism: {e}")))
}

fn run_in(pool: &rayon::ThreadPool, id: &str, trials: usize, master: u64, config: &Config) -> Result<PropertyReport> {
    let entry = lookup(id)?;
    let start = Instant::now();
    let results: Vec<TrialResult> = pool.install(|| (0..trials).into_par_iter().map(|i| run_trial(entry.check, i, master, config)).collect());
    let mut metrics = BTreeMap::new();
    let mut failures = Vec::new();
    let mut passes = 0;
    for r in results {
        passes += usize::from(r.passed);
        failures.extend(r.failure);
        for (k, v) in r.metrics {
            let e = metrics.entry(k).or_insert(f64::NEG_INFINITY);
            if v > *e {
                *e = v;
            }
        }
    }
    let mut tolerances = serde_json::to_value(config).expect("config serializes");
    if let Some(o) = tolerances.as_object_mut() {
        o.remove("trials");
        o.remove("parallelism");
    }
    Ok(PropertyReport {
        property: entry.id.to_string(),
        anchor: entry.anchor.to_string(),
        trials,
        passes,
        failures,
        master_seed: master,
        tolerances,
        metrics,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs `trials` seeded trials of one property.
pub fn run_property(id: &str, trials: usize, master_seed: u64, config: &Config) -> Result<PropertyReport> {
    run_in(&pool(config)?, id, trials, master_seed, config)
}

/// Runs several properties with `config.trials` trials each.
pub fn run_suite(ids: &[String], master_seed: u64, config: &Config) -> Result<SuiteReport> {
    if ids.is_empty() {
        return Err(Error::UnknownProperty("empty property list".into()));
    }
    for id in ids {
        lookup(id)?;
    }
    let start = Instant::now();
    let pool = pool(config)?;
    let properties = ids.iter().map(|id| run_in(&pool, id, config.trials, master_seed, config)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { all_pass: properties.iter().all(PropertyReport::all_pass), properties, wall_time: start.elapsed().as_secs_f64() })
}

/// Every registered property identifier, in registry order.
pub fn all_property_ids() -> Vec<String> {
    registry().iter().map(|p| p.id.to_string()).collect()
}
