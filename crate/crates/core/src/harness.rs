//! Experiment orchestration: evaluate rules on sampled or ingested profiles,
//! aggregate distortions per cell, and render deterministic CSV.
//!
//! Configuration is TOML. A sampled experiment:
//!
//! ```toml
//! seed = 7
//! trials = 200
//! rules = ["RD", "RPV", "C1ML", "C2ML", "CRWW"]
//! m = [5]
//! n = [11, 21, 201]
//! layout = "wide"        # or "long"; default wide
//! threads = 4            # optional; never changes the output
//!
//! [sampler]
//! model = "ic"           # ic | mallows | urn | euclidean
//! ```
//!
//! Model parameters sit next to `model`: `phi` and `reference` for Mallows,
//! `alpha` for the urn, `dim` and `geometry` (`cube` or `ball`) for the
//! Euclidean models. Instead of `[sampler]`, `m` and `n`, an experiment may
//! list SOC files with `inputs = ["data/*.soc"]`; files are grouped into
//! cells by their `(m, n)` and each file is one trial.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distortion::{metric_distortion, DistortionValue};
use crate::ingest::{parse_soc, SocError};
use crate::profiles::PreferenceProfile;
use crate::rules::Rule;
use crate::samplers::{sample_batch, sub_seed, Model, SamplerError, SamplerSpec, RNG_NAME};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{path}: {source}")]
    Soc { path: PathBuf, source: SocError },
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("the wide layout needs a single m, found {0:?}")]
    MixedM(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    #[default]
    Wide,
    Long,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub rules: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub layout: Layout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<Model>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.message().to_owned()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; relative input patterns are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_owned(),
            msg: e.to_string(),
        })?;
        let mut config = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for pattern in config.inputs.iter_mut() {
            if Path::new(pattern.as_str()).is_relative() {
                *pattern = base.join(&*pattern).to_string_lossy().into_owned();
            }
        }
        Ok(config)
    }

    /// Selected rules in output order, without duplicates.
    pub fn resolved_rules(&self) -> Result<Vec<Rule>, HarnessError> {
        let mut rules = self
            .rules
            .iter()
            .map(|r| r.parse::<Rule>().map_err(|e| HarnessError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rules.sort();
        rules.dedup();
        Ok(rules)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.to_owned()));
        if self.rules.is_empty() {
            return bad("at least one rule is required");
        }
        self.resolved_rules()?;
        match (&self.sampler, self.inputs.is_empty()) {
            (Some(model), true) => {
                if self.m.is_empty() || self.n.is_empty() {
                    return bad("sampled experiments need nonempty m and n lists");
                }
                match self.trials {
                    Some(t) if t >= 1 => {}
                    _ => return bad("trials must be at least 1"),
                }
                for &m in &self.m {
                    for &n in &self.n {
                        SamplerSpec::new(model.clone(), m, n, self.seed).validate()?;
                    }
                }
            }
            (None, false) => {
                if !self.m.is_empty() || !self.n.is_empty() {
                    return bad("m and n are taken from the input files and must not be set");
                }
            }
            (Some(_), false) => return bad("give either a sampler or input files, not both"),
            (None, true) => return bad("give a sampler or input files"),
        }
        Ok(())
    }

    /// The configuration as embedded in experiment output. The thread count
    /// is left out because it never affects results.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub m: usize,
    pub n: usize,
    pub rule: Rule,
    /// Mean over finite trials; NaN if there are none.
    pub mean: f64,
    /// Population variance over finite trials.
    pub variance: f64,
    pub trials: usize,
    pub infinite: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum TrialOutcome {
    Value(f64),
    Infinite,
    Failed,
}

struct Cell {
    m: usize,
    n: usize,
    profiles: Vec<PreferenceProfile>,
}

/// Seed of the `(m, n)` cell of a sampled experiment.
pub fn cell_seed(seed: u64, m: usize, n: usize) -> u64 {
    sub_seed(sub_seed(seed, m as u64), n as u64)
}

fn load_inputs(patterns: &[String]) -> Result<Vec<Cell>, HarnessError> {
    let mut paths = Vec::new();
    for pattern in patterns {
        let entries = glob::glob(pattern).map_err(|e| HarnessError::Config(format!("bad pattern {pattern:?}: {e}")))?;
        for entry in entries {
            paths.push(entry.map_err(|e| HarnessError::Io {
                path: e.path().to_owned(),
                msg: e.error().to_string(),
            })?);
        }
    }
    paths.sort();
    paths.dedup();
    if paths.is_empty() {
        return Err(HarnessError::Config("input patterns matched no files".into()));
    }
    let mut groups: BTreeMap<(usize, usize), Vec<PreferenceProfile>> = BTreeMap::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::Io {
            path: path.clone(),
            msg: e.to_string(),
        })?;
        let doc = parse_soc(&text).map_err(|source| HarnessError::Soc { path: path.clone(), source })?;
        let key = (doc.profile.num_alternatives(), doc.profile.num_voters());
        groups.entry(key).or_default().push(doc.profile);
    }
    Ok(groups.into_iter().map(|((m, n), profiles)| Cell { m, n, profiles }).collect())
}

fn build_cells(config: &ExperimentConfig) -> Result<Vec<Cell>, HarnessError> {
    match &config.sampler {
        Some(model) => {
            let trials = config.trials.unwrap_or(1);
            let mut cells = Vec::new();
            for &m in &config.m {
                for &n in &config.n {
                    let spec = SamplerSpec::new(model.clone(), m, n, cell_seed(config.seed, m, n));
                    cells.push(Cell {
                        m,
                        n,
                        profiles: sample_batch(&spec, trials)?,
                    });
                }
            }
            Ok(cells)
        }
        None => load_inputs(&config.inputs),
    }
}

fn evaluate(profile: &PreferenceProfile, rule: Rule) -> TrialOutcome {
    let lottery = match rule.apply(profile) {
        Ok(p) => p,
        Err(e) => {
            log::warn!("{rule} failed on a trial: {e}");
            return TrialOutcome::Failed;
        }
    };
    match metric_distortion(profile, &lottery) {
        Ok(DistortionValue::Finite(v)) => TrialOutcome::Value(v),
        Ok(DistortionValue::Infinite) => TrialOutcome::Infinite,
        Err(e) => {
            log::warn!("distortion of {rule} failed on a trial: {e}");
            TrialOutcome::Failed
        }
    }
}

fn aggregate(m: usize, n: usize, rule: Rule, outcomes: &[TrialOutcome]) -> CellResult {
    let values: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| match o {
            TrialOutcome::Value(v) => Some(*v),
            _ => None,
        })
        .collect();
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
    CellResult {
        m,
        n,
        rule,
        mean,
        variance: if values.is_empty() { f64::NAN } else { variance },
        trials: outcomes.len(),
        infinite: outcomes.iter().filter(|o| **o == TrialOutcome::Infinite).count(),
        failed: outcomes.iter().filter(|o| **o == TrialOutcome::Failed).count(),
    }
}

/// Runs every cell of the experiment. Results do not depend on the thread
/// count: trials are seeded up front and reduced in trial order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<CellResult>, HarnessError> {
    config.validate()?;
    let rules = config.resolved_rules()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = config.threads.filter(|&t| t > 0) {
        builder = builder.num_threads(threads);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let cells = build_cells(config)?;
        let mut results = Vec::new();
        for cell in &cells {
            log::info!("cell m={} n={} ({} trials)", cell.m, cell.n, cell.profiles.len());
            let outcomes: Vec<Vec<TrialOutcome>> = cell
                .profiles
                .par_iter()
                .map(|profile| rules.iter().map(|&rule| evaluate(profile, rule)).collect())
                .collect();
            for (k, &rule) in rules.iter().enumerate() {
                let column: Vec<TrialOutcome> = outcomes.iter().map(|row| row[k].clone()).collect();
                results.push(aggregate(cell.m, cell.n, rule, &column));
            }
        }
        results.sort_by_key(|r| (r.m, r.n, r.rule));
        Ok(results)
    })
}

/// CSV of cell results. The wide layout has one row per `n` and one column
/// per rule present; the long layout has one row per cell.
pub fn write_csv(results: &[CellResult], layout: Layout) -> Result<String, HarnessError> {
    let mut sorted: Vec<&CellResult> = results.iter().collect();
    sorted.sort_by_key(|r| (r.m, r.n, r.rule));
    let mut out = String::new();
    match layout {
        Layout::Long => {
            out.push_str("m,n,rule,mean,variance,trials,infinite\n");
            for r in sorted {
                writeln!(
                    out,
                    "{},{},{},{:.6},{:.6},{},{}",
                    r.m, r.n, r.rule, r.mean, r.variance, r.trials, r.infinite
                )
                .expect("writing to a string");
            }
        }
        Layout::Wide => {
            let mut ms: Vec<usize> = sorted.iter().map(|r| r.m).collect();
            ms.dedup();
            if ms.len() > 1 {
                return Err(HarnessError::MixedM(ms));
            }
            let mut rules: Vec<Rule> = sorted.iter().map(|r| r.rule).collect();
            rules.sort();
            rules.dedup();
            out.push('n');
            for rule in &rules {
                write!(out, ",{rule}").expect("writing to a string");
            }
            out.push('\n');
            let mut rows: BTreeMap<usize, BTreeMap<Rule, f64>> = BTreeMap::new();
            for r in sorted {
                rows.entry(r.n).or_default().insert(r.rule, r.mean);
            }
            for (n, means) in rows {
                write!(out, "{n}").expect("writing to a string");
                for rule in &rules {
                    match means.get(rule) {
                        Some(v) => write!(out, ",{v:.6}"),
                        None => write!(out, ","),
                    }
                    .expect("writing to a string");
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// CSV preceded by `#` comment lines holding the resolved configuration and
/// the generator name.
pub fn render_output(config: &ExperimentConfig, results: &[CellResult]) -> Result<String, HarnessError> {
    let mut out = String::new();
    for line in config.to_toml().lines() {
        writeln!(out, "# {line}").expect("writing to a string");
    }
    writeln!(out, "# rng = {RNG_NAME:?}").expect("writing to a string");
    out.push_str(&write_csv(results, config.layout)?);
    Ok(out)
}

/// Human-readable per-rule overview across cells.
pub fn summarize(results: &[CellResult]) -> String {
    if results.is_empty() {
        return "no results\n".into();
    }
    let mut by_rule: BTreeMap<Rule, Vec<&CellResult>> = BTreeMap::new();
    for r in results {
        by_rule.entry(r.rule).or_default().push(r);
    }
    let mut out = String::new();
    writeln!(out, "{:<20} {:>6} {:>10} {:>10} {:>10} {:>9} {:>7}", "rule", "cells", "min", "mean", "max", "infinite", "failed")
        .expect("writing to a string");
    for (rule, cells) in by_rule {
        let means: Vec<f64> = cells.iter().map(|c| c.mean).filter(|v| v.is_finite()).collect();
        let min = means.iter().copied().fold(f64::INFINITY, f64::min);
        let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = means.iter().sum::<f64>() / means.len() as f64;
        let infinite: usize = cells.iter().map(|c| c.infinite).sum();
        let failed: usize = cells.iter().map(|c| c.failed).sum();
        writeln!(
            out,
            "{:<20} {:>6} {:>10.6} {:>10.6} {:>10.6} {:>9} {:>7}",
            rule.name(),
            cells.len(),
            min,
            avg,
            max,
            infinite,
            failed
        )
        .expect("writing to a string");
    }
    out
}
