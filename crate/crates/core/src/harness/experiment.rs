use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::{certify_counterexample, Certificate, Verdict};
use super::generate::{generate_family, Shape, TrialConfig};
use crate::analysis::{verify_main_theorem, SubsetMode};
use crate::converter::{Converter, CycleReport};
use crate::error::Result;
use crate::family::Family;

/// Note attached to every report: the parameters of the original study are
/// unknown, so the defaults here are a choice.
pub const DEFAULTS_NOTE: &str =
    "defaults (dimension 2, up to 6 points, 200 trials, numerators within 8, denominators 1..=16) are this tool's choice";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub points: usize,
    pub members: usize,
    pub n0: Option<usize>,
    pub k: Option<usize>,
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    /// Trajectory closes where it claims to and has no earlier repeat.
    pub cycle_consistent: bool,
    /// Used ground indices shrink (weakly) along the trajectory.
    pub used_nested: bool,
    /// When every point is extreme: the used set never shrinks.
    pub used_stable: Option<bool>,
    /// Theorem-backed check for the shape: first and third duals agree for
    /// intervals, the full verifier for convex-position suites.
    pub theorem_holds: Option<bool>,
    pub family: String,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: TrialConfig,
    pub note: String,
    pub trials: Vec<TrialRecord>,
    /// Cycle length to number of trials, over trials that finished.
    pub histogram: BTreeMap<usize, usize>,
    pub errors: usize,
    /// Trials whose shape-specific theorem check failed.
    pub theorem_failures: Vec<usize>,
    /// Whether every observed cycle has length one or two. Reported, never
    /// asserted, for random families.
    pub cycles_at_most_two: bool,
    pub counterexamples: Vec<CounterexampleEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleEntry {
    pub trial: usize,
    pub verdict: Verdict,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

fn used_sets_nested(report: &CycleReport) -> bool {
    report
        .used_index_sets()
        .windows(2)
        .all(|w| w[1].iter().all(|i| w[0].binary_search(i).is_ok()))
}

fn theorem_check(shape: Shape, f: &Family, report: &CycleReport, conv: &Converter) -> Result<Option<bool>> {
    match shape {
        Shape::Random => Ok(None),
        Shape::Interval1d => {
            let mut fams: Vec<Family> = report.families.iter().take(4).cloned().collect();
            while fams.len() < 4 {
                let next = conv.dual(fams.last().expect("nonempty"))?;
                fams.push(next);
            }
            Ok(Some(fams[1] == fams[3]))
        }
        Shape::H1h2 => Ok(Some(verify_main_theorem(f, SubsetMode::AllSubsets)?.passed)),
    }
}

fn run_trial(cfg: &TrialConfig, trial: usize, timed: bool) -> (TrialRecord, Option<Certificate>) {
    let start = Instant::now();
    let mut rec = TrialRecord {
        trial,
        seed: cfg.seed,
        points: 0,
        members: 0,
        n0: None,
        k: None,
        iterations: None,
        wall_ms: None,
        cycle_consistent: false,
        used_nested: false,
        used_stable: None,
        theorem_holds: None,
        family: String::new(),
        error: None,
    };
    let mut cert = None;
    let outcome = (|| -> Result<()> {
        let f = generate_family(cfg, trial)?;
        rec.points = f.ground().len();
        rec.members = f.len();
        rec.family = f.canonicalize().to_string();
        let conv = Converter::new(Arc::clone(f.ground_arc()));
        let report = conv.iterate(&f, cfg.max_iter)?;
        rec.n0 = Some(report.n0);
        rec.k = Some(report.k);
        rec.iterations = Some(report.n0 + report.k);
        rec.cycle_consistent = report.is_consistent();
        rec.used_nested = used_sets_nested(&report);
        let compact = f.compact();
        if compact.ground().in_convex_position() {
            let start_set = f.used_indices();
            rec.used_stable = Some(report.used_index_sets().iter().all(|u| *u == start_set));
        }
        rec.theorem_holds = theorem_check(cfg.shape, &f, &report, &conv)?;
        if report.k > 2 {
            cert = Some(certify_counterexample(&f, &report)?);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        rec.error = Some(e.to_string());
    }
    if timed {
        rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    (rec, cert)
}

/// Runs every trial (in parallel, merged in trial order). With `canonical`
/// set, timing fields are left out so equal configurations give identical
/// reports.
pub fn run_experiment(cfg: &TrialConfig, canonical: bool) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let results: Vec<(TrialRecord, Option<Certificate>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, !canonical))
        .collect();
    let mut histogram = BTreeMap::new();
    let mut errors = 0;
    let mut theorem_failures = Vec::new();
    let mut counterexamples = Vec::new();
    let mut trials = Vec::with_capacity(results.len());
    for (rec, cert) in results {
        match rec.k {
            Some(k) => *histogram.entry(k).or_insert(0) += 1,
            None => errors += 1,
        }
        if rec.theorem_holds == Some(false) {
            theorem_failures.push(rec.trial);
        }
        if let Some(c) = cert {
            counterexamples.push(CounterexampleEntry {
                trial: rec.trial,
                verdict: c.verdict,
                certificate: Some(c),
            });
        }
        trials.push(rec);
    }
    let cycles_at_most_two = histogram.keys().all(|&k| k <= 2);
    Ok(ExperimentReport {
        config: cfg.clone(),
        note: DEFAULTS_NOTE.to_string(),
        trials,
        histogram,
        errors,
        theorem_failures,
        cycles_at_most_two,
        counterexamples,
        wall_ms: (!canonical).then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

#[derive(Serialize)]
struct CsvRow {
    seed: u64,
    trial: usize,
    n0: Option<usize>,
    k: Option<usize>,
    iters: Option<usize>,
}

impl ExperimentReport {
    /// One row per trial: `seed,trial,n0,k,iters`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for t in &self.trials {
            w.serialize(CsvRow {
                seed: t.seed,
                trial: t.trial,
                n0: t.n0,
                k: t.k,
                iters: t.iterations,
            })
            .map_err(|e| crate::error::Error::Internal(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::error::Error::Internal(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
