//! Seeded instance generation, batch experiments over the iteration and
//! re-verification of long cycles.

mod certify;
mod experiment;
mod generate;

pub use certify::{certify_counterexample, Certificate, Verdict};
pub use experiment::{
    run_experiment, CounterexampleEntry, ExperimentReport, TrialRecord, DEFAULTS_NOTE,
};
pub use generate::{generate_family, Shape, TrialConfig, MAX_DENOMINATOR, REJECTION_BUDGET};
