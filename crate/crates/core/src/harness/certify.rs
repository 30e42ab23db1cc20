use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::converter::{dual_family_oracle, CycleReport, Converter, DEFAULT_ORACLE_BOUND};
use crate::error::{Error, Result};
use crate::family::{CanonicalFamily, Family, FamilyJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The exhaustive recomputation reproduces the trajectory and the cycle.
    Confirmed,
    /// The exhaustive recomputation disagrees.
    Refuted,
    /// Too many points for the exhaustive recomputation.
    Unconfirmed,
}

/// A claimed cycle longer than two, with an independent recomputation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// First trajectory index where the two computations differ; `None` when
    /// they agree step by step (a refutation then concerns the cycle claim).
    pub first_divergence: Option<usize>,
    pub n0: usize,
    pub k: usize,
    pub family: FamilyJson,
    pub reported: Vec<CanonicalFamily>,
    pub recomputed: Vec<CanonicalFamily>,
}

impl Certificate {
    /// Writes `<stem>.json` (this certificate) and `<stem>.family.json` (the
    /// starting family alone) into `dir`.
    pub fn write_to(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        std::fs::write(
            dir.join(format!("{stem}.family.json")),
            serde_json::to_string_pretty(&self.family)?,
        )?;
        Ok(path)
    }
}

/// A recomputed trajectory and its first repeat as `(n0, k)`, if any.
type Recomputed = (Vec<CanonicalFamily>, Option<(usize, usize)>);

/// Recomputes the trajectory of `f` step by step with `dual`, as many steps
/// as `report` claims, and locates the first repeat.
fn recompute(
    f: &Family,
    steps: usize,
    mut dual: impl FnMut(&Family) -> Result<Family>,
) -> Result<Recomputed> {
    let mut cur = f.clone();
    let mut seen = HashMap::new();
    let mut out = Vec::with_capacity(steps);
    let mut cycle = None;
    for n in 0..steps {
        let enc = cur.canonicalize();
        if cycle.is_none() {
            if let Some(&first) = seen.get(&enc) {
                cycle = Some((first, n - first));
            } else {
                seen.insert(enc.clone(), n);
            }
        }
        out.push(enc);
        if n + 1 < steps {
            cur = dual(&cur)?;
        }
    }
    Ok((out, cycle))
}

/// Re-verifies a cycle of length above two with the exhaustive dual when the
/// ground set is small enough, and with a fresh enumeration otherwise.
pub fn certify_counterexample(f: &Family, report: &CycleReport) -> Result<Certificate> {
    if report.k <= 2 {
        return Err(Error::Precondition(format!(
            "only cycles longer than two need certification (got {})",
            report.k
        )));
    }
    let steps = report.trajectory.len();
    let oracle = f.ground().len() <= DEFAULT_ORACLE_BOUND;
    let (recomputed, cycle) = if oracle {
        recompute(f, steps, |g| dual_family_oracle(g, DEFAULT_ORACLE_BOUND))?
    } else {
        let conv = Converter::new(Arc::new(f.ground().clone()));
        recompute(f, steps, |g| conv.dual(g))?
    };
    let first_divergence = report
        .trajectory
        .iter()
        .zip(&recomputed)
        .position(|(a, b)| a != b);
    let agrees = first_divergence.is_none() && cycle == Some((report.n0, report.k));
    let verdict = match (agrees, oracle) {
        (false, _) => Verdict::Refuted,
        (true, true) => Verdict::Confirmed,
        (true, false) => Verdict::Unconfirmed,
    };
    Ok(Certificate {
        verdict,
        first_divergence,
        n0: report.n0,
        k: report.k,
        family: f.to_json_value(),
        reported: report.trajectory.clone(),
        recomputed,
    })
}
