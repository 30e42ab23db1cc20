use std::sync::Arc;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::converter::DEFAULT_MAX_ITER;
use crate::error::{Error, Result};
use crate::exact::{Scalar, Vector};
use crate::family::{Family, GroundSet, Polytope};

/// Largest denominator of generated coordinates.
pub const MAX_DENOMINATOR: i64 = 16;

/// Point proposals allowed per family before giving up.
pub const REJECTION_BUDGET: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Arbitrary nonempty subsets of random grid points.
    Random,
    /// Points in convex position with every subset of one size present.
    H1h2,
    /// Intervals on the line.
    Interval1d,
}

/// Parameters of a batch of trials. `points` is an upper bound: each trial
/// draws its own size (for intervals it bounds the number of intervals).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub shape: Shape,
    pub dimension: usize,
    pub points: usize,
    /// Numerators are drawn from `-coord_bound..=coord_bound`.
    pub coord_bound: i64,
    pub trials: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            shape: Shape::Random,
            dimension: 2,
            points: 6,
            coord_bound: 8,
            trials: 200,
            seed: 0,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(m.to_string()));
        if self.dimension == 0 {
            return bad("dimension must be at least 1");
        }
        if self.trials == 0 {
            return bad("at least one trial is required");
        }
        if self.coord_bound < 1 {
            return bad("coordinate bound must be at least 1");
        }
        match self.shape {
            Shape::Interval1d if self.dimension != 1 => bad("interval families live in dimension 1"),
            Shape::Interval1d if self.points == 0 => bad("at least one interval is required"),
            Shape::H1h2 if self.points < 3 => bad("convex-position suites need at least 3 points"),
            Shape::H1h2 if self.dimension == 1 && self.points > 2 => {
                bad("a line holds at most 2 points in convex position")
            }
            Shape::Random if self.points < 2 => bad("at least 2 points are required"),
            _ => Ok(()),
        }
    }

    /// The generator of one trial: the master seed selects the key, the trial
    /// index the stream.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

fn coordinate(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    let num = rng.random_range(-bound..=bound);
    let den = rng.random_range(1..=MAX_DENOMINATOR);
    Scalar::new(num, den)
}

fn grid_point(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vector {
    Vector::new((0..dim).map(|_| coordinate(rng, bound)).collect())
}

fn distinct_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, bound: i64) -> Result<Vec<Vector>> {
    let mut pts: Vec<Vector> = Vec::with_capacity(count);
    let mut attempts = 0;
    while pts.len() < count {
        attempts += 1;
        if attempts > REJECTION_BUDGET {
            return Err(Error::RejectionBudget(REJECTION_BUDGET));
        }
        let p = grid_point(rng, dim, bound);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    Ok(pts)
}

/// Grows a point set one proposal at a time, rejecting any proposal that
/// would leave some point inside the hull of the others. Restarts after a run
/// of failures, since an unlucky early set can block every extension.
fn convex_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, bound: i64) -> Result<Vec<Vector>> {
    const STALL: usize = 400;
    let mut pts: Vec<Vector> = Vec::with_capacity(count);
    let mut failures = 0;
    for _ in 0..REJECTION_BUDGET {
        if pts.len() == count {
            return Ok(pts);
        }
        let p = grid_point(rng, dim, bound);
        let accepted = !pts.contains(&p) && {
            let mut trial = pts.clone();
            trial.push(p.clone());
            GroundSet::new(dim, trial)?.in_convex_position()
        };
        if accepted {
            pts.push(p);
            failures = 0;
        } else {
            failures += 1;
            if failures == STALL {
                pts.clear();
                failures = 0;
            }
        }
    }
    if pts.len() == count {
        Ok(pts)
    } else {
        Err(Error::RejectionBudget(REJECTION_BUDGET))
    }
}

fn random_subset(rng: &mut ChaCha8Rng, len: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..len).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn build(dim: usize, pts: Vec<Vector>, members: Vec<Vec<usize>>) -> Result<Family> {
    let ground = Arc::new(GroundSet::new(dim, pts)?);
    let members = members
        .into_iter()
        .map(Polytope::new)
        .collect::<Result<Vec<_>>>()?;
    Family::new(ground, members)
}

/// The family of trial `trial`; identical inputs give identical families.
pub fn generate_family(cfg: &TrialConfig, trial: usize) -> Result<Family> {
    cfg.validate()?;
    let mut rng = cfg.rng(trial);
    let (n, b) = (cfg.dimension, cfg.coord_bound);
    match cfg.shape {
        Shape::Random => {
            let count = rng.random_range(2..=cfg.points);
            let pts = distinct_points(&mut rng, n, count, b)?;
            let how_many = rng.random_range(1..=count + 1);
            let members = (0..how_many).map(|_| random_subset(&mut rng, count)).collect();
            // Points no member uses play no role; drop them.
            Ok(build(n, pts, members)?.compact())
        }
        Shape::H1h2 => {
            let count = rng.random_range(3..=cfg.points);
            let pts = convex_points(&mut rng, n, count, b)?;
            let r_min = rng.random_range(2..count);
            let mut members: Vec<Vec<usize>> = (0..count).combinations(r_min).collect();
            let extras = rng.random_range(0..=3);
            for _ in 0..extras {
                let size = rng.random_range(r_min + 1..=count);
                let mut s = sample(&mut rng, count, size).into_vec();
                s.sort_unstable();
                members.push(s);
            }
            build(n, pts, members)
        }
        Shape::Interval1d => {
            let intervals = rng.random_range(1..=cfg.points);
            let mut pts: Vec<Vector> = Vec::new();
            let mut members = Vec::with_capacity(intervals);
            let index_of = |p: Vector, pts: &mut Vec<Vector>| match pts.iter().position(|q| *q == p) {
                Some(i) => i,
                None => {
                    pts.push(p);
                    pts.len() - 1
                }
            };
            for _ in 0..intervals {
                let (a, c) = loop {
                    let a = coordinate(&mut rng, b);
                    let c = coordinate(&mut rng, b);
                    if a != c {
                        break if a < c { (a, c) } else { (c, a) };
                    }
                };
                let ia = index_of(Vector::new(vec![a]), &mut pts);
                let ic = index_of(Vector::new(vec![c]), &mut pts);
                members.push(vec![ia, ic]);
            }
            build(1, pts, members)
        }
    }
}
