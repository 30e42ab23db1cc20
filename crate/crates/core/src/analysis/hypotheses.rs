use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::exact::{lp_feasible, LinearSystem, Scalar};
use crate::family::{Family, GroundSet, Polytope};

/// Smallest number of vertices among the members.
pub fn compute_r_min(f: &Family) -> usize {
    f.members().iter().map(Polytope::len).min().expect("families are nonempty")
}

/// Ground indices that are not vertices of the hull of the ground set.
pub fn check_h1(f: &Family) -> (bool, Vec<usize>) {
    let g = f.ground();
    let offenders: Vec<usize> = (0..g.len())
        .filter(|&i| !g.is_extreme(i).expect("index in range"))
        .collect();
    (offenders.is_empty(), offenders)
}

/// Missing `r_min`-subsets of the ground set, each compared after reduction to
/// its own extreme points.
pub fn check_h2(f: &Family) -> (bool, Vec<Vec<usize>>) {
    let r = compute_r_min(f);
    let g = f.ground();
    let missing: Vec<Vec<usize>> = (0..g.len())
        .combinations(r)
        .filter(|s| !f.contains(&Polytope::from_sorted(g.extreme_subset(s))))
        .collect();
    (missing.is_empty(), missing)
}

/// Whether some ray puts every point of `bottom` strictly below all others.
pub fn is_strict_bottom_set(ground: &GroundSet, bottom: &[usize]) -> bool {
    let mut inside = vec![false; ground.len()];
    for &x in bottom {
        inside[x] = true;
    }
    let mut sys = LinearSystem::new(ground.dimension());
    for &x in bottom {
        for y in (0..ground.len()).filter(|&y| !inside[y]) {
            sys.at_least(ground.point(y).sub(ground.point(x)), Scalar::one());
        }
    }
    lp_feasible(&sys).expect("consistent dimensions").is_some()
}

/// The `r_min`-subsets that some ray isolates strictly at the bottom.
pub fn required_bottom_subsets(f: &Family) -> Vec<Vec<usize>> {
    let r = compute_r_min(f);
    let g = f.ground();
    (0..g.len())
        .combinations(r)
        .filter(|s| is_strict_bottom_set(g, s))
        .collect()
}

/// Like [`check_h2`], restricted to the subsets from [`required_bottom_subsets`].
pub fn check_h2_prime(f: &Family) -> (bool, Vec<Vec<usize>>) {
    let g = f.ground();
    let missing: Vec<Vec<usize>> = required_bottom_subsets(f)
        .into_iter()
        .filter(|s| !f.contains(&Polytope::from_sorted(g.extreme_subset(s))))
        .collect();
    (missing.is_empty(), missing)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub r_min: usize,
    pub h1: bool,
    pub not_extreme: Vec<usize>,
    pub h2: bool,
    pub h2_missing: Vec<Vec<usize>>,
    pub h2_prime: bool,
    pub h2_prime_missing: Vec<Vec<usize>>,
}

pub fn hypothesis_report(f: &Family) -> HypothesisReport {
    let (h1, not_extreme) = check_h1(f);
    let (h2, h2_missing) = check_h2(f);
    let (h2_prime, h2_prime_missing) = check_h2_prime(f);
    HypothesisReport {
        r_min: compute_r_min(f),
        h1,
        not_extreme,
        h2,
        h2_missing,
        h2_prime,
        h2_prime_missing,
    }
}
