//! The duality operator on families of polytopes and its iteration.
//!
//! `Ω(d)` depends on a direction only through the weak ordering it induces on
//! the ground set, so the dual family is obtained by visiting one
//! representative ray per realizable ordering.

mod oracle;
mod ordering;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use oracle::{
    dual_family_oracle, ordered_set_partitions, realizable_orderings_exhaustive,
    DEFAULT_ORACLE_BOUND,
};
pub use ordering::{
    enumerate_realized, realizable_weak_orderings, witness_direction, RealizedOrdering,
    WeakOrdering,
};

use crate::error::{Error, Result};
use crate::exact::Vector;
use crate::family::{CanonicalFamily, Family, GroundSet, Polytope};

pub const DEFAULT_MAX_ITER: usize = 10_000;

/// `Ω(d)`: the hull of the `d`-active points of every member, stored by its
/// extreme points.
pub fn omega_of_direction(f: &Family, d: &Vector) -> Result<Polytope> {
    let ground = f.ground();
    ground.check_direction(d)?;
    let values = ground.values(d);
    let mut union = BTreeSet::new();
    for p in f.members() {
        let best = p.indices().iter().map(|&i| &values[i]).max().expect("nonempty");
        union.extend(p.indices().iter().copied().filter(|&i| values[i] == *best));
    }
    let union: Vec<usize> = union.into_iter().collect();
    Ok(Polytope::from_sorted(ground.extreme_subset(&union)))
}

/// The dual family `F(ℜ) = {Ω(d)}`.
pub fn dual_family(f: &Family) -> Result<Family> {
    Converter::new(f.ground_arc().clone()).dual(f)
}

/// Iterates `F` from `f0` until an encoding repeats.
pub fn iterate_until_cycle(f0: &Family, max_iter: usize) -> Result<CycleReport> {
    Converter::new(f0.ground_arc().clone()).iterate(f0, max_iter)
}

/// The realizable orderings of one ground set, computed once and reused for
/// every family over it.
#[derive(Debug, Clone)]
pub struct Converter {
    ground: Arc<GroundSet>,
    orderings: Vec<RealizedOrdering>,
    ranks: Vec<Vec<usize>>,
    convex_position: bool,
}

impl Converter {
    pub fn new(ground: Arc<GroundSet>) -> Self {
        let orderings = enumerate_realized(&ground);
        let ranks = orderings.iter().map(|r| r.ordering.ranks()).collect();
        let convex_position = ground.in_convex_position();
        Converter {
            ground,
            orderings,
            ranks,
            convex_position,
        }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn orderings(&self) -> &[RealizedOrdering] {
        &self.orderings
    }

    /// Representative ray of every realizable ordering, in ordering order.
    pub fn directions(&self) -> impl Iterator<Item = &Vector> {
        self.orderings.iter().map(|r| &r.witness)
    }

    fn check_ground(&self, f: &Family) -> Result<()> {
        if Arc::ptr_eq(&self.ground, f.ground_arc()) || *self.ground == *f.ground() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "family is not over this converter's ground set".into(),
            ))
        }
    }

    /// `Ω(d)` for the representative direction of ordering `k`.
    pub fn omega(&self, f: &Family, k: usize) -> Result<Polytope> {
        self.check_ground(f)?;
        let mut memo = HashMap::new();
        Ok(self.omega_ranked(f, &self.ranks[k], &mut memo))
    }

    fn omega_ranked(
        &self,
        f: &Family,
        ranks: &[usize],
        memo: &mut HashMap<Vec<usize>, Vec<usize>>,
    ) -> Polytope {
        let mut hit = vec![false; self.ground.len()];
        for p in f.members() {
            let top = p.indices().iter().map(|&i| ranks[i]).max().expect("nonempty");
            for &i in p.indices() {
                if ranks[i] == top {
                    hit[i] = true;
                }
            }
        }
        let union: Vec<usize> = (0..hit.len()).filter(|&i| hit[i]).collect();
        if self.convex_position || union.len() <= 2 {
            return Polytope::from_sorted(union);
        }
        let reduced = memo
            .entry(union)
            .or_insert_with_key(|u| self.ground.extreme_subset(u))
            .clone();
        Polytope::from_sorted(reduced)
    }

    pub fn dual(&self, f: &Family) -> Result<Family> {
        self.check_ground(f)?;
        let mut memo = HashMap::new();
        let members: BTreeSet<Polytope> = self
            .ranks
            .iter()
            .map(|r| self.omega_ranked(f, r, &mut memo))
            .collect();
        Ok(Family::from_reduced(self.ground.clone(), members))
    }

    pub fn iterate(&self, f0: &Family, max_iter: usize) -> Result<CycleReport> {
        self.check_ground(f0)?;
        let mut seen: HashMap<CanonicalFamily, usize> = HashMap::new();
        let mut families = vec![f0.clone()];
        let mut trajectory = Vec::new();
        loop {
            let n = families.len() - 1;
            let enc = families[n].canonicalize();
            if let Some(&first) = seen.get(&enc) {
                trajectory.push(enc);
                return Ok(CycleReport {
                    trajectory,
                    n0: first,
                    k: n - first,
                    families,
                });
            }
            if n >= max_iter {
                return Err(Error::MaxIterations(max_iter));
            }
            seen.insert(enc.clone(), n);
            trajectory.push(enc);
            let next = self.dual(&families[n])?;
            families.push(next);
        }
    }
}

/// Trajectory `ℜ0, ℜ1, …, ℜ_{n0+k}` with `ℜ_{n0} = ℜ_{n0+k}`; `n0` is the
/// first index that recurs and `k` the cycle length.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycleReport {
    pub trajectory: Vec<CanonicalFamily>,
    pub n0: usize,
    pub k: usize,
    #[serde(skip)]
    pub families: Vec<Family>,
}

impl CycleReport {
    /// Whether the recorded trajectory actually closes as claimed and has no
    /// earlier repeat.
    pub fn is_consistent(&self) -> bool {
        let last = self.n0 + self.k;
        if self.k == 0 || self.trajectory.len() != last + 1 {
            return false;
        }
        if self.trajectory[self.n0] != self.trajectory[last] {
            return false;
        }
        let distinct: std::collections::HashSet<_> = self.trajectory[..last].iter().collect();
        distinct.len() == last
    }

    /// Ground indices used by each family of the trajectory.
    pub fn used_index_sets(&self) -> Vec<Vec<usize>> {
        self.families.iter().map(Family::used_indices).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(dim: usize, pts: &[&[i64]], members: &[&[usize]]) -> Family {
        let g = GroundSet::new(dim, pts.iter().map(|p| Vector::from_integers(p)).collect()).unwrap();
        Family::new(
            Arc::new(g),
            members.iter().map(|m| Polytope::new(m.to_vec()).unwrap()),
        )
        .unwrap()
    }

    fn member_sets(f: &Family) -> Vec<Vec<usize>> {
        f.members().iter().map(|p| p.indices().to_vec()).collect()
    }

    const SQUARE: &[&[i64]] = &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]];

    #[test]
    fn omega_of_square_edges() {
        let f = family(2, SQUARE, &[&[0, 1], &[2, 3]]);
        let p = omega_of_direction(&f, &Vector::from_integers(&[1, 0])).unwrap();
        assert_eq!(p.indices(), &[1, 3]);
        assert!(omega_of_direction(&f, &Vector::from_integers(&[0, 0])).is_err());
    }

    #[test]
    fn singletons_give_the_hull() {
        let f = family(2, SQUARE, &[&[0], &[1], &[2], &[3]]);
        for d in [[1, 0], [-1, 2], [3, 3]] {
            let p = omega_of_direction(&f, &Vector::from_integers(&d)).unwrap();
            assert_eq!(p.indices(), &[0, 1, 2, 3]);
        }
        assert_eq!(member_sets(&dual_family(&f).unwrap()), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn square_dualizes_to_its_proper_faces() {
        let f = family(2, SQUARE, &[&[0, 1, 2, 3]]);
        let d = dual_family(&f).unwrap();
        assert_eq!(
            member_sets(&d),
            vec![vec![0], vec![0, 1], vec![0, 2], vec![1], vec![1, 3], vec![2], vec![2, 3], vec![3]]
        );
    }

    #[test]
    fn one_dimensional_intervals() {
        // [0,1] and [2,3] → {[0,2],[1,3]} → back to the start.
        let f = family(1, &[&[0], &[1], &[2], &[3]], &[&[0, 1], &[2, 3]]);
        let d = dual_family(&f).unwrap();
        assert_eq!(member_sets(&d), vec![vec![0, 2], vec![1, 3]]);
        let rep = iterate_until_cycle(&f, 10).unwrap();
        assert_eq!((rep.n0, rep.k), (0, 2));
        assert!(rep.is_consistent());
    }

    #[test]
    fn triangle_singletons_cycle() {
        let f = family(2, &[&[0, 0], &[1, 0], &[0, 1]], &[&[0], &[1], &[2]]);
        let rep = iterate_until_cycle(&f, 10).unwrap();
        assert_eq!((rep.n0, rep.k), (1, 2));
        assert_eq!(member_sets(&rep.families[1]), vec![vec![0, 1, 2]]);
        assert_eq!(rep.families[2].len(), 6);
        assert_eq!(rep.trajectory[1], rep.trajectory[3]);
    }

    #[test]
    fn segment_hull_returns_in_two_steps() {
        let f = family(1, &[&[0], &[5]], &[&[0, 1]]);
        let rep = iterate_until_cycle(&f, 10).unwrap();
        assert_eq!(rep.trajectory[0], rep.trajectory[2]);
        assert!(rep.k <= 2);
    }

    #[test]
    fn single_point_is_fixed() {
        let f = family(2, &[&[1, 1]], &[&[0]]);
        let rep = iterate_until_cycle(&f, 10).unwrap();
        assert_eq!((rep.n0, rep.k), (0, 1));
    }

    #[test]
    fn max_iter_tripwire() {
        let f = family(2, &[&[0, 0], &[1, 0], &[0, 1]], &[&[0], &[1], &[2]]);
        assert!(matches!(iterate_until_cycle(&f, 1), Err(Error::MaxIterations(1))));
    }

    #[test]
    fn oracle_agrees_on_fixtures() {
        let f = family(2, SQUARE, &[&[0, 1, 2, 3]]);
        assert_eq!(dual_family_oracle(&f, 6).unwrap(), dual_family(&f).unwrap());
        let seg = family(1, &[&[0], &[1]], &[&[0, 1]]);
        assert_eq!(member_sets(&dual_family_oracle(&seg, 6).unwrap()), vec![vec![0], vec![1]]);
        let big = family(1, &[&[0], &[1], &[2], &[3], &[4], &[5], &[6]], &[&[0, 6]]);
        assert!(matches!(dual_family_oracle(&big, 6), Err(Error::OracleBound { .. })));
    }
}
