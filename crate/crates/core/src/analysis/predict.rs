//! Closed-form descriptions of the first and second duals of a family that
//! contains every minimal-size subset of an extreme ground set.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::hypotheses::{check_h1, check_h2, compute_r_min};
use crate::converter::enumerate_realized;
use crate::error::{Error, Result};
use crate::exact::{kernel_direction, lp_feasible, LinearSystem, Scalar, Vector};
use crate::family::{Family, GroundSet, Polytope};

/// Every argmax set of a nonzero ray on the ground set, including the whole
/// set when all points share a hyperplane through a common value.
pub fn faces_of_hull(ground: &GroundSet) -> BTreeSet<Polytope> {
    enumerate_realized(ground)
        .into_iter()
        .map(|r| {
            let top = r.ordering.blocks().last().expect("nonempty").clone();
            Polytope::from_sorted(ground.extreme_subset(&top))
        })
        .collect()
}

fn require_theorem_hypotheses(f: &Family) -> Result<()> {
    let (h1, offenders) = check_h1(f);
    if !h1 {
        return Err(Error::NotExtreme { offenders });
    }
    if !check_h2(f).0 {
        return Err(Error::Precondition(
            "the family must contain every subset of minimal size".into(),
        ));
    }
    Ok(())
}

/// Rows in `(d, α)`: points of `low` at most `α − 1`, points of `tied` equal
/// to `α`, everything else at least `α`.
fn gap_system(ground: &GroundSet, low: &[usize], tied: &[usize]) -> LinearSystem {
    let mut role = vec![0u8; ground.len()];
    for &x in low {
        role[x] = 1;
    }
    for &y in tied {
        role[y] = 2;
    }
    let mut sys = LinearSystem::new(ground.dimension() + 1);
    for (i, p) in ground.points().iter().enumerate() {
        match role[i] {
            1 => sys.at_least(p.neg().extended(Scalar::one()), Scalar::one()),
            2 => sys.equal_to(p.extended(-Scalar::one()), Scalar::zero()),
            _ => sys.at_least(p.extended(-Scalar::one()), Scalar::zero()),
        };
    }
    sys
}

/// Whether some ray has a face (of minimizers) holding at least `size` points.
fn hull_has_large_face(ground: &GroundSet, size: usize) -> bool {
    let all_tied = {
        let diffs: Vec<Vector> = (1..ground.len())
            .map(|i| ground.point(i).sub(ground.point(0)))
            .collect();
        diffs.is_empty() || kernel_direction(&diffs).expect("nonempty").is_some()
    };
    if all_tied {
        return true;
    }
    (0..ground.len()).combinations(size).any(|tied| {
        let mut sys = gap_system(ground, &[], &tied);
        let mut total = Vector::zeros(ground.dimension() + 1);
        for i in (0..ground.len()).filter(|i| !tied.contains(i)) {
            total = total.add(&ground.point(i).extended(-Scalar::one()));
        }
        sys.at_least(total, Scalar::one());
        lp_feasible(&sys).expect("consistent dimensions").is_some()
    })
}

/// The first dual of `f`, computed from the geometry of the ground set alone.
///
/// Holds `C` when the hull has a face with at least `r_min` points, and
/// `[E ∖ K]` for every set `K` of fewer than `r_min` points that some ray puts
/// strictly below a tie block filling the positions up to `r_min`.
pub fn predict_r1(f: &Family) -> Result<Family> {
    require_theorem_hypotheses(f)?;
    Ok(predict_r1_unchecked(f))
}

pub(crate) fn predict_r1_unchecked(f: &Family) -> Family {
    let g = f.ground();
    let total = g.len();
    let r = compute_r_min(f);
    let hull = f.hull();
    let members: BTreeSet<Polytope> = if r == 1 {
        BTreeSet::from([hull])
    } else if r == total {
        faces_of_hull(g)
    } else {
        let mut out = BTreeSet::new();
        if hull_has_large_face(g, r) {
            out.insert(hull);
        }
        for k in 1..r {
            for low in (0..total).combinations(k) {
                let rest: Vec<usize> = (0..total).filter(|i| !low.contains(i)).collect();
                let feasible = rest.iter().copied().combinations(r - k).any(|tied| {
                    lp_feasible(&gap_system(g, &low, &tied))
                        .expect("consistent dimensions")
                        .is_some()
                });
                if feasible {
                    out.insert(Polytope::from_sorted(g.extreme_subset(&rest)));
                }
            }
        }
        out
    };
    Family::from_reduced(f.ground_arc().clone(), members)
}

/// The member of the second dual selected by `−d0`: the bottom points of a
/// `d0`-compatible listing up to the end of the tie block at position `r_min`.
///
/// The formula itself needs nothing beyond a nonzero direction; it is only
/// guaranteed to agree with the computed second dual when every ground point
/// is extreme and every subset of minimal size is a member.
pub fn predict_r2_polytope(f: &Family, d0: &Vector) -> Result<Polytope> {
    let g = f.ground();
    g.check_direction(d0)?;
    let r = compute_r_min(f);
    let values = g.values(d0);
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    let pivot = &values[order[r - 1]];
    let last = order.iter().rposition(|&i| values[i] == *pivot).expect("pivot present");
    let mut bottom = order[..=last].to_vec();
    bottom.sort_unstable();
    Ok(Polytope::from_sorted(bottom))
}
