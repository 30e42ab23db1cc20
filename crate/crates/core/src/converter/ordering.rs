use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{kernel_direction, lp_feasible, LinearSystem, Scalar, Vector};
use crate::family::GroundSet;

/// Ordered partition of the ground indices: block 0 holds the points with the
/// smallest value of `⟨·, d⟩`, and values increase strictly from block to block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeakOrdering {
    blocks: Vec<Vec<usize>>,
}

impl WeakOrdering {
    /// Validates that `blocks` partitions `0..len` into nonempty parts. Indices
    /// inside each block are sorted.
    pub fn new(mut blocks: Vec<Vec<usize>>, len: usize) -> Result<Self> {
        let mut seen = vec![false; len];
        for (b, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(Error::MalformedPartition(format!("block {b} is empty")));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= len {
                    return Err(Error::MalformedPartition(format!(
                        "index {i} in block {b} is out of range ({len} points)"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::MalformedPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedPartition(format!("index {missing} is missing")));
        }
        Ok(WeakOrdering { blocks })
    }

    /// The tie structure of `values`, ascending.
    pub fn from_values(values: &[Scalar]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match blocks.last_mut() {
                Some(last) if values[last[0]] == values[i] => last.push(i),
                _ => blocks.push(vec![i]),
            }
        }
        WeakOrdering { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block position of every index.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                r[i] = b;
            }
        }
        r
    }
}

/// How the indices after the last chained block relate to it.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tail {
    /// Every tail point strictly above the last block.
    Strict,
    /// Tail points weakly above, and not all tied with it.
    Weak,
}

/// Rows for: ties inside each block, strict increase between consecutive
/// blocks, and the requested relation of `tail` to the last block.
pub(crate) fn chain_system(
    ground: &GroundSet,
    blocks: &[&[usize]],
    tail: Option<(&[usize], Tail)>,
) -> LinearSystem {
    let mut sys = LinearSystem::new(ground.dimension());
    let diff = |a: usize, b: usize| ground.point(a).sub(ground.point(b));
    for block in blocks {
        for &x in &block[1..] {
            sys.equal_to(diff(x, block[0]), Scalar::zero());
        }
    }
    for pair in blocks.windows(2) {
        sys.at_least(diff(pair[1][0], pair[0][0]), Scalar::one());
    }
    if let (Some((rest, mode)), Some(last)) = (tail, blocks.last()) {
        let rep = last[0];
        match mode {
            Tail::Strict => {
                for &q in rest {
                    sys.at_least(diff(q, rep), Scalar::one());
                }
            }
            Tail::Weak => {
                let mut total = Vector::zeros(ground.dimension());
                for &q in rest {
                    let d = diff(q, rep);
                    total = total.add(&d);
                    sys.at_least(d, Scalar::zero());
                }
                sys.at_least(total, Scalar::one());
            }
        }
    }
    sys
}

/// A nonzero direction realizing `w`, or `None` when no ray does.
///
/// Within-block equalities and strict increases across blocks (encoded as
/// `>= 1`) go to the LP; the single-block ordering is decided by a kernel
/// vector of the pairwise differences instead, since the LP alone would accept
/// the zero vector.
pub fn witness_direction(w: &WeakOrdering, ground: &GroundSet) -> Result<Option<Vector>> {
    if w.len() != ground.len() {
        return Err(Error::MalformedPartition(format!(
            "ordering covers {} indices, ground set has {}",
            w.len(),
            ground.len()
        )));
    }
    let blocks: Vec<&[usize]> = w.blocks.iter().map(Vec::as_slice).collect();
    chain_witness(ground, &blocks)
}

fn chain_witness(ground: &GroundSet, blocks: &[&[usize]]) -> Result<Option<Vector>> {
    if let [only] = blocks {
        let diffs: Vec<Vector> = only[1..]
            .iter()
            .map(|&x| ground.point(x).sub(ground.point(only[0])))
            .collect();
        if diffs.is_empty() {
            return Ok(Some(Vector::unit(ground.dimension(), 0)));
        }
        return kernel_direction(&diffs);
    }
    lp_feasible(&chain_system(ground, blocks, None))
}

/// A realizable ordering with its representative direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedOrdering {
    pub ordering: WeakOrdering,
    pub witness: Vector,
}

/// Every weak ordering of the ground set realized by some nonzero ray, sorted.
pub fn realizable_weak_orderings(ground: &GroundSet) -> Vec<WeakOrdering> {
    enumerate_realized(ground)
        .into_iter()
        .map(|r| r.ordering)
        .collect()
}

/// Block-by-block search: a prefix of blocks is extended only while the
/// partial system stays feasible. Candidate next blocks are grown by size from
/// sets that can tie at the bottom of the remaining points (a property closed
/// under taking subsets), then confirmed with the strict system.
pub fn enumerate_realized(ground: &GroundSet) -> Vec<RealizedOrdering> {
    let all: Vec<usize> = (0..ground.len()).collect();
    let mut out = Vec::new();
    let mut prefix: Vec<Vec<usize>> = Vec::new();
    extend(ground, &mut prefix, &all, &mut out);
    out.sort_by(|a, b| a.ordering.cmp(&b.ordering));
    out
}

fn extend(
    ground: &GroundSet,
    prefix: &mut Vec<Vec<usize>>,
    remaining: &[usize],
    out: &mut Vec<RealizedOrdering>,
) {
    // Close the ordering with everything left as one final block.
    prefix.push(remaining.to_vec());
    let blocks: Vec<&[usize]> = prefix.iter().map(Vec::as_slice).collect();
    if let Some(witness) = chain_witness(ground, &blocks).expect("consistent dimensions") {
        out.push(RealizedOrdering {
            ordering: WeakOrdering {
                blocks: prefix.clone(),
            },
            witness,
        });
    }
    prefix.pop();

    for block in proper_next_blocks(ground, prefix, remaining) {
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|i| block.binary_search(i).is_err())
            .collect();
        prefix.push(block);
        extend(ground, prefix, &rest, out);
        prefix.pop();
    }
}

/// Nonempty proper subsets `B` of `remaining` such that the prefix followed by
/// `B` tied, strictly below the rest of `remaining`, is realizable.
fn proper_next_blocks(ground: &GroundSet, prefix: &[Vec<usize>], remaining: &[usize]) -> Vec<Vec<usize>> {
    let m = remaining.len();
    let mut accepted = Vec::new();
    if m < 2 {
        return accepted;
    }
    let mut level: Vec<Vec<usize>> = Vec::new();
    for &x in remaining {
        let cand = vec![x];
        if let Some(w) = bottom_witness(ground, prefix, &cand, remaining) {
            if strict_or_confirm(ground, prefix, &cand, remaining, &w) {
                accepted.push(cand.clone());
            }
            level.push(cand);
        }
    }
    while !level.is_empty() && level[0].len() + 1 < m {
        let known: HashSet<&[usize]> = level.iter().map(Vec::as_slice).collect();
        let mut next = Vec::new();
        for (a_idx, a) in level.iter().enumerate() {
            for b in &level[a_idx + 1..] {
                let s = a.len();
                if a[..s - 1] != b[..s - 1] {
                    // `level` is sorted lexicographically, so later sets cannot share the prefix.
                    break;
                }
                let mut cand = a.clone();
                cand.push(b[s - 1]);
                let all_subsets_known = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    known.contains(sub.as_slice())
                });
                if !all_subsets_known {
                    continue;
                }
                if let Some(w) = bottom_witness(ground, prefix, &cand, remaining) {
                    if strict_or_confirm(ground, prefix, &cand, remaining, &w) {
                        accepted.push(cand.clone());
                    }
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    accepted
}

fn tail_of(block: &[usize], remaining: &[usize]) -> Vec<usize> {
    remaining
        .iter()
        .copied()
        .filter(|i| block.binary_search(i).is_err())
        .collect()
}

/// Feasibility of `block` tying at the weak bottom of `remaining` after the prefix.
fn bottom_witness(
    ground: &GroundSet,
    prefix: &[Vec<usize>],
    block: &[usize],
    remaining: &[usize],
) -> Option<Vector> {
    let rest = tail_of(block, remaining);
    let mut blocks: Vec<&[usize]> = prefix.iter().map(Vec::as_slice).collect();
    blocks.push(block);
    lp_feasible(&chain_system(ground, &blocks, Some((&rest, Tail::Weak)))).expect("consistent dimensions")
}

fn strict_or_confirm(
    ground: &GroundSet,
    prefix: &[Vec<usize>],
    block: &[usize],
    remaining: &[usize],
    weak_witness: &Vector,
) -> bool {
    let rest = tail_of(block, remaining);
    let base = ground.point(block[0]).dot(weak_witness);
    if rest.iter().all(|&q| ground.point(q).dot(weak_witness) > base) {
        return true;
    }
    let mut blocks: Vec<&[usize]> = prefix.iter().map(Vec::as_slice).collect();
    blocks.push(block);
    lp_feasible(&chain_system(ground, &blocks, Some((&rest, Tail::Strict))))
        .expect("consistent dimensions")
        .is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(pts: &[&[i64]]) -> GroundSet {
        GroundSet::new(pts[0].len(), pts.iter().map(|p| Vector::from_integers(p)).collect()).unwrap()
    }

    fn triangle() -> GroundSet {
        ground(&[&[0, 0], &[1, 0], &[0, 1]])
    }

    fn square() -> GroundSet {
        ground(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    #[test]
    fn triangle_witness() {
        let g = triangle();
        let w = WeakOrdering::new(vec![vec![0], vec![1, 2]], 3).unwrap();
        let d = witness_direction(&w, &g).unwrap().unwrap();
        let v = g.values(&d);
        assert!(v[0] < v[1] && v[1] == v[2]);
    }

    #[test]
    fn square_diagonal_ties_are_not_realizable() {
        let g = square();
        let w = WeakOrdering::new(vec![vec![0, 3], vec![1, 2]], 4).unwrap();
        assert_eq!(witness_direction(&w, &g).unwrap(), None);
        let single = WeakOrdering::new(vec![vec![0, 1, 2, 3]], 4).unwrap();
        assert_eq!(witness_direction(&single, &g).unwrap(), None);
    }

    #[test]
    fn collinear_single_block_is_realizable() {
        let g = ground(&[&[0, 0], &[1, 1], &[3, 3]]);
        let single = WeakOrdering::new(vec![vec![0, 1, 2]], 3).unwrap();
        let d = witness_direction(&single, &g).unwrap().unwrap();
        assert!(!d.is_zero());
        let v = g.values(&d);
        assert!(v[0] == v[1] && v[1] == v[2]);
    }

    #[test]
    fn malformed_partitions() {
        assert!(WeakOrdering::new(vec![vec![0], vec![]], 1).is_err());
        assert!(WeakOrdering::new(vec![vec![0, 1], vec![1]], 2).is_err());
        assert!(WeakOrdering::new(vec![vec![0]], 2).is_err());
        assert!(WeakOrdering::new(vec![vec![0, 5]], 2).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let two = ground(&[&[0], &[1]]);
        assert_eq!(realizable_weak_orderings(&two).len(), 2);
        let t = realizable_weak_orderings(&triangle());
        assert_eq!(t.len(), 12);
        assert_eq!(t.iter().filter(|w| w.blocks().len() == 3).count(), 6);
        assert!(t.iter().all(|w| w.blocks().len() > 1));
        let sq = realizable_weak_orderings(&square());
        let diag = WeakOrdering::new(vec![vec![0, 3], vec![1, 2]], 4).unwrap();
        assert!(!sq.contains(&diag));
    }

    #[test]
    fn single_point_has_one_ordering() {
        let g = ground(&[&[3, 4]]);
        let all = enumerate_realized(&g);
        assert_eq!(all.len(), 1);
        assert!(!all[0].witness.is_zero());
    }

    #[test]
    fn witnesses_realize_their_orderings() {
        let g = ground(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        for r in enumerate_realized(&g) {
            assert!(!r.witness.is_zero());
            assert_eq!(WeakOrdering::from_values(&g.values(&r.witness)), r.ordering);
        }
    }
}
