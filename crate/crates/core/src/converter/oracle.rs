//! Unpruned reference computation of the dual family: every ordered set
//! partition of the ground indices is generated and tested on its own.

use std::collections::BTreeSet;

use super::ordering::{witness_direction, WeakOrdering};
use super::omega_of_direction;
use crate::error::{Error, Result};
use crate::family::{Family, GroundSet};

pub const DEFAULT_ORACLE_BOUND: usize = 6;

/// All ordered set partitions of `0..n`, first block chosen as any nonempty
/// subset (by bitmask) of what remains.
pub fn ordered_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(mask: u32, prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if mask == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut sub = mask;
        while sub != 0 {
            let block: Vec<usize> = (0..32).filter(|b| sub & (1 << b) != 0).collect();
            prefix.push(block);
            go(mask & !sub, prefix, out);
            prefix.pop();
            sub = (sub - 1) & mask;
        }
    }
    assert!(n < 32);
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go((1u32 << n) - 1, &mut Vec::new(), &mut out);
    out
}

/// Realizable orderings found by filtering every ordered partition.
pub fn realizable_orderings_exhaustive(ground: &GroundSet) -> Result<Vec<WeakOrdering>> {
    let mut out = Vec::new();
    for blocks in ordered_set_partitions(ground.len()) {
        let w = WeakOrdering::new(blocks, ground.len())?;
        if witness_direction(&w, ground)?.is_some() {
            out.push(w);
        }
    }
    out.sort();
    Ok(out)
}

/// Dual family by exhaustive enumeration; refuses ground sets above `bound`.
pub fn dual_family_oracle(f: &Family, bound: usize) -> Result<Family> {
    let ground = f.ground();
    if ground.len() > bound {
        return Err(Error::OracleBound {
            size: ground.len(),
            bound,
        });
    }
    let mut members = BTreeSet::new();
    for blocks in ordered_set_partitions(ground.len()) {
        let w = WeakOrdering::new(blocks, ground.len())?;
        if let Some(d) = witness_direction(&w, ground)? {
            members.insert(omega_of_direction(f, &d)?);
        }
    }
    Ok(Family::from_reduced(f.ground_arc().clone(), members))
}
