//! Ground sets, polytopes stored as vertex-index sets, families of polytopes
//! and their canonical encodings.

mod ground;
mod json;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use ground::{ground_reduce, GroundSet};
pub use json::FamilyJson;

use crate::error::{Error, Result};

/// A polytope in V-representation: a strictly increasing, nonempty list of
/// ground-set indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Polytope(Vec<usize>);

impl Polytope {
    /// Sorts and deduplicates `indices`; fails when empty.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput("a polytope needs at least one vertex"));
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(Polytope(indices))
    }

    /// Trusted constructor for index lists that are already strictly increasing.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(!indices.is_empty() && indices.windows(2).all(|w| w[0] < w[1]));
        Polytope(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Number of vertices, `r(Ω)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl TryFrom<Vec<usize>> for Polytope {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Polytope::new(v)
    }
}

impl From<Polytope> for Vec<usize> {
    fn from(p: Polytope) -> Vec<usize> {
        p.0
    }
}

/// A finite, deduplicated set of polytopes over one ground set.
#[derive(Clone, Debug)]
pub struct Family {
    ground: Arc<GroundSet>,
    members: BTreeSet<Polytope>,
}

impl Family {
    /// Builds a family, reducing every member to the vertices of its own hull so
    /// that `Polytope::len` counts extreme points exactly.
    pub fn new(ground: Arc<GroundSet>, members: impl IntoIterator<Item = Polytope>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in members {
            if let Some(&bad) = p.indices().iter().find(|&&i| i >= ground.len()) {
                return Err(Error::InvalidIndex {
                    index: bad,
                    len: ground.len(),
                });
            }
            set.insert(Polytope(ground.extreme_subset(p.indices())));
        }
        if set.is_empty() {
            return Err(Error::EmptyInput("a family needs at least one polytope"));
        }
        Ok(Family {
            ground,
            members: set,
        })
    }

    /// Members already known to be valid and reduced.
    pub(crate) fn from_reduced(ground: Arc<GroundSet>, members: BTreeSet<Polytope>) -> Self {
        debug_assert!(!members.is_empty());
        Family { ground, members }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn ground_arc(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn members(&self) -> &BTreeSet<Polytope> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Polytope) -> bool {
        self.members.contains(p)
    }

    /// The polytope on every ground index, `C = conv(E)`.
    pub fn hull(&self) -> Polytope {
        Polytope((0..self.ground.len()).collect())
    }

    /// Ground indices referenced by at least one member, ascending.
    pub fn used_indices(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self
            .members
            .iter()
            .flat_map(|p| p.indices().iter().copied())
            .collect();
        used.into_iter().collect()
    }

    /// Drops ground points no member references and renumbers the rest,
    /// preserving their relative order.
    pub fn compact(&self) -> Family {
        let used = self.used_indices();
        if used.len() == self.ground.len() {
            return self.clone();
        }
        let mut remap = vec![usize::MAX; self.ground.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let members = self
            .members
            .iter()
            .map(|p| Polytope(p.indices().iter().map(|&i| remap[i]).collect()))
            .collect();
        Family::from_reduced(Arc::new(self.ground.restrict(&used)), members)
    }

    pub fn canonicalize(&self) -> CanonicalFamily {
        canonicalize(self)
    }

    pub fn to_json_value(&self) -> FamilyJson {
        FamilyJson::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Family> {
        let raw: FamilyJson = serde_json::from_str(text)?;
        raw.into_family()
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ground, &other.ground) || self.ground == other.ground)
            && self.members == other.members
    }
}

impl Eq for Family {}

/// Byte-exact canonical form of a family: dimension, points in index order,
/// then member index lists in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalFamily(String);

impl CanonicalFamily {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl std::fmt::Display for CanonicalFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Format: `N;x,y|x,y|…;i,j|k|…` with rationals printed as `p` or `p/q`.
pub fn canonicalize(f: &Family) -> CanonicalFamily {
    let mut s = String::new();
    let _ = write!(s, "{};", f.ground.dimension());
    for (i, p) in f.ground.points().iter().enumerate() {
        if i > 0 {
            s.push('|');
        }
        for (k, c) in p.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{c}");
        }
    }
    s.push(';');
    for (m, p) in f.members.iter().enumerate() {
        if m > 0 {
            s.push('|');
        }
        for (k, i) in p.indices().iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{i}");
        }
    }
    CanonicalFamily(s)
}
