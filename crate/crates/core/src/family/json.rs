use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Family, GroundSet, Polytope};
use crate::error::{Error, Result};
use crate::exact::{Scalar, Vector};

/// Wire form of a family:
/// `{ "dimension": N, "points": [["p/q", …], …], "polytopes": [[i, …], …] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub dimension: usize,
    pub points: Vec<Vec<Scalar>>,
    pub polytopes: Vec<Vec<usize>>,
}

impl FamilyJson {
    pub fn into_family(self) -> Result<Family> {
        let n = self.dimension;
        if n == 0 {
            return Err(Error::InvalidFamily("dimension: must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(Error::InvalidFamily("points: must be nonempty".into()));
        }
        let len = self.points.len();
        let ground = GroundSet::new(n, self.points.into_iter().map(Vector::new).collect())?;
        if self.polytopes.is_empty() {
            return Err(Error::InvalidFamily("polytopes: must be nonempty".into()));
        }
        let mut members = Vec::with_capacity(self.polytopes.len());
        for (k, raw) in self.polytopes.into_iter().enumerate() {
            if raw.is_empty() {
                return Err(Error::InvalidFamily(format!("polytopes[{k}]: empty polytope")));
            }
            if let Some((pos, &bad)) = raw.iter().enumerate().find(|(_, &i)| i >= len) {
                return Err(Error::InvalidFamily(format!(
                    "polytopes[{k}][{pos}]: index {bad} out of range ({len} points)"
                )));
            }
            members.push(Polytope::new(raw)?);
        }
        Family::new(Arc::new(ground), members)
    }
}

impl From<&Family> for FamilyJson {
    fn from(f: &Family) -> Self {
        FamilyJson {
            dimension: f.ground().dimension(),
            points: f
                .ground()
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            polytopes: f.members().iter().map(|p| p.indices().to_vec()).collect(),
        }
    }
}
