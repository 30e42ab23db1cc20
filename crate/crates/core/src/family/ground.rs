use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exact::{lp_feasible, LinearSystem, Scalar, Vector};

use super::Polytope;

/// The global point set `E`; polytopes refer to its points by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    dimension: usize,
    points: Vec<Vector>,
}

impl GroundSet {
    /// Validates the dimension of every point and rejects duplicates.
    pub fn new(dimension: usize, points: Vec<Vector>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidFamily("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("ground set needs at least one point"));
        }
        let mut seen = std::collections::HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dimension {
                return Err(Error::InvalidFamily(format!(
                    "points[{i}]: expected {dimension} coordinates, found {}",
                    p.dim()
                )));
            }
            if let Some(j) = seen.insert(p, i) {
                return Err(Error::InvalidFamily(format!(
                    "points[{i}] duplicates points[{j}]"
                )));
            }
        }
        Ok(GroundSet { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn check_direction(&self, d: &Vector) -> Result<()> {
        if d.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: d.dim(),
            });
        }
        if d.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(())
    }

    /// `⟨x, d⟩` for every ground point, in index order.
    pub fn values(&self, d: &Vector) -> Vec<Scalar> {
        self.points.iter().map(|x| x.dot(d)).collect()
    }

    /// Indices of `p` maximizing `⟨x, d⟩`, ties included, ascending.
    pub fn active_set(&self, p: &Polytope, d: &Vector) -> Result<Vec<usize>> {
        self.check_direction(d)?;
        Ok(argmax(p.indices(), |i| self.points[i].dot(d)))
    }

    /// `max ⟨x, d⟩` over the vertices of `p`.
    pub fn support_value(&self, p: &Polytope, d: &Vector) -> Result<Scalar> {
        self.check_direction(d)?;
        Ok(p.indices()
            .iter()
            .map(|&i| self.points[i].dot(d))
            .max()
            .expect("polytopes are nonempty"))
    }

    /// Indices of `p` minimizing `⟨x, d⟩`: the face of `p` with inner normal `d`.
    pub fn face_min(&self, p: &Polytope, d: &Vector) -> Result<Vec<usize>> {
        self.check_direction(d)?;
        Ok(argmax(p.indices(), |i| -self.points[i].dot(d)))
    }

    /// Whether point `i` is a vertex of the convex hull of the whole ground set.
    pub fn is_extreme(&self, i: usize) -> Result<bool> {
        if i >= self.len() {
            return Err(Error::InvalidIndex {
                index: i,
                len: self.len(),
            });
        }
        let others: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        Ok(self.is_extreme_among(i, &others))
    }

    /// Whether point `i` is outside the convex hull of the points `others`,
    /// decided by the feasibility of `Σ λ_j x_j = x_i, Σ λ_j = 1, λ ≥ 0`.
    pub fn is_extreme_among(&self, i: usize, others: &[usize]) -> bool {
        convex_combination(self, i, others).is_none()
    }

    /// The subset of `indices` that are extreme in their own convex hull.
    pub fn extreme_subset(&self, indices: &[usize]) -> Vec<usize> {
        if indices.len() <= 2 {
            return indices.to_vec();
        }
        indices
            .iter()
            .copied()
            .filter(|&i| {
                let others: Vec<usize> = indices.iter().copied().filter(|&j| j != i).collect();
                self.is_extreme_among(i, &others)
            })
            .collect()
    }

    /// Whether every point is a vertex of the hull of the ground set.
    pub fn in_convex_position(&self) -> bool {
        let all: Vec<usize> = (0..self.len()).collect();
        self.extreme_subset(&all).len() == self.len()
    }

    /// A ground set holding only the points at `indices`, in that order.
    pub fn restrict(&self, indices: &[usize]) -> GroundSet {
        GroundSet {
            dimension: self.dimension,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }
}

/// Convex weights over `others` reproducing point `i`, if any exist.
pub(crate) fn convex_combination(ground: &GroundSet, i: usize, others: &[usize]) -> Option<Vector> {
    if others.is_empty() {
        return None;
    }
    let k = others.len();
    let mut sys = LinearSystem::new(k);
    for j in 0..k {
        sys.at_least(Vector::unit(k, j), Scalar::zero());
    }
    sys.equal_to(Vector::new(vec![Scalar::one(); k]), Scalar::one());
    let target = ground.point(i);
    for c in 0..ground.dimension() {
        let row: Vec<Scalar> = others.iter().map(|&j| ground.point(j)[c].clone()).collect();
        sys.equal_to(Vector::new(row), target[c].clone());
    }
    lp_feasible(&sys).expect("system built with consistent dimensions")
}

fn argmax(indices: &[usize], value: impl Fn(usize) -> Scalar) -> Vec<usize> {
    let mut best: Option<Scalar> = None;
    let mut out = Vec::new();
    for &i in indices {
        let v = value(i);
        match &best {
            Some(b) if v < *b => {}
            Some(b) if v == *b => out.push(i),
            _ => {
                best = Some(v);
                out.clear();
                out.push(i);
            }
        }
    }
    out
}

/// Exact deduplication of `points`, optionally keeping only the vertices of
/// their convex hull. First occurrences keep their relative order.
pub fn ground_reduce(points: &[Vector], extreme_only: bool) -> Result<GroundSet> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput("ground_reduce needs at least one point"));
    };
    let mut seen = HashSet::new();
    let unique: Vec<Vector> = points
        .iter()
        .filter(|p| seen.insert(*p))
        .cloned()
        .collect();
    let ground = GroundSet::new(first.dim(), unique)?;
    if !extreme_only {
        return Ok(ground);
    }
    let all: Vec<usize> = (0..ground.len()).collect();
    let keep = ground.extreme_subset(&all);
    Ok(ground.restrict(&keep))
}
