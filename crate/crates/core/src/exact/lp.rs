//! Exact feasibility for small dense systems of linear constraints over free
//! rational unknowns.
//!
//! Every system is solved with a phase-1 simplex on a rational tableau using
//! Bland's rule, so the verdict and the returned witness are functions of the
//! input rows alone.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Scalar, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub normal: Vector,
    pub relation: Relation,
    pub rhs: Scalar,
}

impl Row {
    pub fn satisfied_by(&self, x: &Vector) -> bool {
        let lhs = self.normal.dot(x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Rows `normal · x (>= | =) rhs` over `dim` free unknowns.
///
/// Strict inequalities are never stored. Callers encode `a·x > b·x` as
/// `(a − b)·x >= 1`, which is sound whenever the question is invariant under
/// positive scaling of `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub dim: usize,
    pub rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        LinearSystem {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn at_least(&mut self, normal: Vector, rhs: Scalar) -> &mut Self {
        self.rows.push(Row {
            normal,
            relation: Relation::Ge,
            rhs,
        });
        self
    }

    pub fn equal_to(&mut self, normal: Vector, rhs: Scalar) -> &mut Self {
        self.rows.push(Row {
            normal,
            relation: Relation::Eq,
            rhs,
        });
        self
    }

    pub fn satisfied_by(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    fn validate(&self) -> Result<()> {
        for row in &self.rows {
            if row.normal.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: row.normal.dim(),
                });
            }
        }
        Ok(())
    }
}

/// Returns an exact witness satisfying every row, or `None` when the system is
/// infeasible.
pub fn lp_feasible(system: &LinearSystem) -> Result<Option<Vector>> {
    system.validate()?;
    let witness = Tableau::phase_one(system);
    debug_assert!(witness.as_ref().is_none_or(|w| system.satisfied_by(w)));
    Ok(witness)
}

struct Tableau {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<Scalar>>,
    /// Phase-1 reduced costs, same width as a row; last entry is `-objective`.
    cost: Vec<Scalar>,
    basis: Vec<usize>,
    /// Columns below this index may enter; artificials sit at or above it.
    first_artificial: usize,
}

impl Tableau {
    fn phase_one(system: &LinearSystem) -> Option<Vector> {
        let n = system.dim;
        let m = system.rows.len();
        if m == 0 {
            return Some(Vector::zeros(n));
        }
        let slacks = system
            .rows
            .iter()
            .filter(|r| r.relation == Relation::Ge)
            .count();
        // x⁺ | x⁻ | slacks | artificials | rhs
        let first_artificial = 2 * n + slacks;
        let width = first_artificial + m + 1;

        let mut rows = Vec::with_capacity(m);
        let mut slack_col = 2 * n;
        for (r, row) in system.rows.iter().enumerate() {
            let mut t = vec![Scalar::zero(); width];
            for (k, a) in row.normal.iter().enumerate() {
                if !a.is_zero() {
                    t[k] = a.clone();
                    t[n + k] = -a;
                }
            }
            if row.relation == Relation::Ge {
                t[slack_col] = Scalar::from_integer(-1);
                slack_col += 1;
            }
            t[width - 1] = row.rhs.clone();
            if row.rhs.is_negative() {
                for e in t.iter_mut() {
                    if !e.is_zero() {
                        *e = -&*e;
                    }
                }
            }
            t[first_artificial + r] = Scalar::one();
            rows.push(t);
        }

        let mut cost = vec![Scalar::zero(); width];
        for t in &rows {
            for (j, e) in t.iter().enumerate() {
                if (j < first_artificial || j == width - 1) && !e.is_zero() {
                    cost[j] -= e;
                }
            }
        }

        let mut tab = Tableau {
            rows,
            cost,
            basis: (0..m).map(|r| first_artificial + r).collect(),
            first_artificial,
        };
        tab.run();

        // cost[rhs] holds minus the sum of artificial values.
        if !tab.cost[width - 1].is_zero() {
            return None;
        }
        let mut x = vec![Scalar::zero(); n];
        for (r, &b) in tab.basis.iter().enumerate() {
            let value = &tab.rows[r][width - 1];
            if b < n {
                x[b] += value;
            } else if b < 2 * n {
                x[b - n] -= value;
            }
        }
        Some(Vector::new(x))
    }

    fn run(&mut self) {
        let rhs = self.cost.len() - 1;
        // Bland: lowest-index improving column, lowest-index basic variable on ratio ties.
        while let Some(enter) = (0..self.first_artificial).find(|&j| self.cost[j].is_negative()) {
            let mut leave: Option<(usize, Scalar)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => match ratio.cmp(best_ratio) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[r] < self.basis[*best],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            // The phase-1 objective is bounded below by zero, so an improving
            // column always has a positive entry.
            let Some((pivot_row, _)) = leave else {
                unreachable!("unbounded phase-1 objective");
            };
            self.pivot(pivot_row, enter);
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        for e in self.rows[pr].iter_mut() {
            if !e.is_zero() {
                *e *= &inv;
            }
        }
        let support: Vec<usize> = self.rows[pr]
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(j, _)| j)
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let eliminate = |target: &mut Vec<Scalar>| {
            let factor = target[pc].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                target[j] -= &(&factor * &pivot_row[j]);
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[pr] = pivot_row;
        self.basis[pr] = pc;
    }
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub(crate) fn rref(m: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for e in m[r].iter_mut() {
            *e *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &(&f * s);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of vectors of equal dimension.
pub fn rank(vectors: &[Vector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut m: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    rref(&mut m, first.dim()).len()
}

/// A nonzero vector orthogonal to every input, or `None` when the inputs span
/// the whole space. The result is the kernel basis vector attached to the
/// first free column of the reduced row echelon form.
pub fn kernel_direction(vectors: &[Vector]) -> Result<Option<Vector>> {
    let Some(first) = vectors.first() else {
        return Err(Error::EmptyInput("kernel_direction needs at least one vector"));
    };
    let dim = first.dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let mut m: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    let pivots = rref(&mut m, dim);
    let Some(free) = (0..dim).find(|c| !pivots.contains(c)) else {
        return Ok(None);
    };
    let mut x = vec![Scalar::zero(); dim];
    x[free] = Scalar::one();
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = -&m[row][free];
    }
    Ok(Some(Vector::new(x)))
}
