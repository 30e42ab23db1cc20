//! Exact perturbation of directions that moves one ground point to a chosen
//! position of a compatible enumeration, strictly separated from its
//! neighbours.
//!
//! Every order change along a line `base + t·axis` happens at a finite set of
//! critical parameters, so instead of tracking small constants we step to
//! midpoints between consecutive critical values and check the result.
//!
//! Positions are 1-based throughout, ground indices are 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{lp_feasible, LinearSystem, Scalar, Vector};
use crate::family::GroundSet;

/// A strictly exposing ray for every ground point: `⟨x − y, e_x⟩ ≥ 1` for all
/// `y ≠ x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    rays: Vec<Vector>,
}

impl Selection {
    pub fn ray(&self, x: usize) -> &Vector {
        &self.rays[x]
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    /// Rechecks the margin condition exactly.
    pub fn is_valid_for(&self, ground: &GroundSet) -> bool {
        self.rays.len() == ground.len()
            && self.rays.iter().enumerate().all(|(x, e)| {
                !e.is_zero()
                    && (0..ground.len()).filter(|&y| y != x).all(|y| {
                        ground.point(x).sub(ground.point(y)).dot(e) >= Scalar::one()
                    })
            })
    }
}

pub fn make_selection(ground: &GroundSet) -> Result<Selection> {
    let n = ground.dimension();
    if ground.len() == 1 {
        return Ok(Selection {
            rays: vec![Vector::unit(n, 0)],
        });
    }
    let mut rays = Vec::with_capacity(ground.len());
    let mut offenders = Vec::new();
    for x in 0..ground.len() {
        let mut sys = LinearSystem::new(n);
        for y in (0..ground.len()).filter(|&y| y != x) {
            sys.at_least(ground.point(x).sub(ground.point(y)), Scalar::one());
        }
        match lp_feasible(&sys)? {
            Some(e) => rays.push(e),
            None => offenders.push(x),
        }
    }
    if !offenders.is_empty() {
        return Err(Error::NotExtreme { offenders });
    }
    Ok(Selection { rays })
}

/// `D(t) = base + t·axis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationLine {
    pub base: Vector,
    pub axis: Vector,
}

impl PerturbationLine {
    pub fn new(base: Vector, axis: Vector) -> Result<Self> {
        if axis.is_zero() {
            return Err(Error::ZeroDirection);
        }
        if base.dim() != axis.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: axis.dim(),
            });
        }
        Ok(PerturbationLine { base, axis })
    }

    pub fn at(&self, t: &Scalar) -> Vector {
        self.base.add(&self.axis.scale(t))
    }
}

/// Every `t` at which two ground points swap or tie along the line, ascending
/// and deduplicated. Pairs that are tied for all `t` contribute nothing.
pub fn critical_parameters(line: &PerturbationLine, ground: &GroundSet) -> Vec<Scalar> {
    let base = ground.values(&line.base);
    let slope = ground.values(&line.axis);
    let mut out = Vec::new();
    for a in 0..ground.len() {
        for b in a + 1..ground.len() {
            let s = &slope[a] - &slope[b];
            if !s.is_zero() {
                out.push(-(&base[a] - &base[b]) / s);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A listing of the ground indices in nondecreasing order of `⟨x, d⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub order: Vec<usize>,
    pub direction: Vector,
}

impl Enumeration {
    /// The compatible enumeration with ties broken by ascending index.
    pub fn compatible(ground: &GroundSet, d: &Vector) -> Result<Self> {
        ground.check_direction(d)?;
        Ok(Self::sorted(ground, d.clone()))
    }

    fn sorted(ground: &GroundSet, d: Vector) -> Self {
        let values = ground.values(&d);
        let mut order: Vec<usize> = (0..ground.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        Enumeration {
            order,
            direction: d,
        }
    }

    /// Validates a caller-supplied order against its direction.
    pub fn new(ground: &GroundSet, order: Vec<usize>, d: Vector) -> Result<Self> {
        ground.check_direction(&d)?;
        let e = Enumeration {
            order,
            direction: d,
        };
        if !e.is_permutation(ground.len()) {
            return Err(Error::Precondition(
                "order must list every ground index exactly once".into(),
            ));
        }
        if !e.is_compatible(ground) {
            return Err(Error::Precondition(
                "order is not compatible with the direction".into(),
            ));
        }
        Ok(e)
    }

    fn is_permutation(&self, len: usize) -> bool {
        let mut seen = vec![false; len];
        self.order.len() == len
            && self
                .order
                .iter()
                .all(|&x| x < len && !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_compatible(&self, ground: &GroundSet) -> bool {
        let values = ground.values(&self.direction);
        self.order.len() == ground.len()
            && self.order.windows(2).all(|w| values[w[0]] <= values[w[1]])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Ground index at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.order[pos - 1]
    }

    /// 1-based position of ground index `x`.
    pub fn position_of(&self, x: usize) -> Option<usize> {
        self.order.iter().position(|&y| y == x).map(|p| p + 1)
    }

    /// Whether the element at `pos` is strictly above its predecessor and
    /// strictly below its successor.
    pub fn strictly_located(&self, ground: &GroundSet, pos: usize) -> bool {
        let v = |p: usize| ground.point(self.at(p)).dot(&self.direction);
        let here = v(pos);
        (pos == 1 || v(pos - 1) < here) && (pos == self.len() || here < v(pos + 1))
    }
}

/// Outcome of a relocation, with the number of elementary moves used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relocation {
    pub enumeration: Enumeration,
    pub next_steps: usize,
    pub adjustments: usize,
}

impl Relocation {
    pub fn direction(&self) -> &Vector {
        &self.enumeration.direction
    }
}

fn check_position(e: &Enumeration, pos: usize, what: &str) -> Result<()> {
    if pos == 0 || pos > e.len() {
        return Err(Error::Precondition(format!(
            "{what} {pos} outside 1..={}",
            e.len()
        )));
    }
    Ok(())
}

fn check_enumeration(ground: &GroundSet, e: &Enumeration) -> Result<()> {
    ground.check_direction(&e.direction)?;
    if !e.is_permutation(ground.len()) || !e.is_compatible(ground) {
        return Err(Error::Precondition(
            "enumeration is not compatible with its direction".into(),
        ));
    }
    Ok(())
}

/// Moves `x_i` to position `i + 1`, strictly between its neighbours, keeping
/// every element below position `i` below it.
///
/// Requires `x_{i−1} < x_i` strictly (vacuous for `i = 1`).
pub fn locate_strictly_next(
    ground: &GroundSet,
    e: &Enumeration,
    i: usize,
    sel: &Selection,
) -> Result<Relocation> {
    check_enumeration(ground, e)?;
    check_position(e, i, "position")?;
    if i == e.len() {
        return Err(Error::Precondition(format!(
            "position {i} is the last one; there is no next position"
        )));
    }
    let values = ground.values(&e.direction);
    let x = e.at(i);
    if i > 1 && values[e.at(i - 1)] >= values[x] {
        return Err(Error::Precondition(format!(
            "element at position {} must lie strictly below the one at position {i}",
            i - 1
        )));
    }
    let below: Vec<usize> = e.order[..i - 1].to_vec();
    let mut adjustments = 0;
    let mut d = e.direction.clone();

    if values[x] < values[e.at(i + 1)] {
        // Raise x until it first ties with something above.
        let axis = sel.ray(x);
        let mut t0: Option<Scalar> = None;
        for &y in &e.order[i..] {
            let gap = ground.point(y).sub(ground.point(x));
            let rate = -gap.dot(axis);
            let t = gap.dot(&d) / rate;
            if t0.as_ref().is_none_or(|cur| t < *cur) {
                t0 = Some(t);
            }
        }
        d = d.add_scaled(&t0.expect("i < R"), axis);
        adjustments += 1;
    }

    let d = tie_to_next(ground, &d, x, &below, sel)?;
    let enumeration = Enumeration::sorted(ground, d);
    let out = Relocation {
        enumeration,
        next_steps: 1,
        adjustments,
    };
    verify_location(ground, &out.enumeration, x, i + 1, &below)?;
    Ok(out)
}

/// The tied case: `below < x` strictly, `x` tied with at least one other
/// element, everything else at or above `x`. `d` may be zero when `below`
/// is empty.
fn tie_to_next(
    ground: &GroundSet,
    d: &Vector,
    x: usize,
    below: &[usize],
    sel: &Selection,
) -> Result<Vector> {
    let line = PerturbationLine {
        base: d.clone(),
        axis: sel.ray(x).clone(),
    };
    let crit = critical_parameters(&line, ground);
    let t_c = crit.iter().rev().find(|t| t.is_negative()).cloned();
    let mut t0 = match &t_c {
        Some(c) => Scalar::midpoint(c, &Scalar::zero()),
        None => Scalar::from_integer(-1),
    };
    let two = Scalar::from_integer(2);
    let mut in_below = vec![false; ground.len()];
    for &b in below {
        in_below[b] = true;
    }

    for _ in 0..256 {
        let d1 = line.at(&t0);
        let v1 = ground.values(&d1);
        // Smallest-index minimiser of everything not below x.
        let y = (0..ground.len())
            .filter(|&z| z != x && !in_below[z])
            .min_by(|&a, &b| v1[a].cmp(&v1[b]).then(a.cmp(&b)))
            .ok_or_else(|| Error::Internal("no element above the moved point".into()))?;
        let ey = sel.ray(y);
        let gap = ground.point(y).sub(ground.point(x));
        let s1 = -gap.dot(&d1) / gap.dot(ey);
        let line2 = PerturbationLine {
            base: d1.clone(),
            axis: ey.clone(),
        };
        let at_tie = line2.at(&s1);
        let vx = ground.point(x).dot(&at_tie);
        if below.iter().any(|&b| ground.point(b).dot(&at_tie) >= vx) {
            t0 = &t0 / &two;
            continue;
        }
        let crit2 = critical_parameters(&line2, ground);
        let s2 = match crit2.iter().rev().find(|s| **s < s1) {
            Some(prev) => Scalar::midpoint(prev, &s1),
            None => &s1 - &Scalar::one(),
        };
        return Ok(line2.at(&s2));
    }
    Err(Error::Internal(
        "could not separate the moved point from the elements below it".into(),
    ))
}

fn verify_location(
    ground: &GroundSet,
    e: &Enumeration,
    x: usize,
    pos: usize,
    below: &[usize],
) -> Result<()> {
    let ok = !e.direction.is_zero()
        && e.is_compatible(ground)
        && e.at(pos) == x
        && e.strictly_located(ground, pos)
        && below.iter().all(|&b| e.position_of(b).is_some_and(|p| p < pos));
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "relocation postconditions failed for point {x} at position {pos}"
        )))
    }
}

/// Moves `x_i` to position `p > i`, strictly located, with every element
/// listed before position `i` ending up before position `p`.
///
/// Requires `⟨x_i, d⟩ < ⟨x_p, d⟩`.
pub fn reorder_to_position(
    ground: &GroundSet,
    e: &Enumeration,
    i: usize,
    p: usize,
    sel: &Selection,
) -> Result<Relocation> {
    check_enumeration(ground, e)?;
    check_position(e, i, "position")?;
    check_position(e, p, "target position")?;
    if i >= p {
        return Err(Error::Precondition(format!(
            "target position {p} must exceed the start position {i}"
        )));
    }
    let values = ground.values(&e.direction);
    let x = e.at(i);
    if values[x] >= values[e.at(p)] {
        return Err(Error::Precondition(format!(
            "element at position {i} must lie strictly below the one at position {p}"
        )));
    }
    let prefix: Vec<usize> = e.order[..i - 1].to_vec();
    let mut adjustments = 0;
    let (mut cur, mut pos) = if i == 1 || values[e.at(i - 1)] < values[x] {
        (e.clone(), i)
    } else {
        // Lift x just above its tie block without reaching the next change.
        let line = PerturbationLine {
            base: e.direction.clone(),
            axis: sel.ray(x).clone(),
        };
        let crit = critical_parameters(&line, ground);
        let t0 = match crit.iter().find(|t| t.is_positive()) {
            Some(c) => Scalar::midpoint(&Scalar::zero(), c),
            None => Scalar::one(),
        };
        adjustments += 1;
        let lifted = Enumeration::sorted(ground, line.at(&t0));
        let k = lifted.position_of(x).expect("permutation");
        if k >= p || !lifted.strictly_located(ground, k) {
            return Err(Error::Internal(
                "lifting the tied point overshot the target".into(),
            ));
        }
        (lifted, k)
    };
    let mut next_steps = 0;
    while pos < p {
        let step = locate_strictly_next(ground, &cur, pos, sel)?;
        adjustments += step.adjustments;
        next_steps += 1;
        cur = step.enumeration;
        pos += 1;
    }
    verify_location(ground, &cur, x, p, &prefix)?;
    Ok(Relocation {
        enumeration: cur,
        next_steps,
        adjustments,
    })
}
