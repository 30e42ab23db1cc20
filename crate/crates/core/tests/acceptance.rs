//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact rational equalities; the only pinned tolerances are the runtime
//! budgets below.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polydual::analysis::{
    check_h1, check_h2, check_h2_prime, evaluate_lower, evaluate_upper, predict_r2_polytope,
    required_bottom_subsets, verify_main_theorem, SubsetMode,
};
use polydual::converter::{
    dual_family_oracle, realizable_orderings_exhaustive, realizable_weak_orderings, WeakOrdering,
};
use polydual::harness::{generate_family, run_experiment, Shape, TrialConfig, Verdict};
use polydual::reorder::{locate_strictly_next, make_selection, reorder_to_position, Enumeration};
use polydual::{
    dual_family, iterate_until_cycle, omega_of_direction, Converter, Family, GroundSet, Polytope,
    Scalar, Vector,
};

const SEED: u64 = 20_240_601;
const MAX_ITER: usize = 10_000;

const INTERVAL_FAMILIES: usize = 500;
const INTERVALS_PER_FAMILY: usize = 6;
const PLANAR_SUITES: usize = 100;
const PLANAR_SUITE_POINTS: usize = 7;
const SPATIAL_SUITES: usize = 25;
const SPATIAL_SUITE_POINTS: usize = 6;
const ORACLE_FAMILIES: usize = 50;
const ORACLE_POINTS: usize = 5;
const EVAL_POINTS_PER_FAMILY: usize = 20;
const REORDER_INSTANCES: usize = 200;
const RANDOM_TRIALS: usize = 200;
const RANDOM_POINTS: usize = 6;

const BUDGET_INTERVALS: Duration = Duration::from_secs(30);
const BUDGET_THEOREM: Duration = Duration::from_secs(600);
const BUDGET_ORACLE: Duration = Duration::from_secs(120);
const BUDGET_CONVERTER: Duration = Duration::from_secs(120);
const BUDGET_REORDER: Duration = Duration::from_secs(60);
const BUDGET_EXPERIMENT: Duration = Duration::from_secs(600);

// ---------------------------------------------------------------------------
// Independent reference computations, written without the crate's orderings,
// linear programs or extreme-point tests.

fn cross(a: &Vector, b: &Vector) -> Scalar {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Vertices among `idx` (distinct points), by sorting in 1-D and by a strict
/// monotone chain in 2-D.
fn hull_vertices(ground: &GroundSet, idx: &[usize]) -> Vec<usize> {
    let pt = |i: usize| ground.point(i);
    let mut s: Vec<usize> = idx.to_vec();
    s.sort_by(|&a, &b| pt(a).coords().cmp(pt(b).coords()));
    s.dedup();
    if s.len() <= 2 {
        return s;
    }
    if ground.dimension() == 1 {
        return vec![s[0], s[s.len() - 1]];
    }
    let turn = |o: usize, a: usize, b: usize| cross(&pt(a).sub(pt(o)), &pt(b).sub(pt(o)));
    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for p in iter {
            while h.len() >= 2 && !turn(h[h.len() - 2], h[h.len() - 1], p).is_positive() {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut out = chain(&mut s.iter().copied());
    out.extend(chain(&mut s.iter().rev().copied()));
    out.sort_unstable();
    out.dedup();
    out
}

fn half_plane(v: &Vector) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn by_angle(a: &Vector, b: &Vector) -> Ordering {
    half_plane(a)
        .cmp(&half_plane(b))
        .then_with(|| Scalar::zero().cmp(&cross(a, b)))
}

/// One direction per cell of the arrangement of lines orthogonal to point
/// differences: both rays of every normal and one ray inside every sector.
fn cell_directions(ground: &GroundSet) -> Vec<Vector> {
    match ground.dimension() {
        1 => return vec![Vector::from_integers(&[1]), Vector::from_integers(&[-1])],
        2 => {}
        n => panic!("cell directions are only enumerated in 1-D and 2-D, not {n}-D"),
    }
    let mut normals = Vec::new();
    for i in 0..ground.len() {
        for j in i + 1..ground.len() {
            let w = ground.point(j).sub(ground.point(i));
            let n = Vector::new(vec![-w[1].clone(), w[0].clone()]);
            normals.push(n.neg());
            normals.push(n);
        }
    }
    if normals.is_empty() {
        return vec![Vector::from_integers(&[1, 0])];
    }
    normals.sort_by(by_angle);
    normals.dedup_by(|a, b| by_angle(a, b) == Ordering::Equal);
    let mut out = normals.clone();
    for k in 0..normals.len() {
        let (a, b) = (&normals[k], &normals[(k + 1) % normals.len()]);
        let mid = a.add(b);
        out.push(if mid.is_zero() {
            Vector::new(vec![-a[1].clone(), a[0].clone()])
        } else {
            mid
        });
    }
    out
}

fn omega_direct(f: &Family, d: &Vector) -> Polytope {
    let values = f.ground().values(d);
    let mut active = BTreeSet::new();
    for p in f.members() {
        let top = p.indices().iter().map(|&i| &values[i]).max().unwrap();
        active.extend(p.indices().iter().copied().filter(|&i| values[i] == *top));
    }
    let idx: Vec<usize> = active.into_iter().collect();
    Polytope::new(hull_vertices(f.ground(), &idx)).unwrap()
}

/// Dual family straight from its definition, for ground sets in 1-D or 2-D.
fn dual_direct(f: &Family) -> Family {
    let members: Vec<Polytope> = cell_directions(f.ground())
        .iter()
        .map(|d| omega_direct(f, d))
        .collect();
    Family::new(Arc::clone(f.ground_arc()), members).unwrap()
}

fn upper_direct(f: &Family, x: &Vector) -> Scalar {
    f.members()
        .iter()
        .map(|p| p.indices().iter().map(|&i| f.ground().point(i).dot(x)).max().unwrap())
        .min()
        .unwrap()
}

fn random_scalar(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    Scalar::new(rng.random_range(-bound..=bound), rng.random_range(1..=16))
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vector {
    Vector::new((0..dim).map(|_| random_scalar(rng, bound)).collect())
}

// ---------------------------------------------------------------------------

/// Inside a per-item check returning `Option<String>`, turns an error into a
/// reported failure.
macro_rules! attempt {
    ($e:expr, $who:literal, $n:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Some(format!("{} {}: {}", $who, $n, err)),
        }
    };
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn config(shape: Shape, dimension: usize, points: usize, trials: usize, seed: u64) -> TrialConfig {
    TrialConfig {
        shape,
        dimension,
        points,
        trials,
        seed,
        max_iter: MAX_ITER,
        ..TrialConfig::default()
    }
}

fn generate_all(cfg: &TrialConfig) -> Result<Vec<Family>, String> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| generate_family(cfg, t).map_err(|e| format!("trial {t}: {e}")))
        .collect()
}

/// Families produced by the earlier criteria, reused by the later ones.
#[derive(Default)]
struct Corpus {
    intervals: Vec<Family>,
    suites: Vec<Family>,
    small: Vec<Family>,
    random: Vec<Family>,
}

fn line_intervals(corpus: &mut Corpus) -> Outcome {
    let cfg = config(Shape::Interval1d, 1, INTERVALS_PER_FAMILY, INTERVAL_FAMILIES, SEED);
    let fams = match generate_all(&cfg) {
        Ok(f) => f,
        Err(e) => return outcome(false, e),
    };
    let failures: Vec<String> = fams
        .par_iter()
        .enumerate()
        .filter_map(|(t, f)| {
            let r1 = attempt!(dual_family(f), "family", t);
            let r2 = attempt!(dual_family(&r1), "family", t);
            let r3 = attempt!(dual_family(&r2), "family", t);
            let report = attempt!(iterate_until_cycle(f, MAX_ITER), "family", t);
            let reference = dual_direct(f);
            let ok = r1 == r3 && (1..=2).contains(&report.k) && r1 == reference;
            (!ok).then(|| format!("trial {t}: k={} first=third {}", report.k, r1 == r3))
        })
        .collect();
    corpus.intervals = fams;
    outcome(
        failures.is_empty(),
        format!(
            "{INTERVAL_FAMILIES} interval families, first dual equals third and cycle length in {{1,2}}; failures {:?}",
            failures
        ),
    )
}

fn main_theorem(corpus: &mut Corpus) -> Outcome {
    let mut fams = Vec::new();
    for cfg in [
        config(Shape::H1h2, 2, PLANAR_SUITE_POINTS, PLANAR_SUITES, SEED + 1),
        config(Shape::H1h2, 3, SPATIAL_SUITE_POINTS, SPATIAL_SUITES, SEED + 2),
    ] {
        match generate_all(&cfg) {
            Ok(f) => fams.extend(f),
            Err(e) => return outcome(false, e),
        }
    }
    let failures: Vec<String> = fams
        .par_iter()
        .enumerate()
        .filter_map(|(t, f)| {
            let report = match verify_main_theorem(f, SubsetMode::AllSubsets) {
                Ok(r) => r,
                Err(e) => return Some(format!("family {t}: {e}")),
            };
            let mut ok = report.passed
                && report.r1_equals_r3
                && report.directions_agree
                && report.prediction_matches
                && report.r2_members_large;
            if f.ground().dimension() == 2 {
                ok &= dual_family(f).is_ok_and(|r1| r1 == dual_direct(f));
            }
            (!ok).then(|| format!("family {t}: {:?}", report.diagnosis))
        })
        .collect();
    let planar = fams.iter().filter(|f| f.ground().dimension() == 2).count();
    corpus.suites = fams;
    outcome(
        failures.is_empty(),
        format!(
            "{planar} planar and {} spatial suites pass all four assertions; failures {:?}",
            corpus.suites.len() - planar,
            failures
        ),
    )
}

fn triangle() -> GroundSet {
    GroundSet::new(
        2,
        vec![
            Vector::from_integers(&[0, 0]),
            Vector::from_integers(&[1, 0]),
            Vector::from_integers(&[0, 1]),
        ],
    )
    .unwrap()
}

fn oracle_equivalence(corpus: &mut Corpus) -> Outcome {
    let per = ORACLE_FAMILIES / 3;
    let mut fams = Vec::new();
    for cfg in [
        config(Shape::Random, 2, ORACLE_POINTS, per, SEED + 3),
        config(Shape::Random, 3, ORACLE_POINTS, per, SEED + 4),
        config(Shape::H1h2, 2, ORACLE_POINTS, ORACLE_FAMILIES - 2 * per, SEED + 5),
    ] {
        match generate_all(&cfg) {
            Ok(f) => fams.extend(f),
            Err(e) => return outcome(false, e),
        }
    }
    let failures: Vec<String> = fams
        .par_iter()
        .enumerate()
        .filter_map(|(t, f)| {
            let g = f.ground();
            let fast = attempt!(dual_family(f), "family", t);
            let exhaustive = attempt!(dual_family_oracle(f, ORACLE_POINTS), "family", t);
            let mut ok = fast.canonicalize() == exhaustive.canonicalize();
            if g.dimension() == 2 {
                ok &= fast == dual_direct(f);
            }
            let found = realizable_weak_orderings(g);
            ok &= realizable_orderings_exhaustive(g).is_ok_and(|all| all == found);
            let conv = Converter::new(Arc::clone(f.ground_arc()));
            ok &= conv
                .orderings()
                .iter()
                .all(|r| WeakOrdering::from_values(&g.values(&r.witness)) == r.ordering);
            (!ok).then(|| format!("family {t}"))
        })
        .collect();
    let tri = realizable_weak_orderings(&triangle()).len();
    corpus.small = fams;
    outcome(
        failures.is_empty() && tri == 12,
        format!(
            "{} small families agree with the exhaustive and direct duals; triangle has {tri} realizable orderings (expected 12); failures {:?}",
            corpus.small.len(),
            failures
        ),
    )
}

fn converter_identity(corpus: &Corpus) -> Outcome {
    let fams: Vec<&Family> = corpus
        .intervals
        .iter()
        .chain(&corpus.suites)
        .chain(&corpus.small)
        .collect();
    let failures: Vec<String> = fams
        .par_iter()
        .enumerate()
        .filter_map(|(t, f)| {
            let dual = attempt!(dual_family(f), "family", t);
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
            rng.set_stream(t as u64);
            for _ in 0..EVAL_POINTS_PER_FAMILY {
                let x = random_vector(&mut rng, f.ground().dimension(), 8);
                let up = attempt!(evaluate_upper(f, &x), "family", t);
                let low = attempt!(evaluate_lower(&dual, &x), "family", t);
                if up != low || up != upper_direct(f, &x) {
                    return Some(format!("family {t} at {x}: upper {up}, lower of dual {low}"));
                }
            }
            None
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{} families x {EVAL_POINTS_PER_FAMILY} points, upper of family equals lower of dual; failures {:?}",
            fams.len(),
            failures
        ),
    )
}

/// Direction tying two points in 2-D, or a random one.
fn reorder_direction(rng: &mut ChaCha8Rng, ground: &GroundSet) -> Vector {
    loop {
        let d = if ground.dimension() == 2 && rng.random_bool(0.3) {
            let i = rng.random_range(0..ground.len());
            let j = (i + rng.random_range(1..ground.len())) % ground.len();
            let w = ground.point(j).sub(ground.point(i));
            Vector::new(vec![-w[1].clone(), w[0].clone()])
        } else {
            random_vector(rng, ground.dimension(), 8)
        };
        if !d.is_zero() {
            return d;
        }
    }
}

/// Checks a relocation of the point at `i` to `target` against its contract,
/// reading values off the returned direction afresh.
fn relocation_holds(ground: &GroundSet, before: &Enumeration, i: usize, target: usize, after: &Enumeration) -> bool {
    let x = before.at(i);
    let mut sorted = after.order.clone();
    sorted.sort_unstable();
    if sorted != (0..ground.len()).collect::<Vec<_>>() || after.direction.is_zero() {
        return false;
    }
    let v: Vec<Scalar> = after.order.iter().map(|&j| ground.point(j).dot(&after.direction)).collect();
    let monotone = v.windows(2).all(|w| w[0] <= w[1]);
    let k = target - 1;
    let placed = after.order[k] == x;
    let strict = (k == 0 || v[k - 1] < v[k]) && (k + 1 == v.len() || v[k] < v[k + 1]);
    let prefix = before.order[..i - 1]
        .iter()
        .all(|b| after.order[..k].contains(b));
    monotone && placed && strict && prefix
}

fn reordering(corpus: &Corpus) -> Outcome {
    let grounds: Vec<&Family> = corpus.suites.iter().collect();
    let failures: Vec<String> = (0..REORDER_INSTANCES)
        .into_par_iter()
        .filter_map(|n| {
            let f = grounds[n % grounds.len()];
            let g = f.ground();
            let sel = attempt!(make_selection(g), "instance", n);
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
            rng.set_stream(n as u64);
            loop {
                let d = reorder_direction(&mut rng, g);
                let e = attempt!(Enumeration::compatible(g, &d), "instance", n);
                let v = g.values(&d);
                let i = rng.random_range(1..g.len());
                let x = e.at(i);
                let result = if n % 2 == 0 {
                    if i > 1 && v[e.at(i - 1)] >= v[x] {
                        continue;
                    }
                    locate_strictly_next(g, &e, i, &sel).map(|r| (i + 1, r))
                } else {
                    let p = rng.random_range(i + 1..=g.len());
                    if v[x] >= v[e.at(p)] {
                        continue;
                    }
                    reorder_to_position(g, &e, i, p, &sel).map(|r| (p, r))
                };
                return match result {
                    Ok((target, r)) => (!relocation_holds(g, &e, i, target, &r.enumeration))
                        .then(|| format!("instance {n}: postconditions fail")),
                    Err(err) => Some(format!("instance {n}: {err}")),
                };
            }
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!("{REORDER_INSTANCES} relocations meet position, strictness and prefix containment; failures {:?}", failures),
    )
}

fn cycle_experiment(corpus: &mut Corpus) -> Outcome {
    let cfg = config(Shape::Random, 2, RANDOM_POINTS, RANDOM_TRIALS, SEED + 8);
    let report = match run_experiment(&cfg, true) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    match generate_all(&cfg) {
        Ok(f) => corpus.random = f,
        Err(e) => return outcome(false, e),
    }
    let out_dir = tempfile::tempdir().expect("temporary directory");
    let mut certified = true;
    for c in &report.counterexamples {
        let written = c
            .certificate
            .as_ref()
            .and_then(|cert| cert.write_to(out_dir.path(), &format!("trial-{}", c.trial)).ok());
        certified &= written.is_some() && c.verdict != Verdict::Refuted;
    }
    let consistent = report.trials.iter().all(|t| t.cycle_consistent);
    let long: Vec<_> = report.counterexamples.iter().map(|c| (c.trial, c.verdict)).collect();
    outcome(
        report.errors == 0 && consistent && certified,
        format!(
            "{RANDOM_TRIALS} random planar families all reach a cycle; histogram {:?}; expected support {{1,2}}: {} (reported, not asserted); longer cycles {:?}",
            report.histogram,
            if report.cycles_at_most_two { "observed" } else { "NOT observed" },
            long
        ),
    )
}

fn square_edges() -> Family {
    let g = GroundSet::new(
        2,
        vec![
            Vector::from_integers(&[0, 0]),
            Vector::from_integers(&[1, 0]),
            Vector::from_integers(&[1, 1]),
            Vector::from_integers(&[0, 1]),
        ],
    )
    .unwrap();
    let edges = [[0, 1], [1, 2], [2, 3], [0, 3]];
    Family::new(Arc::new(g), edges.iter().map(|e| Polytope::new(e.to_vec()).unwrap())).unwrap()
}

fn all_families(corpus: &Corpus) -> Vec<&Family> {
    corpus
        .intervals
        .iter()
        .chain(&corpus.suites)
        .chain(&corpus.small)
        .chain(&corpus.random)
        .collect()
}

fn hypothesis_logic(corpus: &Corpus) -> Outcome {
    let fams = all_families(corpus);
    let violations = fams
        .par_iter()
        .filter(|f| check_h2(f).0 && !check_h2_prime(f).0)
        .count();
    let sq = square_edges();
    let (h2, missing) = check_h2(&sq);
    let required = required_bottom_subsets(&sq);
    let edges = vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]];
    let square_ok = !h2 && missing == vec![vec![0, 2], vec![1, 3]] && check_h2_prime(&sq).0 && required == edges;
    outcome(
        violations == 0 && square_ok,
        format!(
            "full-subset hypothesis implies bottom-subset one on {} families ({violations} violations); square requires {:?}, diagonals {:?} not required",
            fams.len(),
            required,
            missing
        ),
    )
}

fn used_set_stability(corpus: &Corpus) -> Outcome {
    let fams = all_families(corpus);
    let results: Vec<(bool, bool, bool)> = fams
        .par_iter()
        .map(|f| {
            let Ok(report) = iterate_until_cycle(f, MAX_ITER) else {
                return (false, false, false);
            };
            let used = report.used_index_sets();
            let nested = used
                .windows(2)
                .all(|w| w[1].iter().all(|i| w[0].contains(i)));
            let all: Vec<usize> = (0..f.ground().len()).collect();
            let applies = check_h1(f).0 && f.used_indices() == all;
            let stable = !applies || used.iter().all(|u| *u == all);
            (nested, applies, stable)
        })
        .collect();
    let nested = results.iter().filter(|r| r.0).count();
    let applies = results.iter().filter(|r| r.1).count();
    let stable = results.iter().filter(|r| r.2).count();
    outcome(
        nested == fams.len() && stable == fams.len(),
        format!(
            "{nested}/{} trajectories have nested used sets; {applies} with all points extreme, unstable {}",
            fams.len(),
            fams.len() - stable
        ),
    )
}

fn second_dual_predictor(corpus: &Corpus) -> Outcome {
    let results: Vec<(usize, Vec<String>)> = corpus
        .suites
        .par_iter()
        .enumerate()
        .map(|(t, f)| {
            let conv = Converter::new(Arc::clone(f.ground_arc()));
            let Ok(r1) = conv.dual(f) else {
                return (0, vec![format!("family {t}: dual failed")]);
            };
            let mut bad = Vec::new();
            let mut count = 0;
            for d0 in conv.directions() {
                count += 1;
                let predicted = predict_r2_polytope(f, d0);
                let actual = omega_of_direction(&r1, &d0.neg());
                if predicted.as_ref().ok() != actual.as_ref().ok() || predicted.is_err() {
                    bad.push(format!("family {t} direction {d0}"));
                }
            }
            (count, bad)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    outcome(
        failures.is_empty(),
        format!("{checked} representative directions over {} suites; failures {:?}", corpus.suites.len(), failures),
    )
}

fn main() -> ExitCode {
    let mut corpus = Corpus::default();
    let mut all_passed = true;
    let mut run = |id: u8, name: &str, budget: Option<Duration>, f: &mut dyn FnMut(&mut Corpus) -> Outcome| {
        let start = Instant::now();
        let o = f(&mut corpus);
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = o.passed && in_time;
        all_passed &= passed;
        let budget_note = match budget {
            Some(b) => format!("{:.1}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.1}s", elapsed.as_secs_f64()),
        };
        println!(
            "{} criterion {id} ({name}) [{budget_note}]: {}",
            if passed { "PASS" } else { "FAIL" },
            o.detail
        );
    };
    run(1, "line theorem", Some(BUDGET_INTERVALS), &mut line_intervals);
    run(2, "main theorem", Some(BUDGET_THEOREM), &mut main_theorem);
    run(3, "oracle equivalence", Some(BUDGET_ORACLE), &mut oracle_equivalence);
    run(4, "converter identity", Some(BUDGET_CONVERTER), &mut |c| converter_identity(c));
    run(5, "reordering", Some(BUDGET_REORDER), &mut |c| reordering(c));
    run(6, "cycle experiment", Some(BUDGET_EXPERIMENT), &mut cycle_experiment);
    run(7, "hypothesis logic", None, &mut |c| hypothesis_logic(c));
    run(8, "used-set stability", None, &mut |c| used_set_stability(c));
    run(9, "second-dual predictor", None, &mut |c| second_dual_predictor(c));
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
