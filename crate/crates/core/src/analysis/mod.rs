//! Hypothesis checks, closed-form predictions of the first two duals, the
//! three-step verifier and the function view of a family.

mod exhauster;
mod hypotheses;
mod predict;
mod theorem;

pub use exhauster::{evaluate_lower, evaluate_upper};
pub use hypotheses::{
    check_h1, check_h2, check_h2_prime, compute_r_min, hypothesis_report, is_strict_bottom_set,
    required_bottom_subsets, HypothesisReport,
};
pub use predict::{faces_of_hull, predict_r1, predict_r2_polytope};
pub use theorem::{
    verify_main_theorem, DirectionCheck, SubsetMode, TheoremReport, THEOREM_ORACLE_BOUND,
};
