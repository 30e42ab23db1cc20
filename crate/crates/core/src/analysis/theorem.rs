use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hypotheses::{hypothesis_report, HypothesisReport};
use super::predict::predict_r1_unchecked;
use crate::converter::{dual_family_oracle, Converter};
use crate::error::{Error, Result};
use crate::exact::Vector;
use crate::family::{Family, FamilyJson, Polytope};

/// Ground sets up to this size also get their first dual recomputed by the
/// exhaustive oracle.
pub const THEOREM_ORACLE_BOUND: usize = 5;

/// Which form of the subset hypothesis the run was checked under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetMode {
    /// Every subset of minimal size must be a member.
    AllSubsets,
    /// Only subsets that some ray isolates strictly at the bottom.
    BottomSubsets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionCheck {
    pub direction: Vector,
    pub first: Vec<usize>,
    pub third: Vec<usize>,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub mode: SubsetMode,
    pub hypotheses: HypothesisReport,
    pub r1: FamilyJson,
    pub r2: FamilyJson,
    pub r3: FamilyJson,
    pub r1_equals_r3: bool,
    pub directions: Vec<DirectionCheck>,
    pub directions_agree: bool,
    pub predicted_r1: FamilyJson,
    pub prediction_matches: bool,
    pub r2_members_large: bool,
    /// `None` when the ground set is above [`THEOREM_ORACLE_BOUND`].
    pub oracle_agrees: Option<bool>,
    pub diagnosis: Vec<String>,
    pub passed: bool,
}

/// Computes three successive duals and checks that the first and third agree,
/// direction by direction, that the first matches its closed form, and that
/// every member of the second has at least `r_min` vertices.
pub fn verify_main_theorem(f: &Family, mode: SubsetMode) -> Result<TheoremReport> {
    let hypotheses = hypothesis_report(f);
    if !hypotheses.h1 {
        return Err(Error::NotExtreme {
            offenders: hypotheses.not_extreme.clone(),
        });
    }
    match mode {
        SubsetMode::AllSubsets if !hypotheses.h2 => {
            return Err(Error::Precondition(format!(
                "missing subsets of minimal size: {:?}",
                hypotheses.h2_missing
            )))
        }
        SubsetMode::BottomSubsets if !hypotheses.h2_prime => {
            return Err(Error::Precondition(format!(
                "missing bottom subsets of minimal size: {:?}",
                hypotheses.h2_prime_missing
            )))
        }
        _ => {}
    }
    let conv = Converter::new(Arc::clone(f.ground_arc()));
    let r1 = conv.dual(f)?;
    let r2 = conv.dual(&r1)?;
    let r3 = conv.dual(&r2)?;
    let mut diagnosis = Vec::new();

    let r1_equals_r3 = r1.canonicalize() == r3.canonicalize();
    if !r1_equals_r3 {
        diagnosis.push(format!(
            "first dual has {} members, third has {}; they differ",
            r1.len(),
            r3.len()
        ));
    }

    let mut directions = Vec::with_capacity(conv.orderings().len());
    for (k, rep) in conv.orderings().iter().enumerate() {
        let first = conv.omega(f, k)?;
        let third = conv.omega(&r2, k)?;
        let equal = first == third;
        if !equal {
            diagnosis.push(format!(
                "direction {}: first gives {:?}, third gives {:?}",
                rep.witness,
                first.indices(),
                third.indices()
            ));
        }
        directions.push(DirectionCheck {
            direction: rep.witness.clone(),
            first: first.indices().to_vec(),
            third: third.indices().to_vec(),
            equal,
        });
    }
    let directions_agree = directions.iter().all(|c| c.equal);

    let predicted = predict_r1_unchecked(f);
    let prediction_matches = predicted == r1;
    if !prediction_matches {
        let extra: Vec<_> = predicted.members().difference(r1.members()).collect();
        let missing: Vec<_> = r1.members().difference(predicted.members()).collect();
        diagnosis.push(format!(
            "closed form disagrees with the first dual: predicted only {extra:?}, computed only {missing:?}"
        ));
    }

    let r_min = hypotheses.r_min;
    let small: Vec<&Polytope> = r2.members().iter().filter(|p| p.len() < r_min).collect();
    let r2_members_large = small.is_empty();
    if !r2_members_large {
        diagnosis.push(format!(
            "second dual has members with fewer than {r_min} vertices: {small:?}"
        ));
    }

    let oracle_agrees = if f.ground().len() <= THEOREM_ORACLE_BOUND {
        let agree = dual_family_oracle(f, THEOREM_ORACLE_BOUND)? == r1;
        if !agree {
            diagnosis.push("exhaustive oracle disagrees with the first dual".into());
        }
        Some(agree)
    } else {
        None
    };

    let passed = diagnosis.is_empty();
    Ok(TheoremReport {
        mode,
        hypotheses,
        r1: r1.to_json_value(),
        r2: r2.to_json_value(),
        r3: r3.to_json_value(),
        r1_equals_r3,
        directions,
        directions_agree,
        predicted_r1: predicted.to_json_value(),
        prediction_matches,
        r2_members_large,
        oracle_agrees,
        diagnosis,
        passed,
    })
}
