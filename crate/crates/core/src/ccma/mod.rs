//! Symmetric bilinear multiplication formulas: interpolation constructions
//! on curves, verification, composition and an exhaustive rank oracle.

mod brute;
mod compose;
mod construct;
mod formula;

pub use brute::{brute_force_symmetric_rank, BruteForceOutcome, BruteForceRank, BRUTE_FORCE_BUDGET};
pub use compose::{compose, identity_formula};
pub use construct::{construct_case1, construct_case3, place_counts, MAX_DIVISOR_CANDIDATES, MAX_Q_PLACES};
pub use formula::{
    schoolbook, ConstructionPlan, FormulaFile, Provenance, SymmetricBilinearFormula, Term, VerifyMode,
    VerifyReport, DEFAULT_SAMPLES, EXHAUSTIVE_LIMIT,
};

use thiserror::Error;

use crate::function_field::FfError;
use crate::gf::GfError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CcmaError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Curve(#[from] FfError),
    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),
    #[error("no place of degree {0} within budget")]
    NoPlaceOfDegree(usize),
    #[error("no full-rank evaluation set found: best rank {best} of {needed}")]
    NoFullRankSelection { best: usize, needed: usize },
    #[error("formula failed verification on {:?}", .0.first_failure)]
    VerificationFailed(VerifyReport),
    #[error("exhaustive verification over {0} elements refused")]
    ExhaustiveTooLarge(u128),
    #[error("tower mismatch: {0}")]
    TowerMismatch(String),
    #[error("search space of {0} exceeds the budget")]
    BudgetExceeded(u128),
    #[error("malformed formula: {0}")]
    Malformed(String),
    #[error("internal error: {0}")]
    Internal(String),
}
