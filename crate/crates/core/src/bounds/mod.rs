//! Exact, conditional, composed and asymptotic bounds on the symmetric
//! bilinear complexity, with certificates.

mod asymptotic;
mod engine;
mod exact;
mod rational;
mod theorem2;

pub use asymptotic::{
    asymptotic_bounds, cacr_bounds, comparison_table, AsymptoticRecord, BoundValue, CacrBounds, CompareRow,
    ComparisonTable, MuUse, Quantity, Source, Suppressed, Winner, CROSSOVER_Q, TABLE_HEADER, TABLE_QS,
};
pub use engine::{BoundCertificate, BoundEngine, Method, Support, MAX_BOUND_FIELD, MAX_CONSTRUCT_FIELD, MAX_DEPTH};
pub use exact::{drinfeld_vladut, epsilon, exact_small, witness_degree, DvBound};
pub use rational::round_half_up;
pub use theorem2::{degree_n_place_condition, theorem2_bounds, CurveStats, Theorem2Case};

use thiserror::Error;

use crate::ccma::CcmaError;
use crate::function_field::FfError;
use crate::gf::GfError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("recursion depth {0} exceeds {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("certificate does not check: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Curve(#[from] FfError),
    #[error(transparent)]
    Ccma(#[from] CcmaError),
}
