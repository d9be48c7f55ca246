//! Rational and elliptic function fields over `F_q`: places, divisors,
//! Riemann–Roch spaces, residue maps and a curve catalog.

mod catalog;
mod curve;
mod divisor;
mod group;
mod place;
mod riemann_roch;

pub use catalog::{curve_search, distinct_stats, CatalogEntry, CSV_HEADER, MAX_CATALOG_Q};
pub use curve::{
    count_over_extension, places_of_degree, Affine, Curve, CurveSpec, PointCountTables, ENUMERATION_BUDGET,
};
pub use divisor::{Divisor, DivisorSpec};
pub use group::{
    add_points, divisor_class_is_principal, find_nonspecial_divisor, negate_point, place_sum, scalar_mul, ECPoint,
};
pub use place::{enumerate_places, first_place, places_iter, Place, PlaceKind, PlaceSpec};
pub use riemann_roch::{evaluate, order_at, riemann_roch_basis, RRBasis, RationalFunction};

use thiserror::Error;

use crate::gf::GfError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("the cubic is singular")]
    Singular,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("operation not available for this genus")]
    WrongGenus,
    #[error("enumeration of {0} elements exceeds the budget")]
    BudgetExceeded(u128),
    #[error("not a place: {0}")]
    NotAPlace(String),
    #[error("no place of degree {0} within budget")]
    NoPlaceOfDegree(usize),
    #[error("function has a pole at the place")]
    Pole,
    #[error("divisor has degree {0}, expected 0")]
    NotDegreeZero(i64),
    #[error("no rational P != O and no suitable degree-2 place: every degree-0 class is principal")]
    NoNonspecialDivisor,
}
