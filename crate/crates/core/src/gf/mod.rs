//! Exact finite-field arithmetic.
//!
//! A field tower `F_p -> F_q -> F_{q^n}` is modelled by two concrete types:
//! [`BaseField`] (`F_q` over its prime field, table driven, elements are the
//! canonical integer encodings `sum a_i p^i`) and [`ExtField`] (`F_{q^n}` as
//! polynomials over `F_q` modulo a monic irreducible). Polynomial algorithms
//! and linear algebra are written once against the [`Field`] trait.

mod base;
mod ext;
pub mod linalg;
pub mod poly;
pub mod solve;
mod tower;

pub use base::BaseField;
pub use ext::{ExtElem, ExtField};
pub use tower::{FieldTower, Level, TowerElement};

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("defining polynomial is not irreducible")]
    Reducible,
    #[error("defining polynomial must be monic of degree >= 1")]
    BadModulus,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("level mismatch: expected {expected:?}, found {found:?}")]
    LevelMismatch { expected: Level, found: Level },
    #[error("element is not in the subfield")]
    NotInSubfield,
    #[error("field of order {0} exceeds the supported size")]
    TooLarge(u128),
    #[error("invalid element encoding: {0}")]
    InvalidElement(String),
    #[error("incompatible fields")]
    Incompatible,
}

/// Minimal interface shared by `F_q` and its extensions.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn characteristic(&self) -> u32;
    /// Number of elements.
    fn order(&self) -> u128;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, GfError>;
    /// Element with canonical integer encoding `i` (`0 <= i < order`).
    fn from_index(&self, i: u128) -> Self::Elem;
    /// Canonical integer encoding; orders elements deterministically.
    fn index(&self, a: &Self::Elem) -> u128;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_> {
        Box::new((0..self.order()).map(move |i| self.from_index(i)))
    }
}
