use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Invariants of a function field relevant to the interpolation bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveStats {
    pub genus: u32,
    pub n1: u64,
    pub n2: u64,
    /// A non-special divisor of degree `g - 1` exists.
    pub nonspecial_available: bool,
    /// Number of places of degree `n` when it was counted; otherwise the
    /// sufficient condition on `q`, `n`, `g` decides existence.
    #[serde(with = "decimal")]
    pub degree_n_places: Option<u128>,
}

/// Counts as decimal strings: tagged enums buffer their content, and the
/// buffer has no 128-bit integers.
mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(c) => s.serialize_some(&c.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(D::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem2Case {
    Case1,
    Case2,
    Case3,
}

/// `2g + 1 <= q^((n-1)/2) (sqrt(q) - 1)`, decided in integers.
///
/// With `A = 2g + 1` this reads `A + q^((n-1)/2) <= q^(n/2)`; squaring once
/// leaves `2 A q^((n-1)/2) <= q^n - q^(n-1) - A^2`, and squaring again clears
/// the last root.
pub fn degree_n_place_condition(q: u64, n: usize, g: u32) -> bool {
    if n == 0 {
        return false;
    }
    let a = BigInt::from(2 * g as u64 + 1);
    let qn1 = BigInt::from(q).pow(n as u32 - 1);
    let qn = &qn1 * q;
    let rhs = &qn - &qn1 - &a * &a;
    if rhs < BigInt::from(0) {
        return false;
    }
    BigInt::from(4) * &a * &a * &qn1 <= &rhs * &rhs
}

/// Every case of the interpolation theorem whose hypotheses hold, with its
/// bound.
pub fn theorem2_bounds(q: u64, n: usize, stats: &CurveStats) -> Vec<(Theorem2Case, u64)> {
    let has_place = match stats.degree_n_places {
        Some(c) => c > 0,
        None => degree_n_place_condition(q, n, stats.genus),
    };
    if n < 2 || !has_place {
        return Vec::new();
    }
    let n = n as i128;
    let g = stats.genus as i128;
    let n1 = stats.n1 as i128;
    let n12 = n1 + 2 * stats.n2 as i128;
    let mut out = Vec::new();
    if n1 > 2 * n + 2 * g - 2 {
        out.push((Theorem2Case::Case1, (2 * n + g - 1) as u64));
    }
    if stats.nonspecial_available && n12 > 2 * n + 2 * g - 2 {
        out.push((Theorem2Case::Case2, (3 * n + 3 * g) as u64));
    }
    if n12 > 2 * n + 4 * g - 2 {
        out.push((Theorem2Case::Case3, (3 * n + 6 * g) as u64));
    }
    out
}
