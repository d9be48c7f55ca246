use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::asymptotic::BoundValue;
use super::rational::int;
use super::BoundsError;
use crate::arith;

/// `epsilon(q)`: `2 sqrt(q)` for a square, otherwise the greatest integer
/// at most `2 sqrt(q)` prime to `q`.
pub fn epsilon(q: u64) -> Result<u64, BoundsError> {
    let (p, _) = arith::prime_power(q).ok_or(BoundsError::NotPrimePower(q))?;
    if let Some(r) = arith::exact_sqrt(q) {
        return Ok(2 * r);
    }
    let mut e = arith::isqrt(4 * q);
    while e.is_multiple_of(p) {
        e -= 1;
    }
    Ok(e)
}

/// Known exact values: `2n - 1` when `2n <= q + 2`, `2n` when
/// `q + 2 < 2n < q + 1 + epsilon(q)`.
pub fn exact_small(q: u64, n: usize) -> Result<Option<u64>, BoundsError> {
    let eps = epsilon(q)?;
    let two_n = 2 * n as u64;
    Ok(match n {
        0 => None,
        1 => Some(1),
        _ if two_n <= q + 2 => Some(two_n - 1),
        _ if two_n < q + 1 + eps => Some(two_n),
        _ => None,
    })
}

/// `floor((N1 - 2 g (1 + eps)) / 2)`.
pub fn witness_degree(n1: u64, g: u64, eps: &BigRational) -> i64 {
    let v = (int(n1 as i128) - int(2 * g as i128) * (int(1) + eps)) / int(2);
    v.floor().to_integer().to_i64().expect("fits in i64")
}

/// Drinfeld-Vladut upper bound on `A(q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DvBound {
    pub value: BoundValue,
    pub attained: bool,
}

pub fn drinfeld_vladut(q: u64) -> Result<DvBound, BoundsError> {
    arith::prime_power(q).ok_or(BoundsError::NotPrimePower(q))?;
    Ok(match arith::exact_sqrt(q) {
        Some(r) => DvBound {
            value: BoundValue::Exact(BigRational::from_integer(BigInt::from(r) - 1)),
            attained: true,
        },
        None => DvBound {
            value: BoundValue::Approx((q as f64).sqrt() - 1.0),
            attained: false,
        },
    })
}
