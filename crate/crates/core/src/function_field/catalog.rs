use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::curve::{count_over_extension, places_of_degree, Curve, CurveSpec, PointCountTables};
use super::FfError;
use crate::gf::BaseField;

/// Largest base field the catalog searches over.
pub const MAX_CATALOG_Q: u32 = 64;

/// Tuple budget below which every Weierstrass coefficient tuple is tried.
const FULL_TUPLE_BUDGET: u64 = 1 << 16;

/// Catalog row: a nonsingular cubic with its numbers of places of degree
/// one and two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub p: u32,
    pub q: u32,
    pub a: [u32; 5],
    pub genus: u32,
    pub n1: u64,
    pub n2: u64,
}

impl CatalogEntry {
    pub fn curve(&self) -> Result<Curve, FfError> {
        Curve::from_spec(&CurveSpec {
            q: self.q,
            genus: 1,
            a: Some(self.a),
        })
    }

    /// `#E(F_{q^k})` from the trace of Frobenius.
    pub fn count_over(&self, k: u32) -> i128 {
        count_over_extension(self.q as u64, self.n1, k)
    }

    /// Number of places of degree `k`.
    pub fn places_of_degree(&self, k: u32) -> i128 {
        places_of_degree(|d| self.count_over(d), k)
    }

    pub fn csv_row(&self) -> String {
        let [a1, a2, a3, a4, a6] = self.a;
        format!(
            "{},{},{a1},{a2},{a3},{a4},{a6},{},{},{}",
            self.p, self.q, self.genus, self.n1, self.n2
        )
    }
}

pub const CSV_HEADER: &str = "p,q,a1,a2,a3,a4,a6,genus,N1,N2";

/// Coefficient tuples to search: all of them when affordable, otherwise a
/// family of normal forms that meets every isomorphism class.
fn candidate_tuples(base: &BaseField) -> Vec<[u32; 5]> {
    let q = base.q();
    let p = base.p();
    let mut out = Vec::new();
    if (q as u64).pow(5) <= FULL_TUPLE_BUDGET {
        let mut idx = 0u64;
        let total = (q as u64).pow(5);
        while idx < total {
            let mut a = [0u32; 5];
            let mut r = idx;
            // a1 is the most significant digit so the order is lexicographic
            for c in a.iter_mut().rev() {
                *c = (r % q as u64) as u32;
                r /= q as u64;
            }
            out.push(a);
            idx += 1;
        }
        return out;
    }
    match p {
        2 => {
            for a2 in 0..q {
                for a6 in 1..q {
                    out.push([1, a2, 0, 0, a6]);
                }
            }
            for a3 in 1..q {
                for a4 in 0..q {
                    for a6 in 0..q {
                        out.push([0, 0, a3, a4, a6]);
                    }
                }
            }
        }
        3 => {
            for a2 in 0..q {
                for a4 in 0..q {
                    for a6 in 0..q {
                        out.push([0, a2, 0, a4, a6]);
                    }
                }
            }
        }
        _ => {
            for a4 in 0..q {
                for a6 in 0..q {
                    out.push([0, 0, 0, a4, a6]);
                }
            }
        }
    }
    out.sort();
    out
}

/// Elliptic curves over `F_q` with at least `min_n1` rational points, sorted
/// by `N1` descending, then coefficients.
pub fn curve_search(q: u32, min_n1: u64) -> Result<Vec<CatalogEntry>, FfError> {
    if q > MAX_CATALOG_Q {
        return Err(FfError::BudgetExceeded(q as u128));
    }
    let base = Arc::new(BaseField::of_order(q as u64)?);
    let tables = PointCountTables::new(&base);
    let mut out = Vec::new();
    for a in candidate_tuples(&base) {
        let Ok(curve) = Curve::weierstrass(base.clone(), a) else {
            continue;
        };
        let n1 = tables.count(&curve);
        if n1 < min_n1 {
            continue;
        }
        let n2 = ((count_over_extension(q as u64, n1, 2) - n1 as i128) / 2) as u64;
        out.push(CatalogEntry {
            p: base.p(),
            q,
            a,
            genus: 1,
            n1,
            n2,
        });
    }
    out.sort_by(|x, y| y.n1.cmp(&x.n1).then(x.a.cmp(&y.a)));
    Ok(out)
}

/// Distinct `(N1, N2)` pairs realised by elliptic curves over `F_q`, each with
/// its first catalog curve.
pub fn distinct_stats(q: u32) -> Result<Vec<CatalogEntry>, FfError> {
    let mut seen = std::collections::BTreeSet::new();
    Ok(curve_search(q, 0)?
        .into_iter()
        .filter(|e| seen.insert((e.n1, e.n2)))
        .collect())
}
