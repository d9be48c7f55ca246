use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::exact::{epsilon, exact_small};
use super::theorem2::{theorem2_bounds, CurveStats, Theorem2Case};
use super::BoundsError;
use crate::arith;
use crate::ccma::{construct_case1, construct_case3, FormulaFile, SymmetricBilinearFormula, VerifyReport};
use crate::function_field::{distinct_stats, CatalogEntry, Curve, MAX_CATALOG_Q};
use crate::gf::BaseField;

/// Deepest composition chain explored.
pub const MAX_DEPTH: u32 = 3;
/// Largest field over which bounds are evaluated.
pub const MAX_BOUND_FIELD: u64 = 1 << 40;
/// Formulas are constructed when `q^n` is at most this.
pub const MAX_CONSTRUCT_FIELD: u128 = 1 << 10;

/// Place-count arithmetic is exact while `q^n` stays below this.
const COUNTABLE: u128 = 1 << 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    WinogradExact,
    #[serde(rename = "theorem2-case1")]
    Theorem2Case1,
    #[serde(rename = "theorem2-case2")]
    Theorem2Case2,
    #[serde(rename = "theorem2-case3")]
    Theorem2Case3,
    ConstructedFormula,
    ShokrollahiElliptic,
    Composition,
    Schoolbook,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::WinogradExact => "winograd-exact",
            Method::Theorem2Case1 => "theorem2-case1",
            Method::Theorem2Case2 => "theorem2-case2",
            Method::Theorem2Case3 => "theorem2-case3",
            Method::ConstructedFormula => "constructed-formula",
            Method::ShokrollahiElliptic => "shokrollahi-elliptic",
            Method::Composition => "composition",
            Method::Schoolbook => "schoolbook",
        }
    }

    fn from_case(case: Theorem2Case) -> Self {
        match case {
            Theorem2Case::Case1 => Method::Theorem2Case1,
            Theorem2Case::Case2 => Method::Theorem2Case2,
            Theorem2Case::Case3 => Method::Theorem2Case3,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Evidence behind a certificate value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    Exact {
        epsilon: u64,
    },
    Curve {
        stats: CurveStats,
        /// Weierstrass coefficients; absent for the projective line.
        coefficients: Option<[u32; 5]>,
    },
    Composition {
        outer: Box<BoundCertificate>,
        inner: Box<BoundCertificate>,
    },
    Formula {
        formula: FormulaFile,
        report: VerifyReport,
    },
    Schoolbook,
}

/// `mu^sym_q(n) <= value`, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub q: u64,
    pub n: usize,
    pub value: u64,
    pub method: Method,
    pub support: Support,
    /// Some branch was skipped because a field exceeded the budget.
    pub truncated: bool,
}

impl BoundCertificate {
    /// Recomputes the value from the supporting data, recursively.
    pub fn check(&self) -> Result<(), BoundsError> {
        let bad = |m: String| Err(BoundsError::BadCertificate(m));
        match (&self.method, &self.support) {
            (Method::WinogradExact | Method::ShokrollahiElliptic, Support::Exact { epsilon: e }) => {
                if *e != epsilon(self.q)? || exact_small(self.q, self.n)? != Some(self.value) {
                    return bad(format!("exact value for ({}, {}) does not match", self.q, self.n));
                }
                let two_n = 2 * self.n as u64;
                let expected = if self.value == two_n && self.n > 1 {
                    Method::ShokrollahiElliptic
                } else {
                    Method::WinogradExact
                };
                if expected != self.method {
                    return bad(format!("exact value {} carries tag {}", self.value, self.method));
                }
                Ok(())
            }
            (
                Method::Theorem2Case1 | Method::Theorem2Case2 | Method::Theorem2Case3,
                Support::Curve { stats, coefficients },
            ) => {
                let n1 = match coefficients {
                    None => self.q + 1,
                    Some(a) => {
                        let base = Arc::new(BaseField::of_order(self.q)?);
                        Curve::weierstrass(base, *a)?.count_rational_fast()
                    }
                };
                if n1 != stats.n1 || stats.genus != coefficients.is_some() as u32 {
                    return bad("recorded curve data does not match the curve".into());
                }
                let ok = theorem2_bounds(self.q, self.n, stats)
                    .into_iter()
                    .any(|(c, v)| Method::from_case(c) == self.method && v == self.value);
                if ok {
                    Ok(())
                } else {
                    bad(format!("{} does not apply to the recorded curve", self.method))
                }
            }
            (Method::Composition, Support::Composition { outer, inner }) => {
                outer.check()?;
                inner.check()?;
                if outer.q != self.q || inner.n * outer.n != self.n {
                    return bad("composition degrees do not multiply".into());
                }
                if arith::checked_pow(self.q, outer.n as u32) != Some(inner.q as u128) {
                    return bad("inner field is not the outer extension".into());
                }
                if outer.value * inner.value != self.value {
                    return bad("composition value is not the product".into());
                }
                Ok(())
            }
            (Method::ConstructedFormula, Support::Formula { formula, report }) => {
                let f = SymmetricBilinearFormula::from_file(formula).map_err(BoundsError::Ccma)?;
                if f.rank() as u64 != self.value || f.q() as u64 != self.q || f.n() != self.n {
                    return bad("formula does not match the certificate".into());
                }
                let fresh = f.verify(report.mode)?;
                if !(report.pass && fresh.pass) {
                    return bad("formula fails verification".into());
                }
                Ok(())
            }
            (Method::Schoolbook, Support::Schoolbook) => {
                if self.value == (self.n * (self.n + 1) / 2) as u64 {
                    Ok(())
                } else {
                    bad("schoolbook value is n(n+1)/2".into())
                }
            }
            _ => bad(format!("method {} with mismatched support", self.method)),
        }
    }

    /// Number of certificates in the tree.
    pub fn size(&self) -> usize {
        match &self.support {
            Support::Composition { outer, inner } => 1 + outer.size() + inner.size(),
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Memoizing evaluator for `best_bound`.
pub struct BoundEngine {
    constructions: bool,
    bounds: HashMap<(u64, usize, u32), Vec<BoundCertificate>>,
    catalogs: HashMap<u64, Arc<Vec<CatalogEntry>>>,
    formulas: HashMap<(u64, usize), Option<BoundCertificate>>,
}

impl Default for BoundEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl BoundEngine {
    pub fn new() -> Self {
        BoundEngine {
            constructions: true,
            bounds: HashMap::new(),
            catalogs: HashMap::new(),
            formulas: HashMap::new(),
        }
    }

    /// Skips the formula constructions; certificates then come from
    /// arithmetic alone.
    pub fn without_constructions() -> Self {
        BoundEngine {
            constructions: false,
            ..Self::new()
        }
    }

    /// Smallest certified upper bound, ties broken by method priority.
    pub fn best_bound(&mut self, q: u64, n: usize, depth: u32) -> Result<BoundCertificate, BoundsError> {
        let c = self.candidates(q, n, depth)?;
        Ok(c.into_iter().next().expect("schoolbook always applies"))
    }

    /// Every certificate found, best first.
    pub fn candidates(&mut self, q: u64, n: usize, depth: u32) -> Result<Vec<BoundCertificate>, BoundsError> {
        if depth > MAX_DEPTH {
            return Err(BoundsError::DepthTooLarge(depth));
        }
        if n == 0 {
            return Err(BoundsError::ZeroDegree);
        }
        let eps = epsilon(q)?;
        if let Some(c) = self.bounds.get(&(q, n, depth)) {
            return Ok(c.clone());
        }
        let mut out = Vec::new();
        let mut truncated = false;
        let cert = |value: u64, method: Method, support: Support| BoundCertificate {
            q,
            n,
            value,
            method,
            support,
            truncated: false,
        };

        if let Some(v) = exact_small(q, n)? {
            let method = if v == 2 * n as u64 && n > 1 {
                Method::ShokrollahiElliptic
            } else {
                Method::WinogradExact
            };
            out.push(cert(v, method, Support::Exact { epsilon: eps }));
        }

        for (stats, coefficients) in self.curve_stats(q, n)? {
            for (case, v) in theorem2_bounds(q, n, &stats) {
                out.push(cert(
                    v,
                    Method::from_case(case),
                    Support::Curve {
                        stats: stats.clone(),
                        coefficients,
                    },
                ));
            }
        }

        if depth > 0 {
            for a in arith::divisors(n as u64) {
                let a = a as usize;
                if a == 1 || a == n {
                    continue;
                }
                let qa = match arith::checked_pow(q, a as u32) {
                    Some(v) if v <= MAX_BOUND_FIELD as u128 => v as u64,
                    _ => {
                        truncated = true;
                        continue;
                    }
                };
                let outer = self.best_bound(q, a, depth - 1)?;
                let inner = self.best_bound(qa, n / a, depth - 1)?;
                let mut c = cert(
                    outer.value * inner.value,
                    Method::Composition,
                    Support::Composition {
                        outer: Box::new(outer.clone()),
                        inner: Box::new(inner.clone()),
                    },
                );
                c.truncated = outer.truncated || inner.truncated;
                out.push(c);
            }
        }

        if let Some(c) = self.constructed(q, n)? {
            out.push(c);
        }

        out.push(cert((n * (n + 1) / 2) as u64, Method::Schoolbook, Support::Schoolbook));
        out.sort_by_key(|c| (c.value, c.method));
        if truncated {
            for c in out.iter_mut() {
                c.truncated = true;
            }
        }
        self.bounds.insert((q, n, depth), out.clone());
        Ok(out)
    }

    /// The projective line and, for small `q`, one elliptic curve per
    /// distinct `(N1, N2)`.
    fn curve_stats(&mut self, q: u64, n: usize) -> Result<Vec<(CurveStats, Option<[u32; 5]>)>, BoundsError> {
        let countable = arith::checked_pow(q, n as u32).is_some_and(|v| v < COUNTABLE);
        let line_places = match (n, countable) {
            (1, _) => Some(q as u128 + 1),
            (_, true) => Some(arith::count_irreducibles(q, n as u64)),
            _ => None,
        };
        let mut out = vec![(
            CurveStats {
                genus: 0,
                n1: q + 1,
                n2: (q * q - q) / 2,
                nonspecial_available: true,
                degree_n_places: line_places,
            },
            None,
        )];
        for e in self.catalog(q)?.iter() {
            out.push((
                CurveStats {
                    genus: 1,
                    n1: e.n1,
                    n2: e.n2,
                    // degree-zero classes are the rational points
                    nonspecial_available: e.n1 > 1,
                    degree_n_places: countable.then(|| e.places_of_degree(n as u32) as u128),
                },
                Some(e.a),
            ));
        }
        Ok(out)
    }

    fn catalog(&mut self, q: u64) -> Result<Arc<Vec<CatalogEntry>>, BoundsError> {
        if q > MAX_CATALOG_Q as u64 {
            return Ok(Arc::new(Vec::new()));
        }
        if let Some(c) = self.catalogs.get(&q) {
            return Ok(c.clone());
        }
        let c = Arc::new(distinct_stats(q as u32)?);
        self.catalogs.insert(q, c.clone());
        Ok(c)
    }

    /// Lowest-rank verified formula among the interpolation constructions on
    /// the line and on the catalog curve with the most rational points.
    fn constructed(&mut self, q: u64, n: usize) -> Result<Option<BoundCertificate>, BoundsError> {
        if !self.constructions || n < 2 || arith::checked_pow(q, n as u32).is_none_or(|v| v > MAX_CONSTRUCT_FIELD) {
            return Ok(None);
        }
        if let Some(c) = self.formulas.get(&(q, n)) {
            return Ok(c.clone());
        }
        let base = Arc::new(BaseField::of_order(q)?);
        let mut curves = vec![Curve::projective_line(base)];
        if let Some(e) = self.catalog(q)?.iter().max_by_key(|e| (e.n1, std::cmp::Reverse(e.a))) {
            curves.push(e.curve()?);
        }
        let mut best: Option<SymmetricBilinearFormula> = None;
        for curve in &curves {
            for case3 in [false, true] {
                let attempt = if case3 {
                    construct_case3(curve, n)
                } else {
                    construct_case1(curve, n)
                };
                if let Ok(f) = attempt {
                    if best.as_ref().is_none_or(|b| f.rank() < b.rank()) {
                        best = Some(f);
                    }
                }
            }
        }
        let cert = match best {
            None => None,
            Some(f) => {
                let report = f.verify(f.strongest_mode(0))?;
                report.pass.then(|| BoundCertificate {
                    q,
                    n,
                    value: f.rank() as u64,
                    method: Method::ConstructedFormula,
                    support: Support::Formula {
                        formula: f.to_file(),
                        report,
                    },
                    truncated: false,
                })
            }
        };
        self.formulas.insert((q, n), cert.clone());
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_winograd() {
        let mut e = BoundEngine::new();
        let c = e.best_bound(2, 2, 3).unwrap();
        assert_eq!((c.value, c.method), (3, Method::WinogradExact));
        c.check().unwrap();
    }

    #[test]
    fn degree_four_over_f2_composes() {
        let mut e = BoundEngine::new();
        let c = e.best_bound(2, 4, 1).unwrap();
        assert_eq!((c.value, c.method), (9, Method::Composition));
        c.check().unwrap();
        let Support::Composition { outer, inner } = &c.support else {
            panic!("composition support expected")
        };
        assert_eq!((outer.q, outer.n, outer.value), (2, 2, 3));
        assert_eq!((inner.q, inner.n, inner.value), (4, 2, 3));
    }

    #[test]
    fn elliptic_case_one_over_f4() {
        let mut e = BoundEngine::new();
        let c = e.best_bound(4, 4, 2).unwrap();
        assert_eq!((c.value, c.method), (8, Method::Theorem2Case1));
        assert_eq!(exact_small(4, 4).unwrap(), Some(8));
        c.check().unwrap();
        let all = e.candidates(4, 4, 2).unwrap();
        assert!(all.iter().any(|c| c.method == Method::ConstructedFormula && c.value == 8));
    }

    #[test]
    fn degree_three_over_f2_uses_a_formula() {
        let mut e = BoundEngine::new();
        let c = e.best_bound(2, 3, 2).unwrap();
        assert_eq!((c.value, c.method), (6, Method::ConstructedFormula));
        c.check().unwrap();
    }

    #[test]
    fn certificate_json_roundtrip() {
        let mut e = BoundEngine::new();
        let c = e.best_bound(2, 6, 3).unwrap();
        let back: BoundCertificate = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
        back.check().unwrap();
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut e = BoundEngine::new();
        let mut c = e.best_bound(2, 4, 1).unwrap();
        c.value = 8;
        assert!(c.check().is_err());
        let mut c = e.best_bound(4, 3, 0).unwrap();
        c.value -= 1;
        assert!(c.check().is_err());
    }

    #[test]
    fn depth_limit() {
        assert_eq!(
            BoundEngine::new().best_bound(2, 2, 4),
            Err(BoundsError::DepthTooLarge(4))
        );
    }
}
