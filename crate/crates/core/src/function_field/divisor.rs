use std::collections::BTreeMap;

use super::curve::Curve;
use super::place::{Place, PlaceSpec};
use super::FfError;

/// Finite formal sum of places with nonzero multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
    degree: i64,
}

/// Serialized divisor: `(place, multiplicity)` pairs in place order.
pub type DivisorSpec = Vec<(PlaceSpec, i64)>;

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_place(p: &Place, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_place(p, n);
        d
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a Place, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, n) in terms {
            d.add_place(p, n);
        }
        d
    }

    pub fn add_place(&mut self, p: &Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(p);
        }
        self.degree += n * p.degree() as i64;
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &n) in &other.terms {
            d.add_place(p, n);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, &n)| (p, n * k)))
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Degree recomputed from the terms.
    pub fn recompute_degree(&self) -> i64 {
        self.terms.iter().map(|(p, &n)| n * p.degree() as i64).sum()
    }

    pub fn multiplicity(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn spec(&self) -> DivisorSpec {
        self.terms.iter().map(|(p, &n)| (p.spec(), n)).collect()
    }

    pub fn from_spec(curve: &Curve, spec: &DivisorSpec) -> Result<Self, FfError> {
        let mut d = Self::zero();
        for (ps, n) in spec {
            d.add_place(&Place::from_spec(curve, ps)?, *n);
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::function_field::enumerate_places;
    use crate::gf::BaseField;

    #[test]
    fn degree_cache_tracks_updates() {
        let c = Curve::projective_line(Arc::new(BaseField::prime(2).unwrap()));
        let p1 = enumerate_places(&c, 1).unwrap();
        let p2 = enumerate_places(&c, 2).unwrap();
        let mut d = Divisor::from_place(&p2[0], 3);
        d.add_place(&p1[2], -2);
        assert_eq!(d.degree(), 4);
        d.add_place(&p2[0], -3);
        assert_eq!(d.degree(), -2);
        assert_eq!(d.recompute_degree(), -2);
        assert_eq!(d.support().count(), 1);
        let back = Divisor::from_spec(&c, &d.spec()).unwrap();
        assert_eq!(back, d);
        assert!(d.sub(&d).is_zero());
    }
}
