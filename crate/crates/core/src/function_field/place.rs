use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::curve::{check_budget, Affine, Curve};
use super::FfError;
use crate::gf::{poly, ExtElem, ExtField, Field};

/// A closed point of a curve. The residue field is the canonical
/// `F_{q^d}` and, for finite places, the stored representative fixes the
/// identification `O_P/P = F_{q^d}`.
#[derive(Clone, Debug)]
pub struct Place {
    degree: usize,
    kind: PlaceKind,
    field: Arc<ExtField>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Infinite,
    /// Genus 0: monic irreducible `poly` in `x` with the smallest root `root`.
    Line { poly: Vec<u32>, root: ExtElem },
    /// Genus 1: Frobenius orbit with minimal representative `(x, y)`;
    /// `x_poly` is the minimal polynomial of `x` over `F_q`.
    Point { x: ExtElem, y: ExtElem, x_poly: Vec<u32> },
}

/// Serialized place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlaceSpec {
    Infinite,
    Line { poly: Vec<u32> },
    Point { degree: usize, x: Vec<u32>, y: Vec<u32> },
}

impl Place {
    pub fn infinite(curve: &Curve) -> Self {
        Place {
            degree: 1,
            kind: PlaceKind::Infinite,
            field: curve.residue_field(1),
        }
    }

    /// Genus-0 place of a monic irreducible polynomial.
    pub fn from_poly(curve: &Curve, p: &[u32]) -> Result<Self, FfError> {
        if curve.genus() != 0 {
            return Err(FfError::WrongGenus);
        }
        let f = curve.base().as_ref();
        if p.len() < 2 || p.last() != Some(&1) || p.iter().any(|&c| c >= f.q()) || !poly::is_irreducible(f, p) {
            return Err(FfError::NotAPlace(format!("{p:?} is not monic irreducible")));
        }
        let field = curve.residue_field(p.len() - 1);
        Ok(Self::line_in(field, p.to_vec()))
    }

    fn line_in(field: Arc<ExtField>, p: Vec<u32>) -> Self {
        let lifted: Vec<ExtElem> = p.iter().map(|&c| field.embed(c)).collect();
        let r = poly::split_root(field.as_ref(), &lifted).expect("irreducible of degree d splits in F_{q^d}");
        let root = min_by_index(field.as_ref(), field.orbit(&r));
        Place {
            degree: p.len() - 1,
            kind: PlaceKind::Line { poly: p, root },
            field,
        }
    }

    /// Genus-1 place through a point with coordinates in `field`, which must
    /// be the canonical `F_{q^d}` where `d` is the orbit length.
    pub fn from_point(curve: &Curve, field: Arc<ExtField>, pt: &Affine) -> Result<Self, FfError> {
        if curve.genus() != 1 {
            return Err(FfError::WrongGenus);
        }
        if !curve.is_on_curve(&field, pt) {
            return Err(FfError::NotAPlace("point is not on the curve".into()));
        }
        let orbit = point_orbit(&field, pt);
        if orbit.len() != field.degree() {
            return Err(FfError::NotAPlace(format!(
                "orbit length {} differs from residue degree {}",
                orbit.len(),
                field.degree()
            )));
        }
        let (x, y) = orbit
            .into_iter()
            .min_by_key(|(x, y)| (field.index(x), field.index(y)))
            .expect("nonempty orbit");
        let x_poly = field.minimal_polynomial(&x);
        Ok(Place {
            degree: field.degree(),
            kind: PlaceKind::Point { x, y, x_poly },
            field,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn residue_field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, PlaceKind::Infinite)
    }

    /// Representative point (genus 1) or `(root, 0)` (genus 0); `None` at
    /// infinity.
    pub fn point(&self) -> Option<Affine> {
        match &self.kind {
            PlaceKind::Infinite => None,
            PlaceKind::Line { root, .. } => Some((root.clone(), self.field.zero())),
            PlaceKind::Point { x, y, .. } => Some((x.clone(), y.clone())),
        }
    }

    /// Minimal polynomial over `F_q` of the `x`-coordinate.
    pub fn x_poly(&self) -> Option<&[u32]> {
        match &self.kind {
            PlaceKind::Infinite => None,
            PlaceKind::Line { poly, .. } => Some(poly),
            PlaceKind::Point { x_poly, .. } => Some(x_poly),
        }
    }

    /// All conjugate points of the place (genus 1).
    pub fn orbit(&self) -> Vec<Affine> {
        match self.point() {
            None => Vec::new(),
            Some(pt) => point_orbit(&self.field, &pt),
        }
    }

    fn key(&self) -> (usize, u8, u128, u128) {
        match &self.kind {
            PlaceKind::Line { poly, .. } => (self.degree, 0, poly::index(self.field.base().as_ref(), poly), 0),
            PlaceKind::Point { x, y, .. } => (self.degree, 0, self.field.index(x), self.field.index(y)),
            PlaceKind::Infinite => (self.degree, 1, 0, 0),
        }
    }

    pub fn spec(&self) -> PlaceSpec {
        match &self.kind {
            PlaceKind::Infinite => PlaceSpec::Infinite,
            PlaceKind::Line { poly, .. } => PlaceSpec::Line { poly: poly.clone() },
            PlaceKind::Point { x, y, .. } => PlaceSpec::Point {
                degree: self.degree,
                x: x.0.clone(),
                y: y.0.clone(),
            },
        }
    }

    pub fn from_spec(curve: &Curve, spec: &PlaceSpec) -> Result<Self, FfError> {
        match spec {
            PlaceSpec::Infinite => Ok(Self::infinite(curve)),
            PlaceSpec::Line { poly } => Self::from_poly(curve, poly),
            PlaceSpec::Point { degree, x, y } => {
                let field = curve.residue_field(*degree);
                let pt = (field.element(x.clone())?, field.element(y.clone())?);
                let place = Self::from_point(curve, field, &pt)?;
                if place.point() != Some(pt) {
                    return Err(FfError::NotAPlace("point is not the orbit representative".into()));
                }
                Ok(place)
            }
        }
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Place {}

impl Hash for Place {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

fn min_by_index(f: &ExtField, v: Vec<ExtElem>) -> ExtElem {
    v.into_iter().min_by_key(|a| f.index(a)).expect("nonempty")
}

pub(crate) fn point_orbit(f: &ExtField, pt: &Affine) -> Vec<Affine> {
    let mut out = vec![pt.clone()];
    let mut cur = (f.frobenius(&pt.0), f.frobenius(&pt.1));
    while cur != *pt {
        out.push(cur.clone());
        cur = (f.frobenius(&cur.0), f.frobenius(&cur.1));
    }
    out
}

/// Places of degree `d` in canonical order, produced lazily. At most
/// [`ENUMERATION_BUDGET`](super::ENUMERATION_BUDGET) candidates are scanned;
/// the iterator yields an error item if the budget runs out first.
pub fn places_iter(curve: &Curve, d: usize) -> Box<dyn Iterator<Item = Result<Place, FfError>> + '_> {
    assert!(d >= 1, "place degree must be positive");
    let field = curve.residue_field(d);
    let total = field.order();
    let scan = total.min(super::ENUMERATION_BUDGET);
    let truncated = (total > scan).then_some(total);
    let infinity = (d == 1).then(|| Ok(Place::infinite(curve)));
    if curve.genus() == 0 {
        let f = field.clone();
        let it = (0..scan)
            .map(move |idx| poly::monic_from_index(f.base().as_ref(), d, idx))
            .filter(move |p| poly::is_irreducible(curve.base().as_ref(), p))
            .map(move |p| Place::line_in(field.clone(), p));
        Box::new(BudgetGuard { inner: it, truncated }.chain(infinity))
    } else {
        // The x-coordinate of a degree-d point has degree d or d/2 over F_q.
        let q = curve.q() as u128;
        let degrees: Vec<usize> = if d.is_multiple_of(2) { vec![d / 2, d] } else { vec![d] };
        let mut truncated = None;
        let ranges: Vec<(usize, u128)> = degrees
            .into_iter()
            .map(|e| {
                let total = q.checked_pow(e as u32).unwrap_or(u128::MAX);
                let scan = total.min(super::ENUMERATION_BUDGET);
                if total > scan {
                    truncated = Some(total);
                }
                (e, scan)
            })
            .collect();
        let fld = field.clone();
        let it = ranges
            .into_iter()
            .flat_map(|(e, scan)| (0..scan).map(move |idx| (e, idx)))
            .filter_map(move |(e, idx)| {
                let u = poly::monic_from_index(curve.base().as_ref(), e, scramble(idx, q, e));
                poly::is_irreducible(curve.base().as_ref(), &u).then_some((e, u))
            })
            .flat_map(move |(e, u)| {
                let lifted: Vec<ExtElem> = u.iter().map(|&c| fld.embed(c)).collect();
                let x = poly::split_root(fld.as_ref(), &lifted).expect("irreducible of degree e splits in F_{q^d}");
                let mut ys = curve.ys_over(&fld, &x);
                if e < d {
                    // both square roots lie in one Frobenius orbit
                    ys.retain(|y| point_orbit(&fld, &(x.clone(), y.clone())).len() == d);
                    ys.truncate(1);
                }
                let fld2 = fld.clone();
                ys.into_iter().map(move |y| {
                    Place::from_point(curve, fld2.clone(), &(x.clone(), y)).expect("orbit has full length")
                })
            });
        Box::new(BudgetGuard { inner: it, truncated }.chain(infinity))
    }
}

/// Bijection of `0..q^e` spreading consecutive indices over all
/// coefficients. Sparse polynomials such as `x^e + c` have vanishing power
/// sums and rarely carry points, so index order would scan them first.
fn scramble(idx: u128, q: u128, e: usize) -> u128 {
    const MULT: u128 = 0x9e37_79b9_7f4a_7c15;
    let Some(m) = q.checked_pow(e as u32).filter(|&m| m < 1 << 63) else {
        return idx;
    };
    let (p, _) = crate::arith::prime_power(q as u64).expect("field order");
    let mut a = MULT % m;
    while a.is_multiple_of(p as u128) {
        a += 1;
    }
    (a * (idx % m) + MULT / 3) % m
}

/// Passes items through, then yields one budget error if the scan range
/// was truncated.
struct BudgetGuard<I> {
    inner: I,
    truncated: Option<u128>,
}

impl<I: Iterator<Item = Place>> Iterator for BudgetGuard<I> {
    type Item = Result<Place, FfError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.inner.next() {
            Some(p) => Some(Ok(p)),
            None => self.truncated.take().map(|t| Err(FfError::BudgetExceeded(t))),
        }
    }
}

/// Complete list of degree-`d` places; requires `q^d` within budget.
pub fn enumerate_places(curve: &Curve, d: usize) -> Result<Vec<Place>, FfError> {
    let order = (curve.q() as u128)
        .checked_pow(d as u32)
        .ok_or(FfError::BudgetExceeded(u128::MAX))?;
    check_budget(order)?;
    let mut places = places_iter(curve, d).collect::<Result<Vec<_>, _>>()?;
    places.sort();
    Ok(places)
}

/// First place of degree `d` in canonical order, not in `exclude`.
pub fn first_place(curve: &Curve, d: usize, exclude: &[Place]) -> Result<Place, FfError> {
    for p in places_iter(curve, d) {
        let p = p.map_err(|_| FfError::NoPlaceOfDegree(d))?;
        if !exclude.contains(&p) {
            return Ok(p);
        }
    }
    Err(FfError::NoPlaceOfDegree(d))
}
