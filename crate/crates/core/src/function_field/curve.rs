use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FfError;
use crate::gf::{poly, solve, BaseField, ExtElem, ExtField, Field};

/// Largest number of field elements any enumeration may touch.
pub const ENUMERATION_BUDGET: u128 = 1 << 20;

/// The projective line or a Weierstrass cubic
/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    base: Arc<BaseField>,
    coeffs: Option<[u32; 5]>,
}

/// Serializable curve description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub q: u32,
    pub genus: u32,
    /// `[a1, a2, a3, a4, a6]`, absent for the projective line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[u32; 5]>,
}

/// Affine point with coordinates in some residue field.
pub type Affine = (ExtElem, ExtElem);

impl Curve {
    pub fn projective_line(base: Arc<BaseField>) -> Self {
        Curve { base, coeffs: None }
    }

    pub fn weierstrass(base: Arc<BaseField>, a: [u32; 5]) -> Result<Self, FfError> {
        if a.iter().any(|&c| c >= base.q()) {
            return Err(FfError::InvalidCurve("coefficient outside the base field".into()));
        }
        let c = Curve { base, coeffs: Some(a) };
        if c.discriminant() == 0 {
            return Err(FfError::Singular);
        }
        Ok(c)
    }

    pub fn from_spec(spec: &CurveSpec) -> Result<Self, FfError> {
        let base = Arc::new(BaseField::of_order(spec.q as u64)?);
        match (spec.genus, spec.a) {
            (0, None) => Ok(Self::projective_line(base)),
            (1, Some(a)) => Self::weierstrass(base, a),
            _ => Err(FfError::InvalidCurve("genus must be 0 (no coefficients) or 1".into())),
        }
    }

    pub fn spec(&self) -> CurveSpec {
        CurveSpec {
            q: self.base.q(),
            genus: self.genus(),
            a: self.coeffs,
        }
    }

    pub fn base(&self) -> &Arc<BaseField> {
        &self.base
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn genus(&self) -> u32 {
        self.coeffs.is_some() as u32
    }

    pub fn coefficients(&self) -> Option<[u32; 5]> {
        self.coeffs
    }

    /// Same curve over `F_{q^k}`, with `F_{q^k}` realised as a base field.
    pub fn base_change(&self, k: u32) -> Result<Self, FfError> {
        let p = self.base.p() as u64;
        if self.base.degree() != 1 && k != 1 {
            return Err(FfError::InvalidCurve("base change needs a prime base field".into()));
        }
        let base = Arc::new(BaseField::with_degree(p, self.base.degree() * k)?);
        match self.coeffs {
            None => Ok(Self::projective_line(base)),
            Some(a) => Self::weierstrass(base, a),
        }
    }

    fn int(&self, k: i64) -> u32 {
        let p = self.base.p() as i64;
        self.base.from_prime(k.rem_euclid(p) as u32)
    }

    pub fn discriminant(&self) -> u32 {
        let Some([a1, a2, a3, a4, a6]) = self.coeffs else {
            return 1;
        };
        let f = self.base.as_ref();
        let m = |a: u32, b: u32| f.mul_el(a, b);
        let ad = |a: u32, b: u32| f.add_el(a, b);
        let sb = |a: u32, b: u32| f.sub_el(a, b);
        let k = |c: i64| self.int(c);
        let b2 = ad(m(a1, a1), m(k(4), a2));
        let b4 = ad(m(k(2), a4), m(a1, a3));
        let b6 = ad(m(a3, a3), m(k(4), a6));
        let b8 = sb(
            ad(ad(m(m(a1, a1), a6), m(k(4), m(a2, a6))), m(a2, m(a3, a3))),
            ad(m(a1, m(a3, a4)), m(a4, a4)),
        );
        let t1 = m(m(b2, b2), b8);
        let t2 = m(k(8), m(b4, m(b4, b4)));
        let t3 = m(k(27), m(b6, b6));
        let t4 = m(k(9), m(b2, m(b4, b6)));
        sb(t4, ad(ad(t1, t2), t3))
    }

    /// `h(x) = a1 x + a3`, trimmed.
    pub fn h_poly(&self) -> Vec<u32> {
        let [a1, _, a3, _, _] = self.coeffs.unwrap_or([0; 5]);
        let mut v = vec![a3, a1];
        poly::trim(self.base.as_ref(), &mut v);
        v
    }

    /// `f(x) = x^3 + a2 x^2 + a4 x + a6`.
    pub fn f_poly(&self) -> Vec<u32> {
        let [_, a2, _, a4, a6] = self.coeffs.unwrap_or([0; 5]);
        vec![a6, a4, a2, 1]
    }

    pub fn residue_field(&self, d: usize) -> Arc<ExtField> {
        Arc::new(ExtField::canonical(self.base.clone(), d))
    }

    pub fn is_on_curve(&self, k: &ExtField, pt: &Affine) -> bool {
        let (x, y) = pt;
        let h = k.eval_base_poly(&self.h_poly(), x);
        let f = k.eval_base_poly(&self.f_poly(), x);
        k.add(&k.mul(y, y), &k.mul(&h, y)) == f
    }

    /// `dF/dy = 2y + a1 x + a3` at a point.
    pub fn f_y(&self, k: &ExtField, pt: &Affine) -> ExtElem {
        let two_y = k.add(&pt.1, &pt.1);
        k.add(&two_y, &k.eval_base_poly(&self.h_poly(), &pt.0))
    }

    /// `dF/dx = a1 y - 3x^2 - 2 a2 x - a4` at a point.
    pub fn f_x(&self, k: &ExtField, pt: &Affine) -> ExtElem {
        let [a1, _, _, _, _] = self.coeffs.unwrap_or([0; 5]);
        let fprime = poly::derivative(self.base.as_ref(), &self.f_poly());
        let d = k.eval_base_poly(&fprime, &pt.0);
        k.sub(&k.scalar_mul(a1, &pt.1), &d)
    }

    /// `y` values above `x`, sorted by index.
    pub fn ys_over(&self, k: &ExtField, x: &ExtElem) -> Vec<ExtElem> {
        let h = k.eval_base_poly(&self.h_poly(), x);
        let f = k.eval_base_poly(&self.f_poly(), x);
        solve::solve_quadratic(k, &h, &f)
    }

    /// The other point with the same `x`.
    pub fn negate(&self, k: &ExtField, pt: &Affine) -> Affine {
        let h = k.eval_base_poly(&self.h_poly(), &pt.0);
        (pt.0.clone(), k.neg(&k.add(&pt.1, &h)))
    }

    /// Affine points over `k` in (x index, y index) order.
    pub fn affine_points(&self, k: &ExtField) -> Result<Vec<Affine>, FfError> {
        if self.genus() == 0 {
            return Err(FfError::InvalidCurve("the projective line has no Weierstrass points".into()));
        }
        check_budget(k.order())?;
        let mut out = Vec::new();
        for x in k.elements() {
            for y in self.ys_over(k, &x) {
                out.push((x.clone(), y));
            }
        }
        Ok(out)
    }

    /// Exhaustive count of points over `F_{q^k}`.
    pub fn point_count(&self, k: usize) -> Result<u128, FfError> {
        let order = (self.q() as u128)
            .checked_pow(k as u32)
            .ok_or(FfError::BudgetExceeded(u128::MAX))?;
        check_budget(order)?;
        if self.genus() == 0 {
            return Ok(order + 1);
        }
        let field = self.residue_field(k);
        Ok(self.affine_points(&field)?.len() as u128 + 1)
    }

    /// Rational point count from tables, in `O(q)` field operations.
    pub fn count_rational_fast(&self) -> u64 {
        let Some(_) = self.coeffs else {
            return self.q() as u64 + 1;
        };
        let tables = PointCountTables::new(&self.base);
        tables.count(self)
    }
}

pub(crate) fn check_budget(size: u128) -> Result<(), FfError> {
    if size > ENUMERATION_BUDGET {
        Err(FfError::BudgetExceeded(size))
    } else {
        Ok(())
    }
}

/// `#E(F_{q^k})` from `N1 = #E(F_q)` via the Frobenius trace recurrence.
pub fn count_over_extension(q: u64, n1: u64, k: u32) -> i128 {
    let q = q as i128;
    let a = q + 1 - n1 as i128;
    // s_j = alpha^j + beta^j
    let (mut s_prev, mut s) = (2i128, a);
    for _ in 1..k {
        let next = a * s - q * s_prev;
        s_prev = s;
        s = next;
    }
    q.pow(k) + 1 - s
}

/// Number of places of degree `k` given the point counts over `F_{q^d}`.
pub fn places_of_degree(counts: impl Fn(u32) -> i128, k: u32) -> i128 {
    let mut total = 0i128;
    for d in crate::arith::divisors(k as u64) {
        total += crate::arith::mobius(k as u64 / d) as i128 * counts(d as u32);
    }
    total / k as i128
}

/// Quadratic-character (odd `q`) or absolute-trace (even `q`) lookup tables
/// for fast rational point counting.
pub struct PointCountTables {
    base: Arc<BaseField>,
    table: Vec<i8>,
}

impl PointCountTables {
    pub fn new(base: &Arc<BaseField>) -> Self {
        let q = base.q() as usize;
        let f = base.as_ref();
        let table = if base.p() == 2 {
            (0..q as u32).map(|c| solve::trace2(f, &c) as i8).collect()
        } else {
            let mut t = vec![-1i8; q];
            t[0] = 0;
            for a in 1..q as u32 {
                t[f.mul_el(a, a) as usize] = 1;
            }
            t
        };
        PointCountTables { base: base.clone(), table }
    }

    pub fn count(&self, curve: &Curve) -> u64 {
        let f = self.base.as_ref();
        let h = curve.h_poly();
        let g = curve.f_poly();
        let mut total: i64 = 1;
        for x in 0..self.base.q() {
            let hx = poly::eval(f, &h, &x);
            let gx = poly::eval(f, &g, &x);
            if self.base.p() == 2 {
                if hx == 0 {
                    total += 1;
                } else {
                    let c = f.mul_el(gx, f.inv_el(f.mul_el(hx, hx)).expect("nonzero"));
                    if self.table[c as usize] == 0 {
                        total += 2;
                    }
                }
            } else {
                let four = curve.int(4);
                let disc = f.add_el(f.mul_el(hx, hx), f.mul_el(four, gx));
                total += 1 + self.table[disc as usize] as i64;
            }
        }
        total as u64
    }
}
