use serde::{Deserialize, Serialize};

use super::curve::{Affine, Curve};
use super::divisor::Divisor;
use super::place::Place;
use super::FfError;
use crate::gf::{linalg, poly, BaseField, ExtElem, ExtField, Field};

/// `(a(x) + b(x) y) / den(x)` with coefficients in `F_q`; `b` is empty on the
/// projective line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub den: Vec<u32>,
}

impl RationalFunction {
    pub fn constant(c: u32) -> Self {
        let a = if c == 0 { vec![] } else { vec![c] };
        RationalFunction { a, b: vec![], den: vec![1] }
    }

    pub fn x() -> Self {
        RationalFunction {
            a: vec![0, 1],
            b: vec![],
            den: vec![1],
        }
    }

    pub fn y() -> Self {
        RationalFunction {
            a: vec![],
            b: vec![1],
            den: vec![1],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// Pole order at infinity of the numerator and of the denominator.
    fn pole_orders(&self, genus: u32) -> (Option<i64>, i64) {
        let da = poly::degree(&self.a).map(|d| d as i64);
        let db = poly::degree(&self.b).map(|d| d as i64);
        let dd = poly::degree(&self.den).expect("nonzero denominator") as i64;
        if genus == 0 {
            (da, dd)
        } else {
            let num = match (da, db) {
                (None, None) => None,
                (a, b) => Some(a.map(|v| 2 * v).unwrap_or(i64::MIN).max(b.map(|v| 2 * v + 3).unwrap_or(i64::MIN))),
            };
            (num, 2 * dd)
        }
    }

    pub fn mul(&self, curve: &Curve, other: &Self) -> Self {
        let f = curve.base().as_ref();
        let aa = poly::mul(f, &self.a, &other.a);
        let bb = poly::mul(f, &self.b, &other.b);
        let ab = poly::add(f, &poly::mul(f, &self.a, &other.b), &poly::mul(f, &other.a, &self.b));
        // y^2 = f(x) - h(x) y
        let a = poly::add(f, &aa, &poly::mul(f, &bb, &curve.f_poly()));
        let b = poly::sub(f, &ab, &poly::mul(f, &bb, &curve.h_poly()));
        RationalFunction {
            a,
            b,
            den: poly::mul(f, &self.den, &other.den),
        }
    }

    /// `sum c_i f_i` for functions sharing one denominator.
    pub fn combination(f: &BaseField, funcs: &[RationalFunction], coeffs: &[u32]) -> Self {
        assert_eq!(funcs.len(), coeffs.len());
        let den = funcs.first().map(|g| g.den.clone()).unwrap_or_else(|| vec![1]);
        let mut a = vec![];
        let mut b = vec![];
        for (g, &c) in funcs.iter().zip(coeffs) {
            assert_eq!(g.den, den, "combination needs a common denominator");
            a = poly::add(f, &a, &poly::scale(f, &g.a, &c));
            b = poly::add(f, &b, &poly::scale(f, &g.b, &c));
        }
        RationalFunction { a, b, den }
    }
}

/// Explicit basis of `L(D)`.
#[derive(Debug, Clone)]
pub struct RRBasis {
    pub divisor: Divisor,
    pub functions: Vec<RationalFunction>,
    /// Finite places at which the common denominator vanishes.
    pub denominator_zeros: Vec<Place>,
}

impl RRBasis {
    pub fn dimension(&self) -> usize {
        self.functions.len()
    }

    /// Checks `div(f) + D >= 0` at every place where a pole is possible and
    /// linear independence of the numerators.
    pub fn check(&self, curve: &Curve) -> Result<(), String> {
        let mut places: Vec<Place> = self.divisor.support().cloned().collect();
        places.extend(self.denominator_zeros.iter().cloned());
        places.push(Place::infinite(curve));
        places.sort();
        places.dedup();
        for (i, f) in self.functions.iter().enumerate() {
            for p in &places {
                let ord = order_at(curve, f, p).ok_or_else(|| format!("basis function {i} is zero"))?;
                if ord < -self.divisor.multiplicity(p) {
                    return Err(format!("basis function {i} has order {ord} at {:?}", p.spec()));
                }
            }
        }
        let width = self
            .functions
            .iter()
            .map(|f| f.a.len().max(f.b.len()))
            .max()
            .unwrap_or(0);
        let rows: Vec<Vec<u32>> = self
            .functions
            .iter()
            .map(|f| {
                let mut r = vec![0; 2 * width];
                r[..f.a.len()].copy_from_slice(&f.a);
                r[width..width + f.b.len()].copy_from_slice(&f.b);
                r
            })
            .collect();
        let m = linalg::Matrix::from_rows(rows, 2 * width);
        if linalg::rank(curve.base().as_ref(), &m) != self.functions.len() {
            return Err("basis functions are dependent".into());
        }
        Ok(())
    }
}

type Series = Vec<ExtElem>;

fn s_mul(k: &ExtField, a: &[ExtElem], b: &[ExtElem], prec: usize) -> Series {
    let mut out = vec![k.zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

fn s_add(k: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Series {
    a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
}

fn s_eval(k: &ExtField, coeffs: &[u32], s: &[ExtElem], prec: usize) -> Series {
    let mut acc = vec![k.zero(); prec];
    for &c in coeffs.iter().rev() {
        acc = s_mul(k, &acc, s, prec);
        acc[0] = k.add(&acc[0], &k.embed(c));
    }
    acc
}

/// Expansions of `x` and `y` in a local parameter at a finite point,
/// truncated to `prec` terms.
pub(crate) struct Local {
    pub x: Series,
    pub y: Series,
}

pub(crate) fn local_expansion(curve: &Curve, k: &ExtField, pt: &Affine, prec: usize) -> Local {
    let mut x = vec![k.zero(); prec];
    let mut y = vec![k.zero(); prec];
    if prec == 0 {
        return Local { x, y };
    }
    x[0] = pt.0.clone();
    y[0] = pt.1.clone();
    if curve.genus() == 0 {
        if prec > 1 {
            x[1] = k.one();
        }
        return Local { x, y };
    }
    let fy = curve.f_y(k, pt);
    let solve_for_y = !k.is_zero(&fy);
    let pivot_inv = if solve_for_y {
        k.inv(&fy).expect("nonzero")
    } else {
        k.inv(&curve.f_x(k, pt)).expect("smooth curve")
    };
    if prec > 1 {
        if solve_for_y {
            x[1] = k.one();
        } else {
            y[1] = k.one();
        }
    }
    for _ in 0..prec {
        let h = s_eval(k, &curve.h_poly(), &x, prec);
        let f = s_eval(k, &curve.f_poly(), &x, prec);
        let lhs = s_add(k, &s_mul(k, &y, &y, prec), &s_mul(k, &h, &y, prec));
        let resid: Series = lhs.iter().zip(&f).map(|(a, b)| k.sub(a, b)).collect();
        if resid.iter().all(|c| k.is_zero(c)) {
            break;
        }
        let target = if solve_for_y { &mut y } else { &mut x };
        for (t, r) in target.iter_mut().zip(&resid) {
            *t = k.sub(t, &k.mul(r, &pivot_inv));
        }
    }
    Local { x, y }
}

fn numerator_series(k: &ExtField, a: &[u32], b: &[u32], loc: &Local, prec: usize) -> Series {
    let sa = s_eval(k, a, &loc.x, prec);
    if b.is_empty() {
        return sa;
    }
    let sb = s_eval(k, b, &loc.x, prec);
    s_add(k, &sa, &s_mul(k, &sb, &loc.y, prec))
}

fn valuation(k: &ExtField, s: &[ExtElem]) -> Option<usize> {
    s.iter().position(|c| !k.is_zero(c))
}

/// Order of `f` at `p`, `None` for the zero function.
pub fn order_at(curve: &Curve, f: &RationalFunction, p: &Place) -> Option<i64> {
    let (num_pole, den_pole) = f.pole_orders(curve.genus());
    let num_pole = num_pole?;
    let Some(pt) = p.point() else {
        return Some(den_pole - num_pole);
    };
    let k = p.residue_field();
    let prec = (num_pole.max(den_pole) + 1) as usize;
    let loc = local_expansion(curve, k, &pt, prec);
    let vn = valuation(k, &numerator_series(k, &f.a, &f.b, &loc, prec)).expect("precision covers all zeros");
    let vd = valuation(k, &s_eval(k, &f.den, &loc.x, prec)).expect("precision covers all zeros");
    Some(vn as i64 - vd as i64)
}

/// Residue of `f` at `p` in the place's residue field.
pub fn evaluate(curve: &Curve, f: &RationalFunction, p: &Place) -> Result<ExtElem, FfError> {
    let k = p.residue_field();
    let Some(pt) = p.point() else {
        let (num_pole, den_pole) = f.pole_orders(curve.genus());
        return match num_pole {
            None => Ok(k.zero()),
            Some(n) if n > den_pole => Err(FfError::Pole),
            Some(n) if n < den_pole => Ok(k.zero()),
            Some(_) => {
                let base = curve.base();
                let la = *f.a.last().expect("equal even pole order comes from a");
                let ld = *f.den.last().expect("nonzero");
                Ok(k.embed(base.mul_el(la, base.inv_el(ld)?)))
            }
        };
    };
    let den = k.eval_base_poly(&f.den, &pt.0);
    if !k.is_zero(&den) {
        let mut num = k.eval_base_poly(&f.a, &pt.0);
        if !f.b.is_empty() {
            num = k.add(&num, &k.mul(&k.eval_base_poly(&f.b, &pt.0), &pt.1));
        }
        return Ok(k.div(&num, &den)?);
    }
    let (num_pole, den_pole) = f.pole_orders(curve.genus());
    let Some(num_pole) = num_pole else {
        return Ok(k.zero());
    };
    let prec = (num_pole.max(den_pole) + 1) as usize;
    let loc = local_expansion(curve, k, &pt, prec);
    let ns = numerator_series(k, &f.a, &f.b, &loc, prec);
    let ds = s_eval(k, &f.den, &loc.x, prec);
    let vn = valuation(k, &ns).expect("precision covers all zeros");
    let vd = valuation(k, &ds).expect("precision covers all zeros");
    match vn.cmp(&vd) {
        std::cmp::Ordering::Less => Err(FfError::Pole),
        std::cmp::Ordering::Greater => Ok(k.zero()),
        std::cmp::Ordering::Equal => Ok(k.div(&ns[vn], &ds[vd])?),
    }
}

/// Basis of `L(D)`.
pub fn riemann_roch_basis(curve: &Curve, d: &Divisor) -> Result<RRBasis, FfError> {
    if curve.genus() == 0 {
        rr_genus0(curve, d)
    } else {
        rr_genus1(curve, d)
    }
}

fn rr_genus0(curve: &Curve, d: &Divisor) -> Result<RRBasis, FfError> {
    let f = curve.base().as_ref();
    let mut u = vec![1];
    let mut z = vec![1];
    let mut zeros = Vec::new();
    for (p, n) in d.terms() {
        let Some(m) = p.x_poly() else { continue };
        let pw = poly::pow(f, m, n.unsigned_abs() as u32);
        if n > 0 {
            u = poly::mul(f, &u, &pw);
            zeros.push(p.clone());
        } else {
            z = poly::mul(f, &z, &pw);
        }
    }
    let functions = if d.degree() < 0 {
        Vec::new()
    } else {
        (0..=d.degree() as usize)
            .map(|i| RationalFunction {
                a: poly::mul(f, &z, &poly::monomial(f, i)),
                b: vec![],
                den: u.clone(),
            })
            .collect()
    };
    Ok(RRBasis {
        divisor: d.clone(),
        functions,
        denominator_zeros: zeros,
    })
}

/// Order at `r` of the polynomial `x_poly(p)(x)` for a finite place `p`.
fn poly_order(curve: &Curve, p: &Place, r: &Place) -> i64 {
    match (p.x_poly(), r.x_poly(), r.point()) {
        (Some(a), Some(b), Some(pt)) if a == b => {
            if curve.genus() == 1 && r.residue_field().is_zero(&curve.f_y(r.residue_field(), &pt)) {
                2
            } else {
                1
            }
        }
        _ => 0,
    }
}

fn rr_genus1(curve: &Curve, d: &Divisor) -> Result<RRBasis, FfError> {
    let f = curve.base().as_ref();
    let inf = Place::infinite(curve);
    let mut u = vec![1];
    let mut zeros: Vec<Place> = Vec::new();
    for (p, n) in d.terms() {
        if n <= 0 || p.is_infinite() {
            continue;
        }
        u = poly::mul(f, &u, &poly::pow(f, p.x_poly().expect("finite"), n as u32));
        let pt = p.point().expect("finite");
        let neg = curve.negate(p.residue_field(), &pt);
        zeros.push(p.clone());
        zeros.push(Place::from_point(curve, p.residue_field().clone(), &neg)?);
    }
    zeros.sort();
    zeros.dedup();
    let deg_u = (u.len() - 1) as i64;
    let m = d.multiplicity(&inf) + 2 * deg_u;
    let mut monomials: Vec<(usize, usize)> = Vec::new();
    if m >= 0 {
        for pole in 0..=m {
            if pole == 1 {
                continue;
            }
            if pole % 2 == 0 {
                monomials.push((pole as usize / 2, 0));
            } else {
                monomials.push(((pole as usize - 3) / 2, 1));
            }
        }
    }
    let mut conditions: Vec<Place> = zeros.clone();
    conditions.extend(d.terms().filter(|(p, n)| *n < 0 && !p.is_infinite()).map(|(p, _)| p.clone()));
    conditions.sort();
    conditions.dedup();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for r in &conditions {
        let ord_u: i64 = d
            .terms()
            .filter(|(p, n)| *n > 0 && !p.is_infinite())
            .map(|(p, n)| n * poly_order(curve, p, r))
            .sum();
        let k_r = ord_u - d.multiplicity(r);
        if k_r <= 0 || monomials.is_empty() {
            continue;
        }
        let prec = k_r as usize;
        let k = r.residue_field();
        let loc = local_expansion(curve, k, &r.point().expect("finite"), prec);
        let mut cols: Vec<Series> = Vec::with_capacity(monomials.len());
        for &(i, j) in &monomials {
            let mut s = vec![k.zero(); prec];
            s[0] = k.one();
            for _ in 0..i {
                s = s_mul(k, &s, &loc.x, prec);
            }
            if j == 1 {
                s = s_mul(k, &s, &loc.y, prec);
            }
            cols.push(s);
        }
        for c in 0..prec {
            for l in 0..k.degree() {
                rows.push(cols.iter().map(|s| s[c].0[l]).collect());
            }
        }
    }
    let functions = if monomials.is_empty() {
        Vec::new()
    } else {
        let mat = linalg::Matrix::from_rows(rows, monomials.len());
        linalg::nullspace(f, &mat)
            .into_iter()
            .map(|v| {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (&(i, j), c) in monomials.iter().zip(v) {
                    let target = if j == 0 { &mut a } else { &mut b };
                    if target.len() <= i {
                        target.resize(i + 1, 0);
                    }
                    target[i] = c;
                }
                poly::trim(f, &mut a);
                poly::trim(f, &mut b);
                RationalFunction { a, b, den: u.clone() }
            })
            .collect()
    };
    Ok(RRBasis {
        divisor: d.clone(),
        functions,
        denominator_zeros: zeros,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::function_field::enumerate_places;

    fn curve(q: u64, a: [u32; 5]) -> Curve {
        Curve::weierstrass(Arc::new(BaseField::of_order(q).unwrap()), a).unwrap()
    }

    #[test]
    fn polynomials_on_the_line() {
        let c = Curve::projective_line(Arc::new(BaseField::prime(3).unwrap()));
        let inf = Place::infinite(&c);
        let b = riemann_roch_basis(&c, &Divisor::from_place(&inf, 3)).unwrap();
        assert_eq!(b.dimension(), 4);
        for (i, f) in b.functions.iter().enumerate() {
            assert_eq!(f.a, poly::monomial(c.base().as_ref(), i));
            assert_eq!(f.den, vec![1]);
        }
        b.check(&c).unwrap();
    }

    #[test]
    fn x_at_quadratic_place_is_t() {
        let c = Curve::projective_line(Arc::new(BaseField::prime(2).unwrap()));
        let p = enumerate_places(&c, 2).unwrap().remove(0);
        let v = evaluate(&c, &RationalFunction::x(), &p).unwrap();
        // t and t+1 are the roots; t has the smaller index
        assert_eq!(v, p.residue_field().generator());
    }

    #[test]
    fn four_o_gives_classical_basis() {
        let e = curve(5, [0, 0, 0, 1, 1]);
        let o = Place::infinite(&e);
        let b = riemann_roch_basis(&e, &Divisor::from_place(&o, 4)).unwrap();
        let shapes: Vec<(Vec<u32>, Vec<u32>)> = b.functions.iter().map(|f| (f.a.clone(), f.b.clone())).collect();
        assert_eq!(
            shapes,
            vec![(vec![1], vec![]), (vec![0, 1], vec![]), (vec![], vec![1]), (vec![0, 0, 1], vec![])]
        );
        b.check(&e).unwrap();
    }

    #[test]
    fn two_o_minus_p_has_dimension_one() {
        let e = curve(5, [0, 0, 0, 1, 1]);
        let o = Place::infinite(&e);
        let places = enumerate_places(&e, 1).unwrap();
        for p in places.iter().filter(|p| !p.is_infinite()) {
            let mut d = Divisor::from_place(&o, 2);
            d.add_place(p, -1);
            let b = riemann_roch_basis(&e, &d).unwrap();
            assert_eq!(b.dimension(), 1);
            b.check(&e).unwrap();
            // the function is x - x(P)
            let x0 = p.point().unwrap().0 .0[0];
            let f = &b.functions[0];
            assert!(f.b.is_empty());
            assert_eq!(f.a[0], e.base().mul_el(e.base().neg_el(x0), f.a[1]));
        }
    }

    #[test]
    fn evaluation_at_points_and_poles() {
        let e = curve(7, [0, 0, 0, 3, 2]);
        for p in enumerate_places(&e, 1).unwrap().iter().filter(|p| !p.is_infinite()) {
            let pt = p.point().unwrap();
            assert_eq!(evaluate(&e, &RationalFunction::x(), p).unwrap(), pt.0);
            assert_eq!(evaluate(&e, &RationalFunction::y(), p).unwrap(), pt.1);
            assert_eq!(evaluate(&e, &RationalFunction::constant(1), p).unwrap(), p.residue_field().one());
        }
        let o = Place::infinite(&e);
        assert_eq!(evaluate(&e, &RationalFunction::x(), &o), Err(FfError::Pole));
        let inv_x = RationalFunction {
            a: vec![1],
            b: vec![],
            den: vec![0, 1],
        };
        assert!(k_is_zero(&evaluate(&e, &inv_x, &o).unwrap()));
    }

    fn k_is_zero(a: &ExtElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    #[test]
    fn removable_singularity_through_series() {
        // (y - y0)/(x - x0) at a point with nonzero dF/dy is the slope there
        let e = curve(5, [0, 0, 0, 1, 1]);
        let p = enumerate_places(&e, 1)
            .unwrap()
            .into_iter()
            .find(|p| p.point().map(|pt| pt.1 .0[0] != 0).unwrap_or(false))
            .unwrap();
        let (x0, y0) = p.point().unwrap();
        let f5 = e.base().as_ref();
        let g = RationalFunction {
            a: vec![f5.neg_el(y0.0[0])],
            b: vec![1],
            den: vec![f5.neg_el(x0.0[0]), 1],
        };
        let v = evaluate(&e, &g, &p).unwrap();
        // slope = (3x0^2 + a4) / (2 y0)
        let num = f5.add_el(f5.mul_el(3, f5.mul_el(x0.0[0], x0.0[0])), 1);
        let expect = f5.mul_el(num, f5.inv_el(f5.mul_el(2, y0.0[0])).unwrap());
        assert_eq!(v.0[0], expect);
    }
}
