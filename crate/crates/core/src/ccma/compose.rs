use std::collections::HashMap;
use std::sync::Arc;

use super::formula::{dot, Provenance, SymmetricBilinearFormula, Term};
use super::CcmaError;
use crate::gf::linalg::{self, Matrix};
use crate::gf::{poly, BaseField, ExtElem, ExtField, Field, FieldTower};

/// Field isomorphism from a table-driven `F_{q^n}` onto the outer extension.
struct Iso {
    to_ext: Vec<ExtElem>,
    from_ext: HashMap<ExtElem, u32>,
}

impl Iso {
    fn new(inner_base: &BaseField, outer_ext: &ExtField) -> Result<Self, CcmaError> {
        let fq = outer_ext.base();
        let lift_prime = |c: u32| outer_ext.embed(fq.from_prime(c));
        let rho = match inner_base.modulus() {
            None => None,
            Some(m) => {
                let lifted: Vec<ExtElem> = m.iter().map(|&c| lift_prime(c)).collect();
                Some(poly::split_root(outer_ext, &lifted).ok_or_else(|| {
                    CcmaError::TowerMismatch("defining polynomial of the inner base has no root".into())
                })?)
            }
        };
        let mut to_ext = Vec::with_capacity(inner_base.q() as usize);
        let mut from_ext = HashMap::new();
        for b in 0..inner_base.q() {
            let digits = inner_base.digits(b);
            let v = match &rho {
                None => lift_prime(digits[0]),
                Some(r) => {
                    let mut acc = outer_ext.zero();
                    for &dg in digits.iter().rev() {
                        acc = outer_ext.add(&outer_ext.mul(&acc, r), &lift_prime(dg));
                    }
                    acc
                }
            };
            from_ext.insert(v.clone(), b);
            to_ext.push(v);
        }
        Ok(Iso { to_ext, from_ext })
    }
}

/// Composition of an outer formula for `F_{q^n}/F_q` with an inner formula
/// for `F_{q^{nm}}/F_{q^n}`; the rank is the product of the ranks.
///
/// The inner base field may be defined by different polynomial data than the
/// outer extension; the two are identified through a root of the inner
/// defining polynomial. The result lives on a fresh tower over the outer
/// `F_q` whose degree-`nm` modulus is the minimal polynomial of the first
/// generator of the inner extension.
pub fn compose(
    outer: &SymmetricBilinearFormula,
    inner: &SymmetricBilinearFormula,
) -> Result<SymmetricBilinearFormula, CcmaError> {
    let k = outer.ext();
    let fq = outer.tower().base().clone();
    let b2 = inner.tower().base().clone();
    let l = inner.ext();
    if b2.p() != fq.p() || b2.q() as u128 != k.order() {
        return Err(CcmaError::TowerMismatch(format!(
            "inner base has {} elements, outer extension has {}",
            b2.q(),
            k.order()
        )));
    }
    let n = outer.n();
    let m = inner.n();
    let iso = Iso::new(&b2, k)?;
    let l_coords = |w: &ExtElem| -> Vec<u32> { w.0.iter().flat_map(|&b| iso.to_ext[b as usize].0.clone()).collect() };
    let to_fq = |v: &ExtElem| k.lift(v).expect("F_q-rational coefficient");

    // generator of the composite field over F_q
    let q = fq.q() as u128;
    let nm = n * m;
    let gamma = (1..l.order())
        .map(|i| l.from_index(i))
        .find(|w| {
            let mut cur = l.pow(w, q);
            let mut len = 1;
            while cur != *w {
                cur = l.pow(&cur, q);
                len += 1;
            }
            len == nm
        })
        .ok_or_else(|| CcmaError::Internal("no generator of the composite field".into()))?;
    let mut minpoly = vec![l.one()];
    let mut conj = gamma.clone();
    for _ in 0..nm {
        minpoly = poly::mul(l, &minpoly, &[l.neg(&conj), l.one()]);
        conj = l.pow(&conj, q);
    }
    let modulus: Vec<u32> = minpoly
        .iter()
        .map(|c| {
            let b = l.lift(c).expect("coefficient in the base");
            to_fq(&iso.to_ext[b as usize])
        })
        .collect();
    let mfield = Arc::new(ExtField::new(fq.clone(), modulus)?);

    let powers: Vec<ExtElem> = std::iter::successors(Some(l.one()), |w| Some(l.mul(w, &gamma)))
        .take(nm)
        .collect();
    let mut p_mat = Matrix::filled(nm, nm, 0u32);
    for (col, w) in powers.iter().enumerate() {
        for (row, v) in l_coords(w).into_iter().enumerate() {
            p_mat.set(row, col, v);
        }
    }
    let p_inv = linalg::inverse(fq.as_ref(), &p_mat).ok_or_else(|| CcmaError::Internal("power basis is singular".into()))?;

    let mut terms = Vec::with_capacity(outer.rank() * inner.rank());
    for ot in outer.terms() {
        let c_i = ExtElem(ot.c.clone());
        let c_i_inner = *iso.from_ext.get(&c_i).expect("isomorphism is bijective");
        for it in inner.terms() {
            let x_star: Vec<u32> = powers
                .iter()
                .map(|w| {
                    let y = w
                        .0
                        .iter()
                        .zip(&it.x_star)
                        .fold(0u32, |acc, (&a, &b)| b2.add_el(acc, b2.mul_el(a, b)));
                    dot(fq.as_ref(), &ot.x_star, &iso.to_ext[y as usize].0)
                })
                .collect();
            let c = l.scalar_mul(c_i_inner, &ExtElem(it.c.clone()));
            let c = linalg::mul_vec(fq.as_ref(), &p_inv, &l_coords(&c));
            terms.push(Term { x_star, c });
        }
    }
    SymmetricBilinearFormula::new(
        FieldTower::from_parts(mfield),
        terms,
        Provenance::Composed {
            outer_rank: outer.rank(),
            inner_rank: inner.rank(),
            inner_q: b2.q(),
        },
    )
}

/// The one-term formula `x y = x y` on `F_q` as a degree-one extension.
pub fn identity_formula(base: Arc<BaseField>) -> SymmetricBilinearFormula {
    let ext = Arc::new(ExtField::canonical(base, 1));
    SymmetricBilinearFormula::new(
        FieldTower::from_parts(ext),
        vec![Term {
            x_star: vec![1],
            c: vec![1],
        }],
        Provenance::Manual,
    )
    .expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccma::{construct_case1, VerifyMode};
    use crate::function_field::Curve;

    fn line(q: u64) -> Curve {
        Curve::projective_line(Arc::new(BaseField::of_order(q).unwrap()))
    }

    #[test]
    fn three_times_three_over_f2() {
        let outer = construct_case1(&line(2), 2).unwrap();
        let inner = construct_case1(&line(4), 2).unwrap();
        let c = compose(&outer, &inner).unwrap();
        assert_eq!(c.rank(), 9);
        assert_eq!(c.n(), 4);
        let r = c.verify(VerifyMode::Exhaustive).unwrap();
        assert!(r.pass);
        assert_eq!(r.pairs_checked, 256);
    }

    #[test]
    fn three_times_three_over_f3() {
        let outer = construct_case1(&line(3), 2).unwrap();
        let inner = construct_case1(&line(9), 2).unwrap();
        let c = compose(&outer, &inner).unwrap();
        assert_eq!(c.rank(), 9);
        assert!(c.verify(c.strongest_mode(7)).unwrap().pass);
    }

    #[test]
    fn identity_inner_keeps_rank() {
        let outer = construct_case1(&line(2), 2).unwrap();
        let inner = identity_formula(Arc::new(BaseField::of_order(4).unwrap()));
        let c = compose(&outer, &inner).unwrap();
        assert_eq!(c.rank(), 3);
        assert!(c.verify(VerifyMode::Exhaustive).unwrap().pass);
    }

    #[test]
    fn mismatched_towers_are_rejected() {
        let outer = construct_case1(&line(2), 2).unwrap();
        let inner = construct_case1(&line(3), 2).unwrap();
        assert!(matches!(compose(&outer, &inner), Err(CcmaError::TowerMismatch(_))));
    }
}
