use super::curve::{Affine, Curve};
use super::divisor::Divisor;
use super::place::{places_iter, Place};
use super::riemann_roch::riemann_roch_basis;
use super::FfError;
use crate::gf::{ExtField, Field};

/// Point of `E(K)`; `None` is the identity `O`.
pub type ECPoint = Option<Affine>;

/// Chord-and-tangent addition on a Weierstrass curve over `k`.
pub fn add_points(curve: &Curve, k: &ExtField, p: &ECPoint, q: &ECPoint) -> ECPoint {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let [a1, a2, a3, a4, a6] = curve.coefficients().expect("genus one");
    let c = |v: u32| k.embed(v);
    if x1 == x2 {
        let neg_y1 = k.neg(&k.add(y1, &k.add(&k.mul(&c(a1), x1), &c(a3))));
        if *y2 == neg_y1 {
            return None;
        }
    }
    let (lambda, nu) = if x1 != x2 {
        let dx = k.sub(x2, x1);
        let lambda = k.div(&k.sub(y2, y1), &dx).expect("distinct x");
        let nu = k.div(&k.sub(&k.mul(y1, x2), &k.mul(y2, x1)), &dx).expect("distinct x");
        (lambda, nu)
    } else {
        let three = k.add(&k.one(), &k.add(&k.one(), &k.one()));
        let two = k.add(&k.one(), &k.one());
        let den = k.add(&k.mul(&two, y1), &k.add(&k.mul(&c(a1), x1), &c(a3)));
        let x1sq = k.mul(x1, x1);
        let num_l = k.sub(
            &k.add(&k.mul(&three, &x1sq), &k.add(&k.mul(&k.mul(&two, &c(a2)), x1), &c(a4))),
            &k.mul(&c(a1), y1),
        );
        let num_n = k.sub(
            &k.add(&k.neg(&k.mul(&x1sq, x1)), &k.add(&k.mul(&c(a4), x1), &k.mul(&two, &c(a6)))),
            &k.mul(&c(a3), y1),
        );
        (
            k.div(&num_l, &den).expect("not a 2-torsion point"),
            k.div(&num_n, &den).expect("not a 2-torsion point"),
        )
    };
    let x3 = k.sub(
        &k.sub(&k.add(&k.mul(&lambda, &lambda), &k.mul(&c(a1), &lambda)), &c(a2)),
        &k.add(x1, x2),
    );
    let y3 = k.sub(
        &k.neg(&k.add(&k.mul(&k.add(&lambda, &c(a1)), &x3), &nu)),
        &c(a3),
    );
    Some((x3, y3))
}

pub fn negate_point(curve: &Curve, k: &ExtField, p: &ECPoint) -> ECPoint {
    p.as_ref().map(|pt| curve.negate(k, pt))
}

pub fn scalar_mul(curve: &Curve, k: &ExtField, p: &ECPoint, n: i64) -> ECPoint {
    let mut base = if n < 0 { negate_point(curve, k, p) } else { p.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = add_points(curve, k, &acc, &base);
        }
        base = add_points(curve, k, &base, &base);
        e >>= 1;
    }
    acc
}

/// Sum of the conjugate points of a place, as a rational point.
pub fn place_sum(curve: &Curve, p: &Place) -> ECPoint {
    let k = p.residue_field();
    let mut acc = None;
    for pt in p.orbit() {
        acc = add_points(curve, k, &acc, &Some(pt));
    }
    acc.map(|(x, y)| {
        let f1 = curve.residue_field(1);
        let lx = k.lift(&x).expect("Frobenius-invariant sum");
        let ly = k.lift(&y).expect("Frobenius-invariant sum");
        (f1.embed(lx), f1.embed(ly))
    })
}

/// Whether a degree-zero divisor on an elliptic curve is principal, decided
/// by summing its places in the group.
pub fn divisor_class_is_principal(curve: &Curve, d: &Divisor) -> Result<bool, FfError> {
    if curve.genus() != 1 {
        return Err(FfError::WrongGenus);
    }
    if d.degree() != 0 {
        return Err(FfError::NotDegreeZero(d.degree()));
    }
    let f1 = curve.residue_field(1);
    let mut acc = None;
    for (p, n) in d.terms() {
        let s = place_sum(curve, p);
        acc = add_points(curve, &f1, &acc, &scalar_mul(curve, &f1, &s, n));
    }
    Ok(acc.is_none())
}

/// A divisor of degree `g - 1` with `l(D) = 0`.
pub fn find_nonspecial_divisor(curve: &Curve) -> Result<Divisor, FfError> {
    let inf = Place::infinite(curve);
    if curve.genus() == 0 {
        return Ok(Divisor::from_place(&inf, -1));
    }
    let mut candidates = places_iter(curve, 1)
        .filter_map(Result::ok)
        .filter(|p| !p.is_infinite())
        .map(|p| Divisor::from_terms([(&p, 1), (&inf, -1)]));
    let found = candidates.next().or_else(|| {
        // E(F_q) = {O}: try a degree-two place against 2O
        places_iter(curve, 2)
            .filter_map(Result::ok)
            .map(|p| Divisor::from_terms([(&p, 1), (&inf, -2)]))
            .find(|d| !divisor_class_is_principal(curve, d).unwrap_or(true))
    });
    let d = found.ok_or(FfError::NoNonspecialDivisor)?;
    if riemann_roch_basis(curve, &d)?.dimension() != 0 {
        return Err(FfError::NoNonspecialDivisor);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::function_field::enumerate_places;
    use crate::gf::BaseField;

    fn curve(q: u64, a: [u32; 5]) -> Curve {
        Curve::weierstrass(Arc::new(BaseField::of_order(q).unwrap()), a).unwrap()
    }

    #[test]
    fn group_order_annihilates_points() {
        for (q, a) in [(5u64, [0, 0, 0, 1, 1]), (2, [1, 0, 0, 0, 1]), (4, [0, 0, 1, 0, 0]), (9, [0, 1, 0, 0, 2])] {
            let e = curve(q, a);
            let k = e.residue_field(1);
            let n = e.point_count(1).unwrap() as i64;
            for pt in e.affine_points(&k).unwrap() {
                assert_eq!(scalar_mul(&e, &k, &Some(pt), n), None, "q={q}");
            }
        }
    }

    #[test]
    fn addition_is_associative_on_a_sample() {
        let e = curve(7, [0, 0, 0, 3, 2]);
        let k = e.residue_field(1);
        let pts: Vec<ECPoint> = e.affine_points(&k).unwrap().into_iter().map(Some).chain([None]).collect();
        for a in &pts {
            for b in &pts {
                let ab = add_points(&e, &k, a, b);
                assert_eq!(ab, add_points(&e, &k, b, a));
                for c in pts.iter().take(4) {
                    let l = add_points(&e, &k, &ab, c);
                    let r = add_points(&e, &k, a, &add_points(&e, &k, b, c));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn principality_examples() {
        let e = curve(5, [0, 0, 0, 1, 1]);
        let k = e.residue_field(1);
        let o = Place::infinite(&e);
        assert!(divisor_class_is_principal(&e, &Divisor::zero()).unwrap());
        let places = enumerate_places(&e, 1).unwrap();
        let finite: Vec<&Place> = places.iter().filter(|p| !p.is_infinite()).collect();
        for p in &finite {
            assert!(!divisor_class_is_principal(&e, &Divisor::from_terms([(*p, 1), (&o, -1)])).unwrap());
        }
        let (p, q) = (finite[0], finite[1]);
        let r = add_points(&e, &k, &p.point(), &q.point());
        let r_place = match r {
            None => o.clone(),
            Some(pt) => Place::from_point(&e, k.clone(), &pt).unwrap(),
        };
        let mut d = Divisor::from_terms([(p, 1), (q, 1)]);
        d.add_place(&r_place, -1);
        d.add_place(&o, -1);
        assert!(divisor_class_is_principal(&e, &d).unwrap());
        assert_eq!(riemann_roch_basis(&e, &d).unwrap().dimension(), 1);
    }

    #[test]
    fn nonspecial_divisors() {
        let line = Curve::projective_line(Arc::new(BaseField::prime(3).unwrap()));
        let d = find_nonspecial_divisor(&line).unwrap();
        assert_eq!(d.degree(), -1);
        let e = curve(5, [0, 0, 0, 1, 1]);
        let d = find_nonspecial_divisor(&e).unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(riemann_roch_basis(&e, &d).unwrap().dimension(), 0);
    }

    #[test]
    fn trivial_group_has_no_nonspecial_divisor() {
        // y^2 + y = x^3 + x + 1 over F_2 has only the point at infinity
        let e = curve(2, [0, 0, 1, 1, 1]);
        assert_eq!(e.point_count(1).unwrap(), 1);
        assert_eq!(find_nonspecial_divisor(&e), Err(FfError::NoNonspecialDivisor));
    }
}
