//! Dense univariate polynomials over any [`Field`], stored low degree first
//! with no trailing zeros (the zero polynomial is the empty vector).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Field;
use crate::arith;

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, a: &mut Poly<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F::Elem> {
    if f.is_zero(&c) {
        Vec::new()
    } else {
        vec![c]
    }
}

/// `x - c`
pub fn linear<F: Field>(f: &F, c: &F::Elem) -> Poly<F::Elem> {
    vec![f.neg(c), f.one()]
}

/// `x^k`
pub fn monomial<F: Field>(f: &F, k: usize) -> Poly<F::Elem> {
    let mut out = vec![f.zero(); k + 1];
    out[k] = f.one();
    out
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F::Elem> {
    let mut out: Vec<F::Elem> = a.iter().map(|x| f.mul(x, c)).collect();
    trim(f, &mut out);
    out
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, &mut out);
    out
}

pub fn pow<F: Field>(f: &F, a: &[F::Elem], e: u32) -> Poly<F::Elem> {
    let mut acc = constant(f, f.one());
    for _ in 0..e {
        acc = mul(f, &acc, a);
    }
    acc
}

/// Quotient and remainder. Panics when `b` is zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = if b[db] == f.one() {
        f.one()
    } else {
        f.inv(&b[db]).expect("nonzero leading coefficient")
    };
    let mut rem: Vec<F::Elem> = a.to_vec();
    trim(f, &mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = f.mul(rem.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, bj));
        }
        quot[k] = c;
        rem.pop();
        trim(f, &mut rem);
    }
    trim(f, &mut quot);
    (quot, rem)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn make_monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn inverse_mod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Poly<F::Elem>> {
    // extended Euclid tracking only the coefficient of `a`
    let mut r0 = m.to_vec();
    let mut r1 = rem(f, a, m);
    let mut s0: Poly<F::Elem> = Vec::new();
    let mut s1 = constant(f, f.one());
    while !r1.is_empty() {
        let (qt, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &qt, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = f.inv(&r0[0]).ok()?;
    Some(rem(f, &scale(f, &s0, &c), m))
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, a: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Poly<F::Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &constant(f, f.one()), m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    acc
}

/// Horner evaluation at a point of the same field.
pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    let mut out: Vec<F::Elem> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let mut acc = f.zero();
            for _ in 0..(i as u64 % f.characteristic() as u64) {
                acc = f.add(&acc, c);
            }
            acc
        })
        .collect();
    trim(f, &mut out);
    out
}

/// `x^(Q^k) mod m` where `Q` is the field order.
fn frobenius_power_of_x<F: Field>(f: &F, k: usize, m: &[F::Elem]) -> Poly<F::Elem> {
    let mut acc = rem(f, &monomial(f, 1), m);
    for _ in 0..k {
        acc = powmod(f, &acc, f.order(), m);
    }
    acc
}

/// Rabin's deterministic irreducibility test.
pub fn is_irreducible<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    let d = match degree(a) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let m = make_monic(f, a);
    let x = monomial(f, 1);
    if sub(f, &frobenius_power_of_x(f, d, &m), &rem(f, &x, &m)).iter().any(|c| !f.is_zero(c)) {
        return false;
    }
    for r in arith::prime_factors(d as u64) {
        let h = sub(f, &frobenius_power_of_x(f, d / r as usize, &m), &x);
        if gcd(f, &h, &m).len() != 1 {
            return false;
        }
    }
    true
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg/2`. Exponential; meant for small degrees and cross-checks.
pub fn is_irreducible_trial<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    let d = match degree(a) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    for k in 1..=d / 2 {
        let count = f.order().pow(k as u32);
        for idx in 0..count {
            let cand = monic_from_index(f, k, idx);
            if rem(f, a, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic polynomial of degree `d` whose lower coefficients are the base-`Q`
/// digits of `idx` (constant term least significant).
pub fn monic_from_index<F: Field>(f: &F, d: usize, mut idx: u128) -> Poly<F::Elem> {
    let q = f.order();
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..d {
        out.push(f.from_index(idx % q));
        idx /= q;
    }
    out.push(f.one());
    out
}

/// Canonical integer encoding `sum index(c_i) Q^i` of a polynomial.
pub fn index<F: Field>(f: &F, a: &[F::Elem]) -> u128 {
    a.iter().rev().fold(0u128, |acc, c| acc * f.order() + f.index(c))
}

/// Monic irreducible polynomials of degree `d` in increasing canonical order.
pub fn irreducibles<F: Field>(f: &F, d: usize) -> impl Iterator<Item = Poly<F::Elem>> + '_ {
    let count = arith::checked_pow(f.order() as u64, d as u32).unwrap_or(u128::MAX);
    (0..count)
        .map(move |idx| monic_from_index(f, d, idx))
        .filter(move |cand| is_irreducible(f, cand))
}

/// The smallest monic irreducible of degree `d` in canonical order, i.e. the
/// one with the smallest encoding `sum index(c_i) Q^i`.
pub fn find_irreducible<F: Field>(f: &F, d: usize) -> Poly<F::Elem> {
    assert!(d >= 1, "degree must be positive");
    irreducibles(f, d)
        .next()
        .expect("irreducible polynomials exist in every degree")
}

/// Pseudo-random splitting shifts tried before the exhaustive scan.
const RANDOM_SHIFTS: u128 = 64;

/// One root of `a`, assuming `a` is squarefree and splits into linear factors
/// over `f` (e.g. an irreducible of degree `k` over a subfield of index `k`).
/// Deterministic: the splitting shifts come from a fixed-seed stream, then
/// run through the whole field in index order.
pub fn split_root<F: Field>(f: &F, a: &[F::Elem]) -> Option<F::Elem> {
    let mut g = make_monic(f, a);
    let q = f.order();
    let p = f.characteristic() as u128;
    let mut shift: u128 = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    loop {
        match degree(&g) {
            None | Some(0) => return None,
            Some(1) => return Some(f.neg(&g[0])),
            _ => {}
        }
        if shift >= q + RANDOM_SHIFTS {
            return None;
        }
        let delta = f.from_index(if shift < RANDOM_SHIFTS { rng.gen_range(0..q) } else { shift - RANDOM_SHIFTS });
        shift += 1;
        let h = if p == 2 {
            // absolute trace of delta * x
            let k = q.trailing_zeros();
            let dx = rem(f, &[f.zero(), delta], &g);
            let mut term = dx.clone();
            let mut tr = dx;
            for _ in 1..k {
                term = mulmod(f, &term, &term, &g);
                tr = add(f, &tr, &term);
            }
            tr
        } else {
            let lin = vec![delta, f.one()];
            let w = powmod(f, &lin, (q - 1) / 2, &g);
            sub(f, &w, &constant(f, f.one()))
        };
        let d = gcd(f, &h, &g);
        if let Some(dd) = degree(&d) {
            if dd > 0 && dd < g.len() - 1 {
                let other = divrem(f, &g, &d).0;
                g = if d.len() <= other.len() { d } else { make_monic(f, &other) };
                shift = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::BaseField;

    #[test]
    fn canonical_small_irreducibles() {
        let f2 = BaseField::prime(2).unwrap();
        let f3 = BaseField::prime(3).unwrap();
        assert_eq!(find_irreducible(&f2, 2), vec![1, 1, 1]);
        assert_eq!(find_irreducible(&f2, 3), vec![1, 1, 0, 1]);
        assert_eq!(find_irreducible(&f3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn x3_x_1_has_no_roots_and_is_first() {
        let f2 = BaseField::prime(2).unwrap();
        let cand = vec![1, 1, 0, 1];
        assert!((0..2).all(|x| eval(&f2, &cand, &x) != 0));
        // the only smaller cubics x^3, x^3+1, x^3+x, x^3+x^2 .. all have a root
        for idx in 0..3u128 {
            let c = monic_from_index(&f2, 3, idx);
            assert!((0..2).any(|x| eval(&f2, &c, &x) == 0));
        }
    }

    #[test]
    fn minus_one_is_nonresidue_mod_3() {
        let f3 = BaseField::prime(3).unwrap();
        assert!((0..3).all(|x| f3.mul_el(x, x) != 2));
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for q in [2u64, 3, 4] {
            let f = BaseField::of_order(q).unwrap();
            for d in 1..=4usize {
                for idx in 0..(q as u128).pow(d as u32) {
                    let c = monic_from_index(&f, d, idx);
                    assert_eq!(is_irreducible(&f, &c), is_irreducible_trial(&f, &c), "q={q} {c:?}");
                }
            }
        }
    }

    #[test]
    fn necklace_counts() {
        for q in [2u64, 3, 4] {
            let f = BaseField::of_order(q).unwrap();
            let max_d = if q == 4 { 5 } else { 6 };
            for d in 1..=max_d {
                let n = irreducibles(&f, d).count() as u128;
                assert_eq!(n, arith::count_irreducibles(q, d as u64), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn find_irreducible_is_deterministic() {
        let f = BaseField::of_order(9).unwrap();
        assert_eq!(find_irreducible(&f, 4), find_irreducible(&f, 4));
    }

    #[test]
    fn inverse_mod_roundtrip() {
        let f = BaseField::prime(5).unwrap();
        let m = find_irreducible(&f, 3);
        let a = vec![2, 3, 1];
        let inv = inverse_mod(&f, &a, &m).unwrap();
        assert_eq!(mulmod(&f, &a, &inv, &m), vec![1]);
    }

    #[test]
    fn gcd_and_divrem() {
        let f = BaseField::prime(7).unwrap();
        let a = mul(&f, &[1, 1], &[2, 0, 1]);
        let b = mul(&f, &[1, 1], &[3, 1]);
        assert_eq!(gcd(&f, &a, &b), vec![1, 1]);
        let (qt, r) = divrem(&f, &a, &[2, 0, 1]);
        assert_eq!(qt, vec![1, 1]);
        assert!(r.is_empty());
    }
}
