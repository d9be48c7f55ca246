//! Quadratic equations over finite fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Field;

/// Deterministic stream of candidate elements, random first and then the
/// whole field in index order. Subfield elements come first in index order
/// and are useless as non-residues or trace-one witnesses.
fn candidates<F: Field>(f: &F) -> impl Iterator<Item = F::Elem> + '_ {
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..64).map(move |_| rng.gen_range(0..q)).chain(0..q).map(|i| f.from_index(i))
}

/// Absolute trace to `F_2`; only meaningful in characteristic two.
pub fn trace2<F: Field>(f: &F, c: &F::Elem) -> F::Elem {
    let k = f.order().trailing_zeros();
    let mut term = c.clone();
    let mut acc = c.clone();
    for _ in 1..k {
        term = f.mul(&term, &term);
        acc = f.add(&acc, &term);
    }
    acc
}

/// Square root in odd characteristic (Tonelli–Shanks), `None` for
/// non-residues. In characteristic two the unique root `c^(Q/2)`.
pub fn sqrt<F: Field>(f: &F, c: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(c) {
        return Some(f.zero());
    }
    let q = f.order();
    if f.characteristic() == 2 {
        return Some(f.pow(c, q / 2));
    }
    if !f.is_one(&f.pow(c, (q - 1) / 2)) {
        return None;
    }
    let s = (q - 1).trailing_zeros();
    let odd = (q - 1) >> s;
    let nonres = candidates(f)
        .find(|z| !f.is_one(&f.pow(z, (q - 1) / 2)))
        .expect("odd-order fields have non-residues");
    let mut m = s;
    let mut cc = f.pow(&nonres, odd);
    let mut t = f.pow(c, odd);
    let mut r = f.pow(c, odd.div_ceil(2));
    while !f.is_one(&t) {
        let mut i = 0;
        let mut t2 = t.clone();
        while !f.is_one(&t2) {
            t2 = f.mul(&t2, &t2);
            i += 1;
        }
        let mut b = cc.clone();
        for _ in 0..(m - i - 1) {
            b = f.mul(&b, &b);
        }
        m = i;
        cc = f.mul(&b, &b);
        t = f.mul(&t, &cc);
        r = f.mul(&r, &b);
    }
    Some(r)
}

/// One solution of `z^2 + z = c` in characteristic two, if any.
pub fn artin_schreier<F: Field>(f: &F, c: &F::Elem) -> Option<F::Elem> {
    if !f.is_zero(&trace2(f, c)) {
        return None;
    }
    let k = f.order().trailing_zeros();
    if k % 2 == 1 {
        // half trace
        let mut term = c.clone();
        let mut acc = c.clone();
        for _ in 0..(k - 1) / 2 {
            term = f.mul(&term, &term);
            term = f.mul(&term, &term);
            acc = f.add(&acc, &term);
        }
        return Some(acc);
    }
    // z = sum_{i=1}^{k-1} (sum_{j<i} d^(2^j)) c^(2^i) with Tr(d) = 1
    let d = candidates(f)
        .find(|d| f.is_one(&trace2(f, d)))?;
    let mut partial = d.clone();
    let mut d_pow = d;
    let mut c_pow = f.mul(c, c);
    let mut z = f.zero();
    for _ in 1..k {
        z = f.add(&z, &f.mul(&partial, &c_pow));
        d_pow = f.mul(&d_pow, &d_pow);
        partial = f.add(&partial, &d_pow);
        c_pow = f.mul(&c_pow, &c_pow);
    }
    Some(z)
}

/// All solutions of `y^2 + h y = g`, sorted by canonical index.
pub fn solve_quadratic<F: Field>(f: &F, h: &F::Elem, g: &F::Elem) -> Vec<F::Elem> {
    let mut out = if f.characteristic() == 2 {
        if f.is_zero(h) {
            vec![sqrt(f, g).expect("squaring is bijective")]
        } else {
            let c = f.div(g, &f.mul(h, h)).expect("h nonzero");
            match artin_schreier(f, &c) {
                None => Vec::new(),
                Some(z) => {
                    let y0 = f.mul(h, &z);
                    let y1 = f.add(&y0, h);
                    vec![y0, y1]
                }
            }
        }
    } else {
        let two = f.add(&f.one(), &f.one());
        let four = f.add(&two, &two);
        let disc = f.add(&f.mul(h, h), &f.mul(&four, g));
        match sqrt(f, &disc) {
            None => Vec::new(),
            Some(s) => {
                let inv2 = f.inv(&two).expect("odd characteristic");
                let y0 = f.mul(&f.sub(&s, h), &inv2);
                let y1 = f.mul(&f.sub(&f.neg(&s), h), &inv2);
                if y0 == y1 {
                    vec![y0]
                } else {
                    vec![y0, y1]
                }
            }
        }
    };
    out.sort_by_key(|y| f.index(y));
    out
}
