use std::fmt;
use std::sync::Arc;

use super::{poly, BaseField, Field, GfError};

/// Element of `F_{q^n}`: `n` coefficients in `F_q`, low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtElem(pub Vec<u32>);

impl ExtElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

/// `F_{q^n} = F_q[t]/(m(t))` for a monic irreducible `m` of degree `n`.
#[derive(Clone)]
pub struct ExtField {
    base: Arc<BaseField>,
    modulus: Vec<u32>,
    degree: usize,
    order: u128,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("q", &self.base.q())
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtField {}

impl ExtField {
    pub fn new(base: Arc<BaseField>, modulus: Vec<u32>) -> Result<Self, GfError> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(GfError::BadModulus);
        }
        if modulus.iter().any(|&c| c >= base.q()) {
            return Err(GfError::BadModulus);
        }
        if !poly::is_irreducible(base.as_ref(), &modulus) {
            return Err(GfError::Reducible);
        }
        let degree = modulus.len() - 1;
        let order = (base.q() as u128)
            .checked_pow(degree as u32)
            .ok_or(GfError::TooLarge(u128::MAX))?;
        Ok(ExtField {
            base,
            modulus,
            degree,
            order,
        })
    }

    /// `F_{q^n}` defined by the canonical (lexicographically first) irreducible.
    pub fn canonical(base: Arc<BaseField>, n: usize) -> Self {
        let m = poly::find_irreducible(base.as_ref(), n);
        Self::new(base, m).expect("canonical modulus is irreducible")
    }

    pub fn base(&self) -> &Arc<BaseField> {
        &self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Checked constructor for externally supplied coefficients.
    pub fn element(&self, coeffs: Vec<u32>) -> Result<ExtElem, GfError> {
        if coeffs.len() != self.degree {
            return Err(GfError::InvalidElement(format!(
                "expected {} coefficients, got {}",
                self.degree,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.base.q()) {
            return Err(GfError::InvalidElement(format!("coefficient {c} outside F_{}", self.base.q())));
        }
        Ok(ExtElem(coeffs))
    }

    /// The class of `t`.
    pub fn generator(&self) -> ExtElem {
        let mut v = vec![0; self.degree];
        if self.degree > 1 {
            v[1] = 1;
        } else {
            v[0] = self.base.neg_el(self.modulus[0]);
        }
        ExtElem(v)
    }

    pub fn embed(&self, c: u32) -> ExtElem {
        let mut v = vec![0; self.degree];
        v[0] = c;
        ExtElem(v)
    }

    /// Inverse of [`embed`](Self::embed) on the image of `F_q`.
    pub fn lift(&self, a: &ExtElem) -> Result<u32, GfError> {
        if a.0[1..].iter().any(|&c| c != 0) {
            return Err(GfError::NotInSubfield);
        }
        Ok(a.0[0])
    }

    pub fn scalar_mul(&self, c: u32, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.mul_el(c, x)).collect())
    }

    /// `a^q`.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        self.pow(a, self.base.q() as u128)
    }

    /// Evaluates a polynomial with `F_q` coefficients at `x`.
    pub fn eval_base_poly(&self, coeffs: &[u32], x: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc.0[0] = self.base.add_el(acc.0[0], c);
        }
        acc
    }

    /// Frobenius orbit `a, a^q, a^{q^2}, ...` up to its first repetition.
    pub fn orbit(&self, a: &ExtElem) -> Vec<ExtElem> {
        let mut out = vec![a.clone()];
        let mut cur = self.frobenius(a);
        while cur != *a {
            out.push(cur.clone());
            cur = self.frobenius(&cur);
        }
        out
    }

    /// Minimal polynomial over `F_q` (monic, coefficients in `F_q`).
    pub fn minimal_polynomial(&self, a: &ExtElem) -> Vec<u32> {
        let mut acc = vec![self.one()];
        for r in self.orbit(a) {
            let lin = vec![self.neg(&r), self.one()];
            acc = poly::mul(self, &acc, &lin);
        }
        acc.iter()
            .map(|c| self.lift(c).expect("minimal polynomial has F_q coefficients"))
            .collect()
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn characteristic(&self) -> u32 {
        self.base.p()
    }

    fn order(&self) -> u128 {
        self.order
    }

    fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.degree])
    }

    fn one(&self) -> ExtElem {
        self.embed(1)
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.0.len(), self.degree);
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add_el(x, y)).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.sub_el(x, y)).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.neg_el(x)).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let n = self.degree;
        let bf = self.base.as_ref();
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = bf.add_el(prod[i + j], bf.mul_el(x, y));
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for j in 0..n {
                    let m = self.modulus[j];
                    if m != 0 {
                        prod[k - n + j] = bf.sub_el(prod[k - n + j], bf.mul_el(c, m));
                    }
                }
            }
        }
        prod.truncate(n);
        ExtElem(prod)
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, GfError> {
        if self.is_zero(a) {
            return Err(GfError::ZeroInverse);
        }
        let mut p = a.0.clone();
        poly::trim(self.base.as_ref(), &mut p);
        let inv = poly::inverse_mod(self.base.as_ref(), &p, &self.modulus).ok_or(GfError::ZeroInverse)?;
        let mut v = inv;
        v.resize(self.degree, 0);
        Ok(ExtElem(v))
    }

    fn from_index(&self, mut i: u128) -> ExtElem {
        let q = self.base.q() as u128;
        let mut v = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            v.push((i % q) as u32);
            i /= q;
        }
        ExtElem(v)
    }

    fn index(&self, a: &ExtElem) -> u128 {
        let q = self.base.q() as u128;
        a.0.iter().rev().fold(0u128, |acc, &c| acc * q + c as u128)
    }
}
