use std::fmt;

use super::{poly, Field, GfError};
use crate::arith;

/// Largest `q` for which log/antilog tables are built.
const MAX_ORDER: u64 = 1 << 16;

/// `F_q = F_p[s]/(m(s))`, or `F_p` itself when no modulus is given.
///
/// Elements are `u32` values `sum a_i p^i` where `a_i` are the coefficients of
/// the residue polynomial. Multiplication goes through discrete-log tables
/// built from the smallest primitive element.
#[derive(Clone)]
pub struct BaseField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Option<Vec<u32>>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.p)
            .field("q", &self.order)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

impl BaseField {
    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, None)
    }

    /// Builds `F_p[s]/(modulus)`. `modulus` lists coefficients in `F_p`, low
    /// degree first, and must be monic and irreducible.
    pub fn new(p: u64, modulus: Option<Vec<u32>>) -> Result<Self, GfError> {
        if !arith::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        // a degree-one modulus describes F_p itself
        let modulus = modulus.filter(|m| !(m.len() == 2 && m[1] == 1));
        let degree = match &modulus {
            None => 1,
            Some(m) => {
                if m.len() < 2 || *m.last().unwrap() != 1 || m.iter().any(|&c| c as u64 >= p) {
                    return Err(GfError::BadModulus);
                }
                let fp = Self::prime(p)?;
                if !poly::is_irreducible(&fp, m) {
                    return Err(GfError::Reducible);
                }
                (m.len() - 1) as u32
            }
        };
        let order = arith::checked_pow(p, degree).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(GfError::TooLarge(order));
        }
        let mut field = BaseField {
            p: p as u32,
            degree,
            order: order as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        field.build_tables();
        Ok(field)
    }

    /// `F_{p^s}` with the lexicographically first irreducible modulus.
    pub fn with_degree(p: u64, s: u32) -> Result<Self, GfError> {
        if s == 1 {
            return Self::prime(p);
        }
        let fp = Self::prime(p)?;
        let m = poly::find_irreducible(&fp, s as usize);
        Self::new(p, Some(m))
    }

    /// Canonical field of order `q`.
    pub fn of_order(q: u64) -> Result<Self, GfError> {
        let (p, s) = arith::prime_power(q).ok_or(GfError::NotPrime(q))?;
        Self::with_degree(p, s)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.order
    }

    /// `s` in `q = p^s`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Multiplication without tables, used only while building them.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        match &self.modulus {
            None => ((a as u64 * b as u64) % p) as u32,
            Some(m) => {
                let s = self.degree as usize;
                let da = self.digits(a);
                let db = self.digits(b);
                let mut prod = vec![0u64; 2 * s - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
                    }
                }
                for k in (s..2 * s - 1).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for j in 0..s {
                            prod[k - s + j] = (prod[k - s + j] + (p - c) * m[j] as u64) % p;
                        }
                        prod[k] = 0;
                    }
                }
                let digits: Vec<u32> = prod[..s].iter().map(|&c| c as u32).collect();
                self.from_digits(&digits)
            }
        }
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.degree {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale = scale.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn build_tables(&mut self) {
        let q = self.order;
        let mut exp = Vec::new();
        for g in 2..q.max(3) {
            if q == 2 {
                break;
            }
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 || exp.len() >= q as usize {
                    break;
                }
            }
            if exp.len() == (q - 1) as usize {
                break;
            }
        }
        if q == 2 {
            exp = vec![1];
        }
        debug_assert_eq!(exp.len(), (q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
        self.exp = doubled;
        self.log = log;
        if self.p != 2 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.slow_add(a, b) as u16;
                }
            }
            self.add_table = Some(t);
        }
    }

    #[inline]
    pub fn add_el(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.order + b) as usize] as u32
        } else {
            self.slow_add(a, b)
        }
    }

    #[inline]
    pub fn neg_el(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        let mut x = a;
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.degree {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * scale;
            scale = scale.wrapping_mul(self.p);
            x /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub_el(&self, a: u32, b: u32) -> u32 {
        self.add_el(a, self.neg_el(b))
    }

    #[inline]
    pub fn mul_el(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.log[a as usize] + self.log[b as usize];
        self.exp[l as usize]
    }

    pub fn inv_el(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let l = self.log[a as usize];
        Ok(if l == 0 { 1 } else { self.exp[(self.order - 1 - l) as usize] })
    }

    /// The `p`-power Frobenius.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(&a, self.p as u128)
    }

    /// Embeds an element of the prime field.
    pub fn from_prime(&self, a: u32) -> u32 {
        a % self.p
    }

    /// Generator used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }
}

impl Field for BaseField {
    type Elem = u32;

    fn characteristic(&self) -> u32 {
        self.p
    }
    fn order(&self) -> u128 {
        self.order as u128
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_el(*a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.sub_el(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg_el(*a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_el(*a, *b)
    }
    fn inv(&self, a: &u32) -> Result<u32, GfError> {
        self.inv_el(*a)
    }
    fn from_index(&self, i: u128) -> u32 {
        debug_assert!(i < self.order as u128);
        i as u32
    }
    fn index(&self, a: &u32) -> u128 {
        *a as u128
    }
    fn pow(&self, a: &u32, e: u128) -> u32 {
        if *a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[*a as usize] as u128 * (e % (self.order as u128 - 1).max(1));
        self.exp[(l % (self.order as u128 - 1).max(1)) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_multiplication() {
        let f4 = BaseField::with_degree(2, 2).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        // t * t = t + 1, encodings t = 2, t + 1 = 3
        assert_eq!(f4.mul_el(2, 2), 3);
    }

    #[test]
    fn prime_field_inverse() {
        let f7 = BaseField::prime(7).unwrap();
        for a in 1..7 {
            assert_eq!(f7.mul_el(a, f7.inv_el(a).unwrap()), 1);
        }
        assert_eq!(f7.inv_el(0), Err(GfError::ZeroInverse));
    }

    #[test]
    fn rejects_composite_and_reducible() {
        assert_eq!(BaseField::prime(9), Err(GfError::NotPrime(9)));
        // t^2 + 1 = (t + 1)^2 over F_2
        assert_eq!(BaseField::new(2, Some(vec![1, 0, 1])), Err(GfError::Reducible));
    }

    #[test]
    fn fermat_little_exhaustive() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27, 49, 64] {
            let f = BaseField::of_order(q).unwrap();
            for a in 0..q as u32 {
                assert_eq!(f.pow(&a, q as u128), a, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn addition_matches_digitwise() {
        let f = BaseField::of_order(27).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                let da = f.digits(a);
                let db = f.digits(b);
                let ds: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.add_el(a, b), f.from_digits(&ds));
                assert_eq!(f.sub_el(f.add_el(a, b), b), a);
            }
        }
    }
}
