use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{BaseField, ExtElem, ExtField, Field, GfError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Prime,
    Base,
    Extension,
}

/// `F_p -> F_q -> F_{q^n}` with fixed defining polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTower {
    base: Arc<BaseField>,
    ext: Arc<ExtField>,
}

/// Level-tagged element for callers that do not know the level statically.
///
/// `coeffs` holds coordinates over the next lower level: one prime-field
/// residue at [`Level::Prime`], `s` prime-field digits at [`Level::Base`] and
/// `n` encoded `F_q` elements at [`Level::Extension`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerElement {
    pub level: Level,
    pub coeffs: Vec<u32>,
}

impl FieldTower {
    /// `base_poly` over `F_p` defines `F_q` (absent when `q = p`); `ext_poly`
    /// over `F_q` defines `F_{q^n}`. Both are checked for irreducibility.
    pub fn new(p: u64, base_poly: Option<Vec<u32>>, ext_poly: Vec<u32>) -> Result<Self, GfError> {
        let base = Arc::new(BaseField::new(p, base_poly)?);
        let ext = Arc::new(ExtField::new(base.clone(), ext_poly)?);
        Ok(FieldTower { base, ext })
    }

    pub fn canonical(q: u64, n: usize) -> Result<Self, GfError> {
        let base = Arc::new(BaseField::of_order(q)?);
        let ext = Arc::new(ExtField::canonical(base.clone(), n));
        Ok(FieldTower { base, ext })
    }

    pub fn from_parts(ext: Arc<ExtField>) -> Self {
        FieldTower {
            base: ext.base().clone(),
            ext,
        }
    }

    pub fn base(&self) -> &Arc<BaseField> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<ExtField> {
        &self.ext
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.ext.degree()
    }

    fn width(&self, level: Level) -> usize {
        match level {
            Level::Prime => 1,
            Level::Base => self.base.degree() as usize,
            Level::Extension => self.ext.degree(),
        }
    }

    pub fn element(&self, level: Level, coeffs: Vec<u32>) -> Result<TowerElement, GfError> {
        if coeffs.len() != self.width(level) {
            return Err(GfError::InvalidElement(format!(
                "{level:?} element needs {} coordinates",
                self.width(level)
            )));
        }
        let bound = match level {
            Level::Prime | Level::Base => self.base.p(),
            Level::Extension => self.base.q(),
        };
        if coeffs.iter().any(|&c| c >= bound) {
            return Err(GfError::InvalidElement("coordinate out of range".into()));
        }
        Ok(TowerElement { level, coeffs })
    }

    pub fn from_base(&self, a: u32) -> TowerElement {
        TowerElement {
            level: Level::Base,
            coeffs: self.base.digits(a),
        }
    }

    pub fn from_ext(&self, a: &ExtElem) -> TowerElement {
        TowerElement {
            level: Level::Extension,
            coeffs: a.0.clone(),
        }
    }

    fn check(&self, a: &TowerElement, b: &TowerElement) -> Result<Level, GfError> {
        if a.level != b.level {
            return Err(GfError::LevelMismatch {
                expected: a.level,
                found: b.level,
            });
        }
        for x in [a, b] {
            if x.coeffs.len() != self.width(x.level) {
                return Err(GfError::InvalidElement("wrong coordinate count".into()));
            }
        }
        Ok(a.level)
    }

    fn binary(
        &self,
        a: &TowerElement,
        b: &TowerElement,
        prime: impl Fn(u64, u64, u64) -> u64,
        base: impl Fn(&BaseField, u32, u32) -> u32,
        ext: impl Fn(&ExtField, &ExtElem, &ExtElem) -> ExtElem,
    ) -> Result<TowerElement, GfError> {
        let level = self.check(a, b)?;
        let coeffs = match level {
            Level::Prime => {
                let p = self.base.p() as u64;
                vec![prime(a.coeffs[0] as u64, b.coeffs[0] as u64, p) as u32]
            }
            Level::Base => {
                let x = self.base.from_digits(&a.coeffs);
                let y = self.base.from_digits(&b.coeffs);
                self.base.digits(base(&self.base, x, y))
            }
            Level::Extension => ext(&self.ext, &ExtElem(a.coeffs.clone()), &ExtElem(b.coeffs.clone())).0,
        };
        Ok(TowerElement { level, coeffs })
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement, GfError> {
        self.binary(a, b, |x, y, p| (x + y) % p, |f, x, y| f.add_el(x, y), |f, x, y| f.add(x, y))
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement, GfError> {
        self.binary(a, b, |x, y, p| (x + p - y) % p, |f, x, y| f.sub_el(x, y), |f, x, y| f.sub(x, y))
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement, GfError> {
        self.binary(a, b, |x, y, p| x * y % p, |f, x, y| f.mul_el(x, y), |f, x, y| f.mul(x, y))
    }

    pub fn inv(&self, a: &TowerElement) -> Result<TowerElement, GfError> {
        self.check(a, a)?;
        let coeffs = match a.level {
            Level::Prime => {
                let fp = BaseField::prime(self.base.p() as u64)?;
                vec![fp.inv_el(a.coeffs[0])?]
            }
            Level::Base => self.base.digits(self.base.inv_el(self.base.from_digits(&a.coeffs))?),
            Level::Extension => self.ext.inv(&ExtElem(a.coeffs.clone()))?.0,
        };
        Ok(TowerElement { level: a.level, coeffs })
    }

    pub fn pow(&self, a: &TowerElement, e: u128) -> Result<TowerElement, GfError> {
        self.check(a, a)?;
        let coeffs = match a.level {
            Level::Prime => {
                let fp = BaseField::prime(self.base.p() as u64)?;
                vec![fp.pow(&a.coeffs[0], e)]
            }
            Level::Base => self.base.digits(self.base.pow(&self.base.from_digits(&a.coeffs), e)),
            Level::Extension => self.ext.pow(&ExtElem(a.coeffs.clone()), e).0,
        };
        Ok(TowerElement { level: a.level, coeffs })
    }

    /// `a -> a^q` on the extension level, `a -> a^p` below it.
    pub fn frobenius(&self, a: &TowerElement) -> Result<TowerElement, GfError> {
        let e = match a.level {
            Level::Prime | Level::Base => self.base.p() as u128,
            Level::Extension => self.base.q() as u128,
        };
        self.pow(a, e)
    }

    /// Embeds an `F_q` element (base level) into `F_{q^n}`.
    pub fn embed(&self, a: &TowerElement) -> Result<TowerElement, GfError> {
        if a.level != Level::Base {
            return Err(GfError::LevelMismatch {
                expected: Level::Base,
                found: a.level,
            });
        }
        Ok(self.from_ext(&self.ext.embed(self.base.from_digits(&a.coeffs))))
    }

    pub fn lift(&self, a: &TowerElement) -> Result<TowerElement, GfError> {
        if a.level != Level::Extension {
            return Err(GfError::LevelMismatch {
                expected: Level::Extension,
                found: a.level,
            });
        }
        Ok(self.from_base(self.ext.lift(&ExtElem(a.coeffs.clone()))?))
    }

    /// Canonical serialization: an integer `sum a_i p^i` at the prime and base
    /// levels, an array of such integers at the extension level.
    pub fn encode(&self, a: &TowerElement) -> Value {
        match a.level {
            Level::Prime => Value::from(a.coeffs[0]),
            Level::Base => Value::from(self.base.from_digits(&a.coeffs)),
            Level::Extension => Value::from(a.coeffs.clone()),
        }
    }

    pub fn decode(&self, level: Level, v: &Value) -> Result<TowerElement, GfError> {
        let bad = || GfError::InvalidElement(v.to_string());
        match level {
            Level::Prime => {
                let x = v.as_u64().ok_or_else(bad)?;
                self.element(level, vec![u32::try_from(x).map_err(|_| bad())?])
            }
            Level::Base => {
                let x = v.as_u64().ok_or_else(bad)?;
                if x >= self.base.q() as u64 {
                    return Err(bad());
                }
                Ok(self.from_base(x as u32))
            }
            Level::Extension => {
                let arr = v.as_array().ok_or_else(bad)?;
                let coeffs = arr
                    .iter()
                    .map(|c| c.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()?;
                self.element(level, coeffs)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_mismatch_is_reported() {
        let t = FieldTower::canonical(4, 2).unwrap();
        let a = t.from_base(2);
        let b = t.from_ext(&t.ext().generator());
        assert!(matches!(t.add(&a, &b), Err(GfError::LevelMismatch { .. })));
    }

    #[test]
    fn f4_product_through_dynamic_api() {
        let t = FieldTower::new(2, None, vec![1, 1, 1]).unwrap();
        let x = t.from_ext(&t.ext().generator());
        let sq = t.mul(&x, &x).unwrap();
        assert_eq!(sq.coeffs, vec![1, 1]);
        let inv = t.inv(&x).unwrap();
        assert_eq!(t.mul(&x, &inv).unwrap().coeffs, vec![1, 0]);
    }

    #[test]
    fn encoding_roundtrip() {
        let t = FieldTower::canonical(9, 3).unwrap();
        let a = t.from_ext(&t.ext().from_index(500));
        let v = t.encode(&a);
        assert_eq!(t.decode(Level::Extension, &v).unwrap(), a);
        let b = t.from_base(7);
        assert_eq!(t.encode(&b), Value::from(7));
        assert_eq!(t.decode(Level::Base, &Value::from(7)).unwrap(), b);
        assert!(t.decode(Level::Base, &Value::from(9)).is_err());
    }

    #[test]
    fn embed_and_lift() {
        let t = FieldTower::canonical(4, 2).unwrap();
        for a in 0..4 {
            let e = t.embed(&t.from_base(a)).unwrap();
            assert_eq!(t.lift(&e).unwrap(), t.from_base(a));
        }
        let g = t.from_ext(&t.ext().generator());
        assert_eq!(t.lift(&g), Err(GfError::NotInSubfield));
    }

    #[test]
    fn rejects_reducible_extension() {
        // x^2 + x + 1 has the root t of F_4 = F_2[t]/(t^2+t+1)
        let r = FieldTower::new(2, Some(vec![1, 1, 1]), vec![1, 1, 1]);
        assert_eq!(r, Err(GfError::Reducible));
    }
}
