use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CcmaError;
use crate::function_field::{CurveSpec, DivisorSpec, PlaceSpec};
use crate::gf::{BaseField, ExtElem, ExtField, Field, FieldTower};

/// Exhaustive verification is allowed up to this many field elements.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 8;
/// Default number of sampled pairs.
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// One summand `x*(x) x*(y) c`: `x_star` holds the coefficients of the linear
/// form in the power basis, `c` the coordinates of the constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub x_star: Vec<u32>,
    pub c: Vec<u32>,
}

/// How a formula was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Construction(ConstructionPlan),
    Composed { outer_rank: usize, inner_rank: usize, inner_q: u32 },
    BruteForce,
    Manual,
}

/// Data of an interpolation construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub curve: CurveSpec,
    /// Place of degree `n` whose residue field is the extension.
    pub q_place: PlaceSpec,
    pub divisor: DivisorSpec,
    /// Candidate evaluation places in the order they were scanned.
    pub evaluation_places: Vec<PlaceSpec>,
    /// Indices into `evaluation_places` that carry terms.
    pub selected: Vec<usize>,
    /// Left inverse of the evaluation map on `L(2D)`, one row per basis
    /// function, one column per selected coordinate row.
    pub left_inverse: Vec<Vec<u32>>,
}

/// `x y = sum_i x_i*(x) x_i*(y) c_i` on `F_{q^n}` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricBilinearFormula {
    tower: FieldTower,
    terms: Vec<Term>,
    provenance: Provenance,
}

/// On-disk representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaFile {
    pub p: u32,
    /// Defining polynomial of `F_q` over `F_p`, absent when `q = p`.
    pub q_poly: Option<Vec<u32>>,
    /// Defining polynomial of `F_{q^n}` over `F_q`.
    pub n_poly: Vec<u32>,
    pub rank: usize,
    pub terms: Vec<Term>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub mode: VerifyMode,
    pub pairs_checked: u64,
    /// Coordinates of a pair on which the formula is wrong.
    pub first_failure: Option<(Vec<u32>, Vec<u32>)>,
}

impl SymmetricBilinearFormula {
    pub fn new(tower: FieldTower, terms: Vec<Term>, provenance: Provenance) -> Result<Self, CcmaError> {
        let n = tower.n();
        let q = tower.q();
        for t in &terms {
            if t.x_star.len() != n || t.c.len() != n {
                return Err(CcmaError::Malformed("term width differs from the extension degree".into()));
            }
            if t.x_star.iter().chain(&t.c).any(|&v| v >= q) {
                return Err(CcmaError::Malformed("coefficient outside F_q".into()));
            }
        }
        Ok(SymmetricBilinearFormula {
            tower,
            terms,
            provenance,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn n(&self) -> usize {
        self.tower.n()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Replaces one term; used to build deliberately broken formulas.
    pub fn with_term(mut self, i: usize, term: Term) -> Self {
        self.terms[i] = term;
        self
    }

    pub fn ext(&self) -> &ExtField {
        self.tower.ext()
    }

    /// Evaluates the formula on a pair.
    pub fn apply(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let f = self.tower.base().as_ref();
        let lx: Vec<u32> = self.terms.iter().map(|t| dot(f, &t.x_star, &x.0)).collect();
        let ly: Vec<u32> = self.terms.iter().map(|t| dot(f, &t.x_star, &y.0)).collect();
        self.combine(&lx, &ly)
    }

    fn combine(&self, lx: &[u32], ly: &[u32]) -> ExtElem {
        let f = self.tower.base().as_ref();
        let mut out = vec![0u32; self.n()];
        for ((t, &a), &b) in self.terms.iter().zip(lx).zip(ly) {
            let s = f.mul_el(a, b);
            if s == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(&t.c) {
                *o = f.add_el(*o, f.mul_el(s, c));
            }
        }
        ExtElem(out)
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<VerifyReport, CcmaError> {
        let ext = self.ext();
        let f = self.tower.base().as_ref();
        let forms = |x: &ExtElem| -> Vec<u32> { self.terms.iter().map(|t| dot(f, &t.x_star, &x.0)).collect() };
        let mut report = VerifyReport {
            pass: true,
            mode,
            pairs_checked: 0,
            first_failure: None,
        };
        match mode {
            VerifyMode::Exhaustive => {
                if ext.order() > EXHAUSTIVE_LIMIT {
                    return Err(CcmaError::ExhaustiveTooLarge(ext.order()));
                }
                let elems: Vec<ExtElem> = ext.elements().collect();
                let lin: Vec<Vec<u32>> = elems.iter().map(forms).collect();
                for (i, x) in elems.iter().enumerate() {
                    for (j, y) in elems.iter().enumerate() {
                        report.pairs_checked += 1;
                        if self.combine(&lin[i], &lin[j]) != ext.mul(x, y) {
                            report.pass = false;
                            report.first_failure = Some((x.0.clone(), y.0.clone()));
                            return Ok(report);
                        }
                    }
                }
            }
            VerifyMode::Sampled { pairs, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let order = ext.order();
                for _ in 0..pairs {
                    let x = ext.from_index(rng.gen_range(0..order));
                    let y = ext.from_index(rng.gen_range(0..order));
                    report.pairs_checked += 1;
                    if self.combine(&forms(&x), &forms(&y)) != ext.mul(&x, &y) {
                        report.pass = false;
                        report.first_failure = Some((x.0, y.0));
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }

    /// Exhaustive when the field is small enough, else sampled with the
    /// default pair count.
    pub fn strongest_mode(&self, seed: u64) -> VerifyMode {
        if self.ext().order() <= EXHAUSTIVE_LIMIT {
            VerifyMode::Exhaustive
        } else {
            VerifyMode::Sampled {
                pairs: DEFAULT_SAMPLES,
                seed,
            }
        }
    }

    pub fn to_file(&self) -> FormulaFile {
        FormulaFile {
            p: self.tower.p(),
            q_poly: self.tower.base().modulus().map(|m| m.to_vec()),
            n_poly: self.ext().modulus().to_vec(),
            rank: self.rank(),
            terms: self.terms.clone(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_file(file: &FormulaFile) -> Result<Self, CcmaError> {
        let tower = FieldTower::new(file.p as u64, file.q_poly.clone(), file.n_poly.clone())?;
        if file.rank != file.terms.len() {
            return Err(CcmaError::Malformed(format!(
                "rank {} but {} terms",
                file.rank,
                file.terms.len()
            )));
        }
        Self::new(tower, file.terms.clone(), file.provenance.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("formula serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CcmaError> {
        let file: FormulaFile = serde_json::from_str(s).map_err(|e| CcmaError::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }
}

pub(crate) fn dot(f: &BaseField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add_el(acc, f.mul_el(x, y)))
}

/// The `n(n+1)/2`-term formula from `x_i y_j + x_j y_i` products.
pub fn schoolbook(tower: &FieldTower) -> SymmetricBilinearFormula {
    let ext = tower.ext();
    let n = tower.n();
    let basis: Vec<ExtElem> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            ExtElem(v)
        })
        .collect();
    let mut terms = Vec::new();
    // x_i y_i e_i e_i, and for i < j: (x_i + x_j)(y_i + y_j) - x_i y_i - x_j y_j
    let mut diag: Vec<ExtElem> = (0..n).map(|i| ext.mul(&basis[i], &basis[i])).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut xs = vec![0; n];
            xs[i] = 1;
            xs[j] = 1;
            let cross = ext.mul(&basis[i], &basis[j]);
            terms.push(Term { x_star: xs, c: cross.0.clone() });
            diag[i] = ext.sub(&diag[i], &cross);
            diag[j] = ext.sub(&diag[j], &cross);
        }
    }
    for (i, d) in diag.into_iter().enumerate() {
        let mut xs = vec![0; n];
        xs[i] = 1;
        terms.insert(i, Term { x_star: xs, c: d.0 });
    }
    SymmetricBilinearFormula {
        tower: tower.clone(),
        terms,
        provenance: Provenance::Manual,
    }
}
