use serde::{Deserialize, Serialize};

use super::formula::{Provenance, SymmetricBilinearFormula, Term};
use super::CcmaError;
use crate::gf::linalg::{self, Matrix};
use crate::gf::{ExtElem, Field, FieldTower};

/// Bound on `(#forms)^max_rank * (q^n - 1)^max_rank`.
pub const BRUTE_FORCE_BUDGET: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BruteForceRank {
    Exact(usize),
    /// No decomposition with at most `value - 1` terms exists.
    AtLeast(usize),
}

/// Result of the exhaustive search, with a witness formula on success.
#[derive(Debug, Clone)]
pub struct BruteForceOutcome {
    pub rank: BruteForceRank,
    pub witness: Option<SymmetricBilinearFormula>,
    pub subsets_checked: u64,
}

/// Minimum number of symmetric terms for `F_{q^n}/F_q`, searching every set
/// of distinct projectively normalized linear forms and solving linearly for
/// the constants.
pub fn brute_force_symmetric_rank(q: u64, n: usize, max_rank: usize) -> Result<BruteForceOutcome, CcmaError> {
    let tower = FieldTower::canonical(q, n)?;
    let f = tower.base().as_ref();
    let ext = tower.ext();
    let qn = ext.order();
    let n_forms = (qn - 1) / (q as u128 - 1);
    let size = (n_forms as f64).powi(max_rank as i32) * ((qn - 1) as f64).powi(max_rank as i32);
    if size > BRUTE_FORCE_BUDGET {
        return Err(CcmaError::BudgetExceeded(size as u128));
    }
    // projective representatives: first nonzero coordinate is one
    let forms: Vec<Vec<u32>> = (1..qn)
        .map(|i| ext.from_index(i).0)
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    debug_assert_eq!(forms.len() as u128, n_forms);
    let basis: Vec<ExtElem> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            ExtElem(v)
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let targets: Vec<ExtElem> = pairs.iter().map(|&(a, b)| ext.mul(&basis[a], &basis[b])).collect();
    let mut checked = 0u64;
    for r in 1..=max_rank {
        let mut idx: Vec<usize> = (0..r).collect();
        if r > forms.len() {
            break;
        }
        loop {
            checked += 1;
            let rows: Vec<Vec<u32>> = pairs
                .iter()
                .map(|&(a, b)| idx.iter().map(|&i| f.mul_el(forms[i][a], forms[i][b])).collect())
                .collect();
            let mat = Matrix::from_rows(rows, r);
            let sols: Option<Vec<Vec<u32>>> = (0..n)
                .map(|l| {
                    let rhs: Vec<u32> = targets.iter().map(|t| t.0[l]).collect();
                    linalg::solve(f, &mat, &rhs)
                })
                .collect();
            if let Some(sols) = sols {
                let terms = idx
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| Term {
                        x_star: forms[i].clone(),
                        c: (0..n).map(|l| sols[l][k]).collect(),
                    })
                    .collect();
                let witness = SymmetricBilinearFormula::new(tower.clone(), terms, Provenance::BruteForce)?;
                return Ok(BruteForceOutcome {
                    rank: BruteForceRank::Exact(r),
                    witness: Some(witness),
                    subsets_checked: checked,
                });
            }
            if !next_combination(&mut idx, forms.len()) {
                break;
            }
        }
    }
    Ok(BruteForceOutcome {
        rank: BruteForceRank::AtLeast(max_rank + 1),
        witness: None,
        subsets_checked: checked,
    })
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccma::VerifyMode;

    #[test]
    fn quadratic_extensions_need_three() {
        for q in [2u64, 3] {
            let out = brute_force_symmetric_rank(q, 2, 4).unwrap();
            assert_eq!(out.rank, BruteForceRank::Exact(3));
            assert!(out.witness.unwrap().verify(VerifyMode::Exhaustive).unwrap().pass);
        }
    }

    #[test]
    fn scalar_multiplication() {
        assert_eq!(brute_force_symmetric_rank(2, 1, 1).unwrap().rank, BruteForceRank::Exact(1));
    }

    #[test]
    fn lower_bound_when_max_is_small() {
        assert_eq!(brute_force_symmetric_rank(2, 2, 2).unwrap().rank, BruteForceRank::AtLeast(3));
    }

    #[test]
    fn budget() {
        assert!(matches!(brute_force_symmetric_rank(2, 6, 8), Err(CcmaError::BudgetExceeded(_))));
    }
}
