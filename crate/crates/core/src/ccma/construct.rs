use std::sync::Arc;

use super::formula::{ConstructionPlan, Provenance, SymmetricBilinearFormula, Term};
use super::CcmaError;
use crate::function_field::{
    divisor_class_is_principal, enumerate_places, evaluate, places_iter, riemann_roch_basis, Curve, Divisor, Place,
    RRBasis,
};
use crate::gf::linalg::{self, Matrix, RowSpace};
use crate::gf::{BaseField, ExtField, FieldTower};

/// Bound on the number of divisors `D` tried per place `Q`.
pub const MAX_DIVISOR_CANDIDATES: usize = 32;
/// Number of degree-`n` places tried.
pub const MAX_Q_PLACES: usize = 3;
/// Places of one degree used as building blocks for `D`.
const RESERVE_PER_DEGREE: usize = 3;

/// Evaluation at degree-one places only.
pub fn construct_case1(curve: &Curve, n: usize) -> Result<SymmetricBilinearFormula, CcmaError> {
    construct(curve, n, false)
}

/// Evaluation at places of degree one and two, each degree-two product
/// expanded through a rank-3 formula for `F_{q^2}/F_q`.
pub fn construct_case3(curve: &Curve, n: usize) -> Result<SymmetricBilinearFormula, CcmaError> {
    construct(curve, n, true)
}

/// `(N1, N2)`: numbers of places of degree one and two.
pub fn place_counts(curve: &Curve) -> Result<(u64, u64), CcmaError> {
    let c1 = curve.point_count(1)? as u64;
    let c2 = curve.point_count(2)? as u64;
    Ok((c1, (c2 - c1) / 2))
}

fn construct(curve: &Curve, n: usize, case3: bool) -> Result<SymmetricBilinearFormula, CcmaError> {
    if n == 0 {
        return Err(CcmaError::Hypothesis("extension degree must be positive".into()));
    }
    let g = curve.genus() as i64;
    let ni = n as i64;
    let (n1, n2) = place_counts(curve)?;
    if case3 {
        if n1 as i64 + 2 * n2 as i64 <= 2 * ni + 4 * g - 2 {
            return Err(CcmaError::Hypothesis(format!(
                "N1 + 2 N2 = {} <= 2n + 4g - 2 = {}",
                n1 + 2 * n2,
                2 * ni + 4 * g - 2
            )));
        }
    } else if n1 as i64 <= 2 * ni + 2 * g - 2 {
        return Err(CcmaError::Hypothesis(format!(
            "N1 = {n1} <= 2n + 2g - 2 = {}",
            2 * ni + 2 * g - 2
        )));
    }

    let deg1 = enumerate_places(curve, 1)?;
    let deg2 = if case3 { enumerate_places(curve, 2)? } else { Vec::new() };
    let rank3 = if case3 && !deg2.is_empty() {
        let line = Curve::projective_line(curve.base().clone());
        Some(construct(&line, 2, false)?)
    } else {
        None
    };
    let q_places: Vec<Place> = places_iter(curve, n).take(MAX_Q_PLACES).filter_map(Result::ok).collect();
    if q_places.is_empty() {
        return Err(CcmaError::NoPlaceOfDegree(n));
    }
    let needed = (2 * ni + g - 1) as usize;
    let mut best = 0;
    for qp in &q_places {
        let mut tried = 0;
        for stage in 0..4 {
            for d in divisor_candidates(curve, stage, ni + g - 1, qp, case3, &deg1)? {
                if tried == MAX_DIVISOR_CANDIDATES {
                    break;
                }
                tried += 1;
                match attempt(curve, n, qp, &d, &deg1, &deg2, rank3.as_ref())? {
                    Attempt::Done(f) => return Ok(f),
                    Attempt::Rank(r) => best = best.max(r),
                    Attempt::Skip => {}
                }
            }
        }
    }
    Err(CcmaError::NoFullRankSelection { best, needed })
}

/// Divisors of degree `delta` avoiding `q` and, except in the last stage,
/// every degree-one place (and degree-two places when those are evaluated).
fn divisor_candidates(
    curve: &Curve,
    stage: usize,
    delta: i64,
    q: &Place,
    case3: bool,
    deg1: &[Place],
) -> Result<Vec<Divisor>, CcmaError> {
    let min_deg = if case3 { 3 } else { 2 };
    let reserve = |d: i64| -> Vec<Place> {
        if d < min_deg {
            return Vec::new();
        }
        places_iter(curve, d as usize)
            .filter_map(Result::ok)
            .filter(|p| p != q)
            .take(RESERVE_PER_DEGREE)
            .collect()
    };
    let mut out = Vec::new();
    match stage {
        0 => {
            if delta == 0 {
                out.push(Divisor::zero());
            }
            for p in reserve(delta) {
                out.push(Divisor::from_place(&p, 1));
            }
        }
        1 => {
            for a in min_deg..=delta / 2 {
                let ra = reserve(a);
                let rb = reserve(delta - a);
                for pa in ra.iter().take(2) {
                    for pb in rb.iter().take(2) {
                        out.push(Divisor::from_terms([(pa, 1), (pb, 1)]));
                    }
                }
            }
        }
        2 => {
            for k in min_deg..min_deg + 3 {
                if delta + k < min_deg {
                    continue;
                }
                let ra = reserve(delta + k);
                let rb = reserve(k);
                for pa in ra.iter().take(2) {
                    for pb in rb.iter().take(2) {
                        if pa != pb {
                            out.push(Divisor::from_terms([(pa, 1), (pb, -1)]));
                        }
                    }
                }
            }
        }
        _ => {
            // sacrifice rational places when there are spare ones
            if delta > 0 {
                for p in deg1.iter().rev().take(RESERVE_PER_DEGREE) {
                    out.push(Divisor::from_place(p, delta));
                }
            }
        }
    }
    Ok(out)
}

enum Attempt {
    Done(SymmetricBilinearFormula),
    /// Full rank not reached; best rank achieved.
    Rank(usize),
    Skip,
}

fn coords(values: &[crate::gf::ExtElem], l: usize) -> Vec<u32> {
    values.iter().map(|v| v.0[l]).collect()
}

fn eval_all(curve: &Curve, basis: &RRBasis, p: &Place) -> Result<Vec<crate::gf::ExtElem>, CcmaError> {
    basis
        .functions
        .iter()
        .map(|f| evaluate(curve, f, p).map_err(CcmaError::from))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    curve: &Curve,
    n: usize,
    qp: &Place,
    d: &Divisor,
    deg1: &[Place],
    deg2: &[Place],
    rank3: Option<&SymmetricBilinearFormula>,
) -> Result<Attempt, CcmaError> {
    let f: &BaseField = curve.base().as_ref();
    let g = curve.genus() as usize;
    let evaluation: Vec<Place> = deg1
        .iter()
        .chain(deg2)
        .filter(|p| d.multiplicity(p) == 0)
        .cloned()
        .collect();
    let capacity: usize = evaluation.iter().map(|p| p.degree()).sum();
    let needed = 2 * n + g - 1;
    if capacity < needed {
        return Ok(Attempt::Skip);
    }
    if g == 1 && d.multiplicity(qp) == 0 {
        let mut dq = d.clone();
        dq.add_place(qp, -1);
        if divisor_class_is_principal(curve, &dq)? {
            return Ok(Attempt::Skip);
        }
    }
    let ld = riemann_roch_basis(curve, d)?;
    if ld.dimension() != n {
        return Ok(Attempt::Skip);
    }
    let ext: &Arc<ExtField> = qp.residue_field();
    let fq_vals = eval_all(curve, &ld, qp)?;
    let mut e_q = Matrix::filled(n, n, 0u32);
    for (j, v) in fq_vals.iter().enumerate() {
        for i in 0..n {
            e_q.set(i, j, v.0[i]);
        }
    }
    let Some(e_inv) = linalg::inverse(f, &e_q) else {
        return Ok(Attempt::Skip);
    };
    let l2d = riemann_roch_basis(curve, &d.scale(2))?;
    let big_n = l2d.dimension();
    if big_n != needed {
        return Err(CcmaError::Internal(format!(
            "dim L(2D) = {big_n}, expected {needed}"
        )));
    }
    // greedy row selection, degree-one places first
    let mut space = RowSpace::new(big_n);
    let mut selected: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut row_owner: Vec<(usize, usize)> = Vec::new();
    for (idx, p) in evaluation.iter().enumerate() {
        if space.rank() == big_n {
            break;
        }
        let vals = eval_all(curve, &l2d, p)?;
        let prow: Vec<Vec<u32>> = (0..p.degree()).map(|l| coords(&vals, l)).collect();
        let mut grew = false;
        for r in &prow {
            grew |= space.insert(f, r);
        }
        if grew {
            selected.push(idx);
            for (l, r) in prow.into_iter().enumerate() {
                rows.push(r);
                row_owner.push((idx, l));
            }
        }
    }
    if space.rank() < big_n {
        return Ok(Attempt::Rank(space.rank()));
    }
    let cost: usize = selected.iter().map(|&i| if evaluation[i].degree() == 1 { 1 } else { 3 }).sum();
    if cost > 3 * n + 6 * g {
        return Ok(Attempt::Rank(space.rank()));
    }
    // left inverse of the selected rows
    let mut pick = RowSpace::new(big_n);
    let chosen: Vec<usize> = (0..rows.len()).filter(|&i| pick.insert(f, &rows[i])).collect();
    let square = Matrix::from_rows(chosen.iter().map(|&i| rows[i].clone()).collect(), big_n);
    let sq_inv = linalg::inverse(f, &square).ok_or_else(|| CcmaError::Internal("selected rows singular".into()))?;
    let mut left = Matrix::filled(big_n, rows.len(), 0u32);
    for (k, &ri) in chosen.iter().enumerate() {
        for r in 0..big_n {
            left.set(r, ri, *sq_inv.get(r, k));
        }
    }
    let gq_vals = eval_all(curve, &l2d, qp)?;
    let mut g_q = Matrix::filled(n, big_n, 0u32);
    for (k, v) in gq_vals.iter().enumerate() {
        for i in 0..n {
            g_q.set(i, k, v.0[i]);
        }
    }
    let c_mat = linalg::mul(f, &g_q, &left);

    let mut terms = Vec::new();
    let mut row = 0;
    for &idx in &selected {
        let p = &evaluation[idx];
        let vals = eval_all(curve, &ld, p)?;
        if p.degree() == 1 {
            let a = coords(&vals, 0);
            terms.push(Term {
                x_star: linalg::vec_mul(f, &a, &e_inv),
                c: c_mat.column(row),
            });
            row += 1;
        } else {
            let r3 = rank3.ok_or_else(|| CcmaError::Internal("degree-two place without a rank-3 formula".into()))?;
            let a = Matrix::from_rows(vec![coords(&vals, 0), coords(&vals, 1)], n);
            let m = linalg::mul(f, &a, &e_inv);
            let (c0, c1) = (c_mat.column(row), c_mat.column(row + 1));
            for t in r3.terms() {
                let c: Vec<u32> = c0
                    .iter()
                    .zip(&c1)
                    .map(|(&u, &v)| f.add_el(f.mul_el(t.c[0], u), f.mul_el(t.c[1], v)))
                    .collect();
                terms.push(Term {
                    x_star: linalg::vec_mul(f, &t.x_star, &m),
                    c,
                });
            }
            row += 2;
        }
    }
    debug_assert_eq!(row, rows.len());
    let plan = ConstructionPlan {
        curve: curve.spec(),
        q_place: qp.spec(),
        divisor: d.spec(),
        evaluation_places: evaluation.iter().map(|p| p.spec()).collect(),
        selected,
        left_inverse: (0..big_n).map(|r| left.row(r).to_vec()).collect(),
    };
    let tower = FieldTower::from_parts(ext.clone());
    let formula = SymmetricBilinearFormula::new(tower, terms, Provenance::Construction(plan))?;
    let report = formula.verify(formula.strongest_mode(0))?;
    if !report.pass {
        return Err(CcmaError::VerificationFailed(report));
    }
    Ok(Attempt::Done(formula))
}
