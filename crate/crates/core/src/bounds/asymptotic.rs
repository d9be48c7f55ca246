use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::engine::BoundEngine;
use super::rational::{int, ratio_str, rat, round_half_up};
use super::BoundsError;
use crate::arith;

/// Base fields of the published comparison table.
pub const TABLE_QS: [u64; 6] = [5, 7, 8, 9, 11, 13];
/// Smallest prime power at least 15, where the crossover is checked.
pub const CROSSOVER_Q: u64 = 17;
pub const TABLE_HEADER: &str = "q,cor_iv8,prop3,winner";
/// Depth of the `best_bound` lookups feeding the generic bounds.
const LOOKUP_DEPTH: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// liminf of `mu^sym_q(k) / k`
    #[serde(rename = "m_sym")]
    Liminf,
    /// limsup of `mu^sym_q(k) / k`
    #[serde(rename = "M_sym")]
    Limsup,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Liminf => "m_sym",
            Quantity::Limsup => "M_sym",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Prop1,
    Cor1,
    Cor2,
    #[serde(rename = "Thm-square")]
    ThmSquare,
    Prop2,
    Prop3,
    Eq5,
    Eq6,
    Eq7,
    Eq8,
    #[serde(rename = "Thm6-even")]
    Thm6Even,
    #[serde(rename = "Thm6-odd")]
    Thm6Odd,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Prop1 => "Prop1",
            Source::Cor1 => "Cor1",
            Source::Cor2 => "Cor2",
            Source::ThmSquare => "Thm-square",
            Source::Prop2 => "Prop2",
            Source::Prop3 => "Prop3",
            Source::Eq5 => "Eq5",
            Source::Eq6 => "Eq6",
            Source::Eq7 => "Eq7",
            Source::Eq8 => "Eq8",
            Source::Thm6Even => "Thm6-even",
            Source::Thm6Odd => "Thm6-odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundValue {
    Exact(#[serde(with = "ratio_str")] BigRational),
    Approx(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => {
                use num_traits::ToPrimitive;
                r.to_f64().expect("finite")
            }
            BoundValue::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            BoundValue::Exact(r) => Some(r),
            BoundValue::Approx(_) => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => write!(f, "{r}"),
            BoundValue::Approx(v) => write!(f, "{v:.15}"),
        }
    }
}

/// A `mu^sym` value fed into a bound: `mu^sym_field(n) <= value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuUse {
    pub field: u64,
    pub n: usize,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRecord {
    /// The bound concerns `F_q`.
    pub q: u64,
    pub quantity: Quantity,
    pub value: BoundValue,
    pub source: Source,
    pub t: Option<u32>,
    pub mu: Option<MuUse>,
    /// `sqrt(q)` for bounds stated over a square field.
    pub root: Option<u64>,
}

impl AsymptoticRecord {
    fn exact(q: u64, quantity: Quantity, source: Source, value: BigRational) -> Self {
        AsymptoticRecord {
            q,
            quantity,
            value: BoundValue::Exact(value),
            source,
            t: None,
            mu: None,
            root: None,
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "q={} quantity={} source={} value={} approx={:.6}",
            self.q,
            self.quantity,
            self.source,
            self.value,
            self.value.to_f64()
        );
        if let Some(t) = self.t {
            s += &format!(" t={t}");
        }
        if let Some(m) = self.mu {
            s += &format!(" mu_field={} mu_n={} mu={}", m.field, m.n, m.value);
        }
        if let Some(r) = self.root {
            s += &format!(" root={r}");
        }
        s
    }
}

/// `c (1 + k / d)`
fn scaled(c: i128, k: i128, d: i128) -> BigRational {
    int(c) * (int(1) + rat(k, d))
}

/// Bounds on `m^sym_q` and `M^sym_q` from the closed formulas, each emitted
/// only when its precondition holds.
pub fn asymptotic_bounds(q: u64) -> Result<Vec<AsymptoticRecord>, BoundsError> {
    let (_, m) = arith::prime_power(q).ok_or(BoundsError::NotPrimePower(q))?;
    let mut out = Vec::new();
    let qi = q as i128;
    if let Some(r) = arith::exact_sqrt(q) {
        let ri = r as i128;
        let with_root = |mut rec: AsymptoticRecord| {
            rec.root = Some(r);
            rec
        };
        // A(q) = sqrt(q) - 1 for square q
        if ri - 1 > 2 {
            out.push(with_root(AsymptoticRecord::exact(
                q,
                Quantity::Liminf,
                Source::Prop1,
                scaled(2, 1, ri - 3),
            )));
        }
        if r >= 4 {
            out.push(with_root(AsymptoticRecord::exact(
                q,
                Quantity::Liminf,
                Source::Cor1,
                scaled(2, 1, ri - 3),
            )));
        }
        if q >= 25 {
            out.push(with_root(AsymptoticRecord::exact(
                q,
                Quantity::Liminf,
                Source::ThmSquare,
                scaled(2, 1, ri - 3),
            )));
        }
    }
    if q > 3 {
        out.push(AsymptoticRecord::exact(q, Quantity::Liminf, Source::Cor2, scaled(3, 1, qi - 3)));
    }
    if let Some(r) = arith::exact_sqrt(q).filter(|&r| r >= 4) {
        let mut rec = AsymptoticRecord::exact(q, Quantity::Limsup, Source::Prop2, scaled(2, 1, r as i128 - 3));
        rec.root = Some(r);
        out.push(rec);
    }
    if m % 2 == 1 && q >= 5 {
        out.push(AsymptoticRecord::exact(q, Quantity::Limsup, Source::Prop3, scaled(3, 2, qi - 3)));
    }
    Ok(out)
}

/// A bound that was not emitted, with the failed guard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suppressed {
    pub source: Source,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CacrBounds {
    pub records: Vec<AsymptoticRecord>,
    pub suppressed: Vec<Suppressed>,
}

/// Upper bounds on `M^sym_q` of the multiplication-friendly-code family for
/// one parameter `t`, with `mu^sym` values supplied by `mu_lookup(field, n)`.
pub fn cacr_bounds(
    q: u64,
    t: u32,
    mu_lookup: &mut dyn FnMut(u64, usize) -> Result<u64, BoundsError>,
) -> Result<CacrBounds, BoundsError> {
    arith::prime_power(q).ok_or(BoundsError::NotPrimePower(q))?;
    let mut out = CacrBounds::default();
    if t == 0 {
        return Ok(out);
    }
    let ti = t as i128;
    let qt = arith::checked_pow(q, t).filter(|&v| v < 1u128 << 100);
    let suppress = |out: &mut CacrBounds, source: Source, reason: String| {
        out.suppressed.push(Suppressed { source, reason });
    };
    let record = |source: Source, value: BoundValue, mu: Option<MuUse>, root: Option<u64>| AsymptoticRecord {
        q,
        quantity: Quantity::Limsup,
        value,
        source,
        t: Some(t),
        mu,
        root,
    };

    match qt {
        Some(qt) if qt > 5 => {
            let qt = qt as i128;
            let n = 2 * t as usize;
            let mu = mu_lookup(q, n)?;
            out.records.push(record(
                Source::Eq5,
                BoundValue::Exact(int(mu as i128) * rat(qt - 1, ti * (qt - 5))),
                Some(MuUse { field: q, n, value: mu }),
                None,
            ));
            out.records.push(record(
                Source::Eq7,
                BoundValue::Exact((int(4) - rat(1, ti)) * (int(1) + rat(4, qt - 5))),
                None,
                None,
            ));
        }
        Some(qt) => {
            suppress(&mut out, Source::Eq5, format!("q^t - 5 = {} <= 0", qt as i128 - 5));
            suppress(&mut out, Source::Eq7, format!("q^t - 5 = {} <= 0", qt as i128 - 5));
        }
        None => {
            suppress(&mut out, Source::Eq5, "q^t out of range".into());
            suppress(&mut out, Source::Eq7, "q^t out of range".into());
        }
    }

    match arith::exact_sqrt(q) {
        None => {
            suppress(&mut out, Source::Eq6, format!("{q} is not a square"));
            suppress(&mut out, Source::Eq8, format!("{q} is not a square"));
        }
        Some(r) => match arith::checked_pow(r, t) {
            Some(rt) if rt > 5 => {
                let rt = rt as i128;
                let n = t as usize;
                let mu = mu_lookup(q, n)?;
                out.records.push(record(
                    Source::Eq6,
                    BoundValue::Exact(int(mu as i128) * rat(2 * (rt - 1), ti * (rt - 5))),
                    Some(MuUse { field: q, n, value: mu }),
                    Some(r),
                ));
                out.records.push(record(
                    Source::Eq8,
                    BoundValue::Exact((int(4) - rat(2, ti)) * (int(1) + rat(4, rt - 5))),
                    None,
                    Some(r),
                ));
            }
            _ => {
                suppress(&mut out, Source::Eq6, format!("sqrt(q)^t - 5 <= 0 for sqrt(q) = {r}"));
                suppress(&mut out, Source::Eq8, format!("sqrt(q)^t - 5 <= 0 for sqrt(q) = {r}"));
            }
        },
    }

    let (source, c) = if q.is_multiple_of(2) {
        (Source::Thm6Even, 1.0)
    } else {
        (Source::Thm6Odd, 2.0)
    };
    let qtf = (q as f64).powi(t as i32);
    let log_q_2 = std::f64::consts::LN_2 / (q as f64).ln();
    let denom = qtf - 2.0 - c * log_q_2;
    if denom > 0.0 && qtf.is_finite() {
        let n = 2 * t as usize;
        let mu = mu_lookup(q, n)?;
        out.records.push(record(
            source,
            BoundValue::Approx(mu as f64 * (qtf - 1.0) / (t as f64 * denom)),
            Some(MuUse { field: q, n, value: mu }),
            None,
        ));
    } else {
        suppress(&mut out, source, format!("q^t - 2 - {c} log_q 2 = {denom} <= 0"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    CorIv8,
    Prop3,
    Tie,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::CorIv8 => "cor_iv8",
            Winner::Prop3 => "prop3",
            Winner::Tie => "tie",
        })
    }
}

/// One column of the comparison: the best Eq (5) value over `t = 1..4`
/// against `3 (1 + 2 / (q - 3))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub q: u64,
    #[serde(with = "ratio_str")]
    pub cor_iv8: BigRational,
    /// Minimizing `t` and the `mu^sym_q(2t)` used there.
    pub t: u32,
    pub mu: u64,
    #[serde(with = "ratio_str")]
    pub prop3: BigRational,
    pub winner: Winner,
}

impl CompareRow {
    fn compute(engine: &mut BoundEngine, q: u64) -> Result<Self, BoundsError> {
        let mut best: Option<(BigRational, u32, u64)> = None;
        let mut lookup = |field: u64, n: usize| engine.best_bound(field, n, LOOKUP_DEPTH).map(|c| c.value);
        for t in 1..=4 {
            let b = cacr_bounds(q, t, &mut lookup)?;
            for r in b.records.iter().filter(|r| r.source == Source::Eq5) {
                let v = r.value.exact().expect("Eq5 is exact").clone();
                if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                    best = Some((v, t, r.mu.expect("Eq5 records mu").value));
                }
            }
        }
        let (cor_iv8, t, mu) = best.expect("Eq5 applies for some t <= 4 when q >= 3");
        let prop3 = scaled(3, 2, q as i128 - 3);
        let winner = match cor_iv8.cmp(&prop3) {
            std::cmp::Ordering::Less => Winner::CorIv8,
            std::cmp::Ordering::Greater => Winner::Prop3,
            std::cmp::Ordering::Equal => Winner::Tie,
        };
        Ok(CompareRow {
            q,
            cor_iv8,
            t,
            mu,
            prop3,
            winner,
        })
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.q,
            round_half_up(&self.cor_iv8, 2),
            round_half_up(&self.prop3, 2),
            self.winner
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<CompareRow>,
    pub crossover: CompareRow,
}

impl ComparisonTable {
    /// Header, one line per table field, then the crossover check as a
    /// `#` comment.
    pub fn render(&self) -> String {
        let mut s = String::from(TABLE_HEADER);
        s.push('\n');
        for r in &self.rows {
            s += &r.csv();
            s.push('\n');
        }
        let c = &self.crossover;
        s += &format!(
            "# crossover q={} cor_iv8={} prop3={} winner={}\n",
            c.q,
            round_half_up(&c.cor_iv8, 2),
            round_half_up(&c.prop3, 2),
            c.winner
        );
        s
    }
}

pub fn comparison_table(engine: &mut BoundEngine) -> Result<ComparisonTable, BoundsError> {
    let rows = TABLE_QS
        .iter()
        .map(|&q| CompareRow::compute(engine, q))
        .collect::<Result<Vec<_>, _>>()?;
    let crossover = CompareRow::compute(engine, CROSSOVER_Q)?;
    Ok(ComparisonTable { rows, crossover })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(recs: &[AsymptoticRecord], s: Source) -> Option<BigRational> {
        recs.iter().find(|r| r.source == s).and_then(|r| r.value.exact().cloned())
    }

    #[test]
    fn closed_forms() {
        let r25 = asymptotic_bounds(25).unwrap();
        assert_eq!(find(&r25, Source::Cor1), Some(int(3)));
        assert_eq!(find(&r25, Source::Prop2), Some(int(3)));
        assert_eq!(find(&r25, Source::ThmSquare), Some(int(3)));
        assert_eq!(find(&r25, Source::Prop3), None);
        let r7 = asymptotic_bounds(7).unwrap();
        assert_eq!(find(&r7, Source::Cor2), Some(rat(15, 4)));
        assert_eq!(find(&r7, Source::Prop3), Some(rat(9, 2)));
        assert_eq!(find(&r7, Source::Cor1), None);
        let r16 = asymptotic_bounds(16).unwrap();
        assert_eq!(find(&r16, Source::Cor1), Some(int(4)));
        assert_eq!(find(&r16, Source::Prop1), Some(int(4)));
        assert_eq!(find(&r16, Source::ThmSquare), None);
        assert!(asymptotic_bounds(3).unwrap().is_empty());
        assert!(asymptotic_bounds(12).is_err());
    }

    #[test]
    fn eq5_examples() {
        let mut mu5 = |_: u64, _: usize| Ok(8);
        let b = cacr_bounds(5, 2, &mut mu5).unwrap();
        assert_eq!(find(&b.records, Source::Eq5), Some(rat(24, 5)));
        let mut mu7 = |_: u64, _: usize| Ok(7);
        let b = cacr_bounds(7, 2, &mut mu7).unwrap();
        assert_eq!(find(&b.records, Source::Eq5), Some(rat(42, 11)));
        let mut mu = |_: u64, _: usize| Ok(3);
        let b = cacr_bounds(16, 1, &mut mu).unwrap();
        assert_eq!(find(&b.records, Source::Eq7), Some(rat(45, 11)));
        let b = cacr_bounds(5, 1, &mut mu).unwrap();
        assert!(b.records.iter().all(|r| r.source != Source::Eq5));
        assert!(b.suppressed.iter().any(|s| s.source == Source::Eq5));
        assert!(cacr_bounds(15, 1, &mut mu).is_err());
    }

    #[test]
    fn theorem6_and_square_field_bounds() {
        let mut mu = |_: u64, n: usize| Ok(2 * n as u64 - 1);
        let b = cacr_bounds(16, 4, &mut mu).unwrap();
        // 7 * 2 * 255 / (4 * 251)
        assert_eq!(find(&b.records, Source::Eq6), Some(rat(7 * 2 * 255, 4 * 251)));
        assert_eq!(find(&b.records, Source::Eq8), Some(rat(7, 2) * (int(1) + rat(4, 251))));
        let thm6 = b.records.iter().find(|r| r.source == Source::Thm6Even).unwrap();
        let expected = 15.0 * 65535.0 / (4.0 * (65536.0 - 2.0 - 0.25));
        assert!((thm6.value.to_f64() - expected).abs() < 1e-12);
        let b = cacr_bounds(3, 1, &mut mu).unwrap();
        assert!(b.suppressed.iter().any(|s| s.source == Source::Thm6Odd));
        let b = cacr_bounds(3, 2, &mut mu).unwrap();
        let thm6 = b.records.iter().find(|r| r.source == Source::Thm6Odd).unwrap();
        let l = std::f64::consts::LN_2 / 3f64.ln();
        assert!((thm6.value.to_f64() - 7.0 * 8.0 / (2.0 * (9.0 - 2.0 - 2.0 * l))).abs() < 1e-12);
        let b = cacr_bounds(2, 1, &mut mu).unwrap();
        assert!(b.suppressed.iter().any(|s| s.source == Source::Thm6Even));
    }

    #[test]
    fn published_table() {
        let mut e = BoundEngine::new();
        let t = comparison_table(&mut e).unwrap();
        let cor: Vec<String> = t.rows.iter().map(|r| round_half_up(&r.cor_iv8, 2)).collect();
        let p3: Vec<String> = t.rows.iter().map(|r| round_half_up(&r.prop3, 2)).collect();
        assert_eq!(cor, ["4.80", "3.82", "3.74", "3.68", "3.62", "3.59"]);
        assert_eq!(p3, ["6.00", "4.50", "4.20", "4.00", "3.75", "3.60"]);
        assert_eq!(t.rows[0].mu, 8);
        assert!(t.rows[1..].iter().all(|r| r.t == 2 && r.mu == 7));
        assert!(t.rows.iter().all(|r| r.winner == Winner::CorIv8));
        assert_eq!(t.crossover.prop3, rat(24, 7));
        assert_eq!(t.crossover.winner, Winner::Prop3);
        assert!(t.crossover.prop3 <= rat(7, 2));
    }
}
