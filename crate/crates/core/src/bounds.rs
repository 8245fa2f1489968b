//! Bounds on the parameters of PDAs, all in exact integer arithmetic.
//!
//! Lower bounds on `S` for given `(K, F, Z)`:
//! - [`lower_bound_s`]: peel off one row at a time; row `i` holds at least
//!   `f(i)` fresh symbols, where `f(0) = ⌈K(F-Z)/F⌉` and
//!   `f(i) = ⌈f(i-1)(F-Z-i)/(F-i)⌉`, with a ceiling at every step.
//! - [`lower_bound_s_fz2`]: the two-term case `Z = F - 2`.
//! - [`recursive_lower_bound_s`]: a most frequent symbol occurs
//!   `t = ⌈(F-Z)K/S⌉` times; deleting its rows and the columns without it
//!   leaves a `(t, F-t, Z+1-t)` array that avoids that symbol.
//!
//! Upper bound on `K` ([`upper_bound_k`]): each symbol occurs at most
//! `Z + 1` times. [`pjd_holds`] is the necessary condition
//! `S ≥ ⌈(2K + 2S - SF)/F⌉·F` for `Z = F - 2` arrays, and
//! [`conjectured_k_fz2`] reports `(F-1)(S-1)/2 + (gcd(F,S)-1)/2` together with
//! whether that value is a proven optimum.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_div, ceil_div_signed, gcd};
use crate::error::{PdaError, Result};
use crate::grid::PdaGrid;
use crate::verify::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    LowerSSumF,
    LowerSRecursive,
    LowerSYb2,
    UpperK,
    PjdRefutation,
    ConjecturedK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub kind: BoundKind,
    pub value: u64,
    /// Backed by a theorem (true) or only conjectured (false).
    pub certified: bool,
    /// Intermediate integers, e.g. the `f(i)` terms.
    pub trace: Vec<u64>,
}

fn check_z(f: u64, z: u64) -> Result<()> {
    if z >= f {
        return Err(PdaError::Usage(format!("need Z < F, got F={f} Z={z}")));
    }
    Ok(())
}

/// `f(0), …, f(F-Z-1)` for a `(K, F, Z)` array.
pub fn f_sequence(k: u64, f: u64, z: u64) -> Result<Vec<u64>> {
    check_z(f, z)?;
    if k == 0 {
        return Err(PdaError::Usage("need K >= 1".into()));
    }
    let mut seq = Vec::with_capacity((f - z) as usize);
    let mut cur = ceil_div(k * (f - z), f);
    seq.push(cur);
    for i in 1..(f - z) {
        cur = ceil_div(cur * (f - z - i), f - i);
        seq.push(cur);
    }
    Ok(seq)
}

/// `S ≥ Σ f(i)`.
pub fn lower_bound_s(k: u64, f: u64, z: u64) -> Result<BoundEstimate> {
    let trace = f_sequence(k, f, z)?;
    Ok(BoundEstimate {
        kind: BoundKind::LowerSSumF,
        value: trace.iter().sum(),
        certified: true,
        trace,
    })
}

/// `S ≥ ⌈2K/F⌉ + ⌈⌈2K/F⌉/(F-1)⌉` for `Z = F - 2`.
pub fn lower_bound_s_fz2(k: u64, f: u64) -> Result<BoundEstimate> {
    if f < 3 {
        return Err(PdaError::Usage(format!("two-term bound needs F >= 3, got {f}")));
    }
    if k == 0 {
        return Err(PdaError::Usage("need K >= 1".into()));
    }
    let h = ceil_div(2 * k, f);
    let second = ceil_div(h, f - 1);
    Ok(BoundEstimate {
        kind: BoundKind::LowerSYb2,
        value: h + second,
        certified: true,
        trace: vec![h, second],
    })
}

/// Source of lower bounds on the minimum `S` of a `(K, F, Z)` array, used by
/// [`recursive_lower_bound_s`] for its sub-problems.
///
/// Implementations must answer degenerate shapes (`K = 0`, `F = 0`, or
/// `Z ≥ F`) with 0. The flag reports whether the value is theorem-backed.
pub trait SMinOracle: Sync {
    fn s_min_lower(&self, k: u64, f: u64, z: u64) -> Result<(u64, bool)>;
}

/// Zero for the degenerate shapes every oracle must accept.
pub fn degenerate_s_min(k: u64, f: u64, z: u64) -> Option<u64> {
    (k == 0 || f == 0 || z >= f).then_some(0)
}

/// Answers with [`lower_bound_s`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SumBoundOracle;

impl SMinOracle for SumBoundOracle {
    fn s_min_lower(&self, k: u64, f: u64, z: u64) -> Result<(u64, bool)> {
        if let Some(v) = degenerate_s_min(k, f, z) {
            return Ok((v, true));
        }
        Ok((lower_bound_s(k, f, z)?.value, true))
    }
}

type Memo = HashMap<(u64, u64, u64), (u64, bool)>;

/// Answers with [`recursive_lower_bound_s`] applied to itself, memoized in a
/// table the caller owns. Concurrent callers may compute the same entry
/// twice; inserts are idempotent.
#[derive(Debug, Default)]
pub struct RecursiveOracle {
    memo: Mutex<Memo>,
}

impl RecursiveOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }
}

impl SMinOracle for RecursiveOracle {
    fn s_min_lower(&self, k: u64, f: u64, z: u64) -> Result<(u64, bool)> {
        if let Some(v) = degenerate_s_min(k, f, z) {
            return Ok((v, true));
        }
        if let Some(hit) = self.memo.lock().expect("memo poisoned").get(&(k, f, z)) {
            return Ok(*hit);
        }
        let est = recursive_lower_bound_s(k, f, z, self)?;
        let entry = (est.value, est.certified);
        self.memo
            .lock()
            .expect("memo poisoned")
            .entry((k, f, z))
            .or_insert(entry);
        Ok(entry)
    }
}

/// Least `S ≥ lower_bound_s(K,F,Z)` with `S ≥ oracle(t, F-t, Z+1-t) + 1`
/// where `t = ⌈(F-Z)K/S⌉`. Levels where `t > Z + 1` are skipped as
/// infeasible. The trace is `[S, t, oracle value]` at the accepted level.
pub fn recursive_lower_bound_s(
    k: u64,
    f: u64,
    z: u64,
    oracle: &dyn SMinOracle,
) -> Result<BoundEstimate> {
    let floor = lower_bound_s(k, f, z)?.value;
    let ceiling = (f - z) * k;
    let mut certified = true;
    for s in floor.max(1)..=ceiling {
        let t = ceil_div((f - z) * k, s);
        if t > z + 1 {
            continue;
        }
        let (sub, sub_certified) = oracle.s_min_lower(t, f - t, z + 1 - t)?;
        certified &= sub_certified;
        if s > sub {
            return Ok(BoundEstimate {
                kind: BoundKind::LowerSRecursive,
                value: s,
                certified,
                trace: vec![s, t, sub],
            });
        }
    }
    // all-distinct symbols always satisfy the inequality at S = (F-Z)K
    Err(PdaError::Usage(format!(
        "oracle exceeded the trivial bound for (K,F,Z)=({k},{f},{z})"
    )))
}

/// `K ≤ ⌊(Z+1)S/(F-Z)⌋`.
pub fn upper_bound_k(f: u64, z: u64, s: u64) -> Result<BoundEstimate> {
    check_z(f, z)?;
    Ok(BoundEstimate {
        kind: BoundKind::UpperK,
        value: (z + 1) * s / (f - z),
        certified: true,
        trace: vec![(z + 1) * s, f - z],
    })
}

/// Smallest `S` allowed by the `Z = F - 2` condition for a given `K`:
/// `⌈(2K + 2S - SF)/F⌉·F`, with the ceiling rounding toward +∞.
pub fn pjd_required_s(k: u64, f: u64, s: u64) -> i64 {
    let (k, f, s) = (k as i64, f as i64, s as i64);
    ceil_div_signed(2 * k + 2 * s - s * f, f) * f
}

/// Whether a `(K, F, F-2, S)`-PDA survives `S ≥ ⌈(2K + 2S - SF)/F⌉·F`.
/// A `false` answer refutes the existence of such an array.
pub fn pjd_holds(k: u64, f: u64, s: u64) -> bool {
    s as i64 >= pjd_required_s(k, f, s)
}

pub fn pjd_estimate(k: u64, f: u64, s: u64) -> BoundEstimate {
    let required = pjd_required_s(k, f, s);
    BoundEstimate {
        kind: BoundKind::PjdRefutation,
        value: required.max(0) as u64,
        certified: true,
        trace: vec![k, s, u64::from(s as i64 >= required)],
    }
}

/// Whether `fz2_formula(F, S)` is a proven optimum without appealing to
/// duality: all `F ≤ 6`, and for larger `F` the residues `r ∈ {1, 2, F-2,
/// F-1, F}` of `S = mF + r` (`1 ≤ r ≤ F`) and every `r` dividing `F`.
fn certified_direct(f: u64, s: u64) -> bool {
    if f <= 6 || s == 0 {
        return true;
    }
    let r = (s - 1) % f + 1;
    r <= 2 || r + 2 >= f || f.is_multiple_of(r)
}

/// Whether the value of [`conjectured_k_fz2`] is theorem-backed. `K` is
/// symmetric under exchanging `F` and `S`, so either orientation may supply
/// the certificate.
pub fn fz2_certified(f: u64, s: u64) -> bool {
    certified_direct(f, s) || (s >= 2 && certified_direct(s, f))
}

/// `(F-1)(S-1)/2 + (gcd(F,S)-1)/2`, the largest `K` known for `Z = F - 2`.
pub fn conjectured_k_fz2(f: u64, s: u64) -> Result<BoundEstimate> {
    if f < 2 {
        return Err(PdaError::Usage(format!("need F >= 2, got {f}")));
    }
    let d = gcd(f, s);
    let numerator = if s == 0 { 0 } else { (f - 1) * (s - 1) + d - 1 };
    Ok(BoundEstimate {
        kind: BoundKind::ConjecturedK,
        value: numerator / 2,
        certified: fz2_certified(f, s),
        trace: vec![d, numerator],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaVerdict {
    Holds,
    Fails,
    NotApplicable,
}

/// Outcome of the structural checks on one `Z = F - 2` grid.
///
/// - `maxd`: every symbol occurs at most `F - 1` times and at least
///   `S - (F - d)` symbols occur exactly `F - 1` times.
/// - `maxe`: every row holds at most `S - (m + 1)` symbols and at least
///   `F - r + d` rows hold exactly that many.
/// - `nar`: for every row `i` some symbol occurs `F - 1` times and misses
///   only row `i`.
///
/// All three require `K = fz2_formula(F, S)`; `nar` additionally requires
/// `m > F - r - d`, with `S = mF + r`, `1 ≤ r ≤ F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub maxd: LemmaVerdict,
    pub maxe: LemmaVerdict,
    pub nar: LemmaVerdict,
    pub m: u64,
    pub r: u64,
    pub d: u64,
    /// Number of symbols occurring `F - 1` times.
    pub full_symbols: u64,
    /// Largest row fill, and how many rows reach `S - (m + 1)`.
    pub max_row_fill: u64,
    pub rows_at_cap: u64,
}

impl StructuralReport {
    fn not_applicable() -> Self {
        Self {
            maxd: LemmaVerdict::NotApplicable,
            maxe: LemmaVerdict::NotApplicable,
            nar: LemmaVerdict::NotApplicable,
            m: 0,
            r: 0,
            d: 0,
            full_symbols: 0,
            max_row_fill: 0,
            rows_at_cap: 0,
        }
    }
}

fn verdict(ok: bool) -> LemmaVerdict {
    if ok {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Fails
    }
}

pub fn structural_checks(grid: &PdaGrid) -> StructuralReport {
    let (f, k, s) = (grid.rows() as u64, grid.cols() as u64, grid.s_bound() as u64);
    if f < 2 || s == 0 || k == 0 {
        return StructuralReport::not_applicable();
    }
    let report = verify(grid, Some(grid.rows() - 2));
    if !report.valid {
        return StructuralReport::not_applicable();
    }
    let d = gcd(f, s);
    let (m, r) = ((s - 1) / f, (s - 1) % f + 1);
    let mut out = StructuralReport {
        m,
        r,
        d,
        ..StructuralReport::not_applicable()
    };
    if k != conjectured_k_fz2(f, s).map(|b| b.value).unwrap_or(u64::MAX) {
        return out;
    }

    let full = f - 1;
    let max_mult = report.multiplicity.iter().copied().max().unwrap_or(0) as u64;
    out.full_symbols = report.symbols_with_multiplicity(full as usize).count() as u64;
    out.maxd = verdict(max_mult <= full && out.full_symbols as i64 >= s as i64 - (f - d) as i64);

    let cap = s - (m + 1);
    let fills: Vec<u64> = (0..grid.rows())
        .map(|row| grid.row(row).iter().filter(|c| !c.is_star()).count() as u64)
        .collect();
    out.max_row_fill = fills.iter().copied().max().unwrap_or(0);
    out.rows_at_cap = fills.iter().filter(|&&n| n == cap).count() as u64;
    out.maxe = verdict(out.max_row_fill <= cap && out.rows_at_cap + r >= f + d);

    if m as i64 > f as i64 - r as i64 - d as i64 {
        let mut covered = vec![false; grid.rows()];
        for x in report.symbols_with_multiplicity(full as usize) {
            if let [row] = report.missing_rows[x].as_slice() {
                covered[*row] = true;
            }
        }
        out.nar = verdict(covered.iter().all(|&c| c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{f2_base, mn_pda, optimal_fz2};

    #[test]
    fn f_sequence_examples() {
        assert_eq!(f_sequence(6, 4, 2).unwrap(), vec![3, 1]);
        assert_eq!(f_sequence(1, 5, 1).unwrap(), vec![1, 1, 1, 1]);
        // f(1) = ⌈4·(2-0-1)/(2-1)⌉ = 4
        assert_eq!(f_sequence(4, 2, 0).unwrap(), vec![4, 4]);
        assert!(f_sequence(3, 2, 2).is_err());
        assert!(f_sequence(0, 2, 1).is_err());
    }

    #[test]
    fn sum_bound_examples() {
        assert_eq!(lower_bound_s(6, 4, 2).unwrap().value, 4);
        assert_eq!(lower_bound_s(10, 4, 3).unwrap().value, 3);
        assert_eq!(lower_bound_s(4, 2, 0).unwrap().value, 8);
    }

    #[test]
    fn two_term_bound() {
        assert_eq!(lower_bound_s_fz2(6, 4).unwrap().value, 4);
        assert_eq!(lower_bound_s_fz2(27, 7).unwrap().value, 10);
        assert_eq!(lower_bound_s_fz2(1, 3).unwrap().value, 2);
        assert!(lower_bound_s_fz2(1, 2).is_err());
        for f in 3..10 {
            for k in 1..60 {
                assert_eq!(
                    lower_bound_s_fz2(k, f).unwrap().value,
                    lower_bound_s(k, f, f - 2).unwrap().value
                );
            }
        }
    }

    #[test]
    fn recursive_bound_examples() {
        let b = recursive_lower_bound_s(6, 4, 2, &SumBoundOracle).unwrap();
        assert_eq!(b.value, 4);
        assert_eq!(b.trace, vec![4, 3, 3]);
        for f in 1..7 {
            for z in 0..f {
                let b = recursive_lower_bound_s(1, f, z, &SumBoundOracle).unwrap();
                assert_eq!(b.value, f - z);
            }
        }
    }

    #[test]
    fn recursive_oracle_memoizes() {
        let oracle = RecursiveOracle::new();
        let b = recursive_lower_bound_s(12, 6, 2, &oracle).unwrap();
        assert!(b.value >= lower_bound_s(12, 6, 2).unwrap().value);
        assert!(oracle.memo_len() > 0);
        let again = recursive_lower_bound_s(12, 6, 2, &oracle).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_k(4, 2, 4).unwrap().value, 6);
        assert_eq!(upper_bound_k(2, 0, 5).unwrap().value, 2);
        assert_eq!(upper_bound_k(5, 3, 0).unwrap().value, 0);
        assert!(upper_bound_k(3, 3, 4).is_err());
    }

    #[test]
    fn pjd_examples() {
        assert!(pjd_holds(27, 7, 10));
        assert!(pjd_holds(28, 7, 10));
        assert_eq!(pjd_required_s(10, 4, 7), 8);
        assert!(!pjd_holds(10, 4, 7));
        assert!(pjd_holds(9, 4, 7));
        // negative numerator rounds toward +∞
        assert_eq!(pjd_required_s(1, 7, 10), -42);
    }

    #[test]
    fn conjectured_values() {
        let b = conjectured_k_fz2(5, 13).unwrap();
        assert_eq!((b.value, b.certified), (24, true));
        let b = conjectured_k_fz2(7, 10).unwrap();
        assert_eq!((b.value, b.certified), (27, false));
        let b = conjectured_k_fz2(6, 9).unwrap();
        assert_eq!((b.value, b.certified), (21, true));
        // residues 1, 2, F-2, F-1, F are certified for F = 7
        for s in [8, 9, 12, 13, 14, 15] {
            assert!(conjectured_k_fz2(7, s).unwrap().certified, "S={s}");
        }
        for s in [10, 11, 17, 31] {
            assert!(!conjectured_k_fz2(7, s).unwrap().certified, "S={s}");
        }
        // certified through the dual orientation
        assert!(conjectured_k_fz2(7, 4).unwrap().certified);
        assert_eq!(conjectured_k_fz2(3, 0).unwrap().value, 0);
    }

    #[test]
    fn structural_on_subset_block() {
        let rep = structural_checks(&mn_pda(4, 2).unwrap());
        assert_eq!(rep.maxd, LemmaVerdict::Holds);
        assert_eq!(rep.full_symbols, 4);
        assert_eq!(rep.maxe, LemmaVerdict::Holds);
    }

    #[test]
    fn structural_gates() {
        // K below the formula value
        let (g, _) = optimal_fz2(5, 7).unwrap();
        let sub = crate::transform::subgrid(&g, &[0, 1, 2, 3, 4], &[0, 1, 2], false).unwrap();
        let rep = structural_checks(&sub);
        assert_eq!(rep.maxd, LemmaVerdict::NotApplicable);
        assert_eq!(rep.maxe, LemmaVerdict::NotApplicable);
        assert_eq!(rep.nar, LemmaVerdict::NotApplicable);
        // wrong Z
        let rep = structural_checks(&mn_pda(4, 1).unwrap());
        assert_eq!(rep.maxd, LemmaVerdict::NotApplicable);
        // two-row base case
        let rep = structural_checks(&f2_base(5));
        assert_eq!(rep.maxd, LemmaVerdict::Holds);
        assert_eq!(rep.maxe, LemmaVerdict::Holds);
    }

    #[test]
    fn structural_on_seven_rows() {
        let (g, _) = optimal_fz2(7, 31).unwrap();
        let rep = structural_checks(&g);
        assert_eq!((rep.m, rep.r, rep.d), (4, 3, 1));
        assert_eq!(rep.maxd, LemmaVerdict::Holds);
        assert_eq!(rep.maxe, LemmaVerdict::Holds);
        assert_eq!(rep.nar, LemmaVerdict::Holds);
    }
}
