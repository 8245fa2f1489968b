//! Formula values for `Z = F - 2` next to exhaustive-search optima.

use std::time::Duration;

use pda_core::bounds::conjectured_k_fz2;
use pda_core::{max_k, PdaError, Result, SearchConfig};
use serde::{Deserialize, Serialize};

use crate::args::CatalogArgs;
use crate::{search_config, Failure, Outcome, Streams, EXIT_OK};

/// Per-cell default when neither `--budget` nor the environment sets one.
const CELL_BUDGET: Duration = Duration::from_secs(2);
const SEARCH_MAX_F: usize = 16;
const SEARCH_MAX_S: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub f: usize,
    pub s: usize,
    pub k_formula: usize,
    /// Present only when the search finished.
    pub k_search: Option<usize>,
    pub certified: bool,
    pub agree: Option<bool>,
}

/// One row per `(F, S)` in the inclusive ranges; `search = None` skips the
/// search column.
pub fn catalog(
    f_range: (usize, usize),
    s_range: (usize, usize),
    search: Option<&SearchConfig>,
) -> Result<Vec<CatalogRow>> {
    if f_range.0 > f_range.1 || s_range.0 > s_range.1 {
        return Err(PdaError::Usage("catalog ranges must be nonempty".into()));
    }
    if f_range.0 < 2 {
        return Err(PdaError::Usage("Z = F-2 needs F >= 2".into()));
    }
    let mut rows = Vec::new();
    for f in f_range.0..=f_range.1 {
        for s in s_range.0..=s_range.1 {
            let est = conjectured_k_fz2(f as u64, s as u64)?;
            let k_formula = est.value as usize;
            let k_search = match search {
                Some(cfg) if f <= SEARCH_MAX_F && s <= SEARCH_MAX_S => {
                    let out = max_k(f, f - 2, s, cfg)?;
                    out.exhausted.then_some(out.optimum)
                }
                _ => None,
            };
            rows.push(CatalogRow {
                f,
                s,
                k_formula,
                k_search,
                certified: est.certified,
                agree: k_search.map(|k| k == k_formula),
            });
        }
    }
    Ok(rows)
}

pub(crate) fn run(a: CatalogArgs, io: &mut Streams) -> Outcome {
    let z = a.z.trim().to_ascii_lowercase();
    if z != "f-2" {
        return Err(Failure::usage(format!("catalog supports --z f-2 only, got '{}'", a.z)));
    }
    let (s_lo, s_hi) = (a.s_min, a.s_max);
    if s_lo > s_hi {
        return Err(Failure::usage(format!("empty S range {s_lo}..{s_hi}")));
    }
    let cfg = search_config(&a.budget, CELL_BUDGET)?;
    let rows = catalog(a.f, (s_lo, s_hi), (!a.no_search).then_some(&cfg))?;
    let mut disagreements = 0;
    for row in &rows {
        io.json(row)?;
        disagreements += usize::from(row.agree == Some(false));
    }
    let searched = rows.iter().filter(|r| r.k_search.is_some()).count();
    io.note(format!(
        "{} rows, {searched} searched to exhaustion, {disagreements} disagreements",
        rows.len()
    ));
    Ok(EXIT_OK)
}
