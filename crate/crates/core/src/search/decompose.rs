//! Splitting a `Z = F - 2` PDA into a full subset block and a remainder.
//!
//! A `(F(F-1)/2, F, F-2, F)`-PDA has a rigid shape: every symbol misses
//! exactly one row, and a column with non-star rows `{a, b}` holds the
//! symbol missing `b` in row `a` and the symbol missing `a` in row `b`.
//! So once the symbol missing row 0 is chosen, each of its occurrences
//! names the symbol missing the corresponding row, and the block closes or
//! fails deterministically. The extractor tries every candidate for that
//! first symbol.

use std::time::Instant;

use num_integer::gcd;

use super::SearchConfig;
use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};
use crate::transform::subgrid;
use crate::verify::is_valid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `(F(F-1)/2, F, F-2, F)`-PDA on the extracted columns.
    pub block: PdaGrid,
    /// The other columns, with `S - F` symbols.
    pub remainder: PdaGrid,
    /// Column indices of the block in the input grid, ascending.
    pub block_columns: Vec<usize>,
}

fn check_premises(grid: &PdaGrid) -> Result<()> {
    let f = grid.rows();
    if f < 2 {
        return Err(PdaError::Premise(format!("need F >= 2, got F={f}")));
    }
    if !grid.is_z_regular(f - 2) || grid.cols() == 0 {
        return Err(PdaError::Premise(format!(
            "need every column to have Z = F-2 = {} stars",
            f - 2
        )));
    }
    if !is_valid(grid, Some(f - 2)) {
        return Err(PdaError::Premise("input is not a valid PDA".into()));
    }
    let s = grid.s_bound();
    if s < f {
        return Err(PdaError::Premise(format!("need S >= F, got S={s} F={f}")));
    }
    let (m, r) = ((s - 1) / f, (s - 1) % f + 1);
    let d = gcd(f, s);
    if m as i64 <= f as i64 - r as i64 - d as i64 {
        return Err(PdaError::Premise(format!(
            "S = {m}*F + {r} needs m > F - r - d = {}",
            f as i64 - r as i64 - d as i64
        )));
    }
    Ok(())
}

/// Rows holding each symbol, as bitmasks.
fn row_masks(grid: &PdaGrid) -> Vec<u32> {
    let mut masks = vec![0u32; grid.s_bound()];
    for r in 0..grid.rows() {
        for cell in grid.row(r) {
            if let Cell::Symbol(x) = cell {
                masks[*x as usize] |= 1 << r;
            }
        }
    }
    masks
}

/// Column indices of the block grown from `seed`, the symbol missing row 0.
fn close_block(grid: &PdaGrid, occurrences: &[Vec<(usize, usize)>], rows: &[u32], seed: usize) -> Option<Vec<usize>> {
    let f = grid.rows();
    let full = (1u32 << f) - 1;
    let mut missing_of: Vec<Option<usize>> = vec![None; f];
    missing_of[0] = Some(seed);
    let mut queue = vec![0usize];
    let mut columns = Vec::with_capacity(f * (f - 1) / 2);
    while let Some(i) = queue.pop() {
        let x = missing_of[i].expect("queued rows are assigned");
        if rows[x] != full & !(1 << i) {
            return None;
        }
        for &(a, c) in &occurrences[x] {
            // column c must be non-star exactly in rows a and i
            let partner = match grid.get(i, c) {
                Cell::Symbol(y) => y as usize,
                Cell::Star => return None,
            };
            match missing_of[a] {
                Some(y) if y != partner => return None,
                Some(_) => {}
                None => {
                    if missing_of.contains(&Some(partner)) {
                        return None;
                    }
                    missing_of[a] = Some(partner);
                    queue.push(a);
                }
            }
            columns.push(c);
        }
    }
    columns.sort_unstable();
    columns.dedup();
    (columns.len() == f * (f - 1) / 2 && missing_of.iter().all(Option::is_some)).then_some(columns)
}

/// Finds an `(F(F-1)/2, F, F-2, F)` block among the columns of `grid` and
/// splits it off. Returns `None` when no block exists or the time budget
/// expires.
pub fn decompose(grid: &PdaGrid, cfg: &SearchConfig) -> Result<Option<Decomposition>> {
    check_premises(grid)?;
    let start = Instant::now();
    let f = grid.rows();
    let s = grid.s_bound();
    let occurrences = grid.occurrences();
    let rows = row_masks(grid);
    let full = (1u32 << f) - 1;
    let all_rows: Vec<usize> = (0..f).collect();

    for seed in 0..s {
        if start.elapsed() >= cfg.time_budget {
            return Ok(None);
        }
        if rows[seed] != full & !1 {
            continue;
        }
        let Some(block_columns) = close_block(grid, &occurrences, &rows, seed) else {
            continue;
        };
        let block = subgrid(grid, &all_rows, &block_columns, true)?;
        let rest: Vec<usize> = (0..grid.cols())
            .filter(|c| block_columns.binary_search(c).is_err())
            .collect();
        let remainder = subgrid(grid, &all_rows, &rest, true)?.with_s_bound(s - f)?;
        return Ok(Some(Decomposition {
            block,
            remainder,
            block_columns,
        }));
    }
    Ok(None)
}
