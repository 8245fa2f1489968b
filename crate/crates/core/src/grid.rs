//! The array itself: an `F × K` matrix over `[0, S) ∪ {*}`.
//!
//! Rows index subfiles, columns index users, and symbols index broadcast
//! transmissions. Everything is 0-indexed. A [`PdaGrid`] is only guaranteed
//! to be *well-formed* (dimensions agree, symbols below `S`); whether it is a
//! placement delivery array is answered by [`crate::verify`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{PdaError, Result};

/// A single cell: a star (cached content) or a broadcast symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Star,
    Symbol(u32),
}

impl Cell {
    #[inline]
    pub fn is_star(self) -> bool {
        matches!(self, Cell::Star)
    }

    #[inline]
    pub fn symbol(self) -> Option<u32> {
        match self {
            Cell::Star => None,
            Cell::Symbol(s) => Some(s),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Star => f.write_str("*"),
            Cell::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// Parameter tuple `(K, F, Z, S)` of a grid, with `d = gcd(F, S)`.
///
/// `z` is present iff every column holds the same number of stars. Empty
/// grids (`K = 0`) report `z = None`: any `Z` certifies them vacuously.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub z: Option<usize>,
    pub s: usize,
    pub d: usize,
}

impl fmt::Display for PdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.z {
            Some(z) => write!(f, "({},{},{},{})", self.k, self.f, z, self.s),
            None => write!(f, "({},{},-,{})", self.k, self.f, self.s),
        }
    }
}

/// Row-major `F × K` array of cells with a declared symbol bound `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdaGrid {
    rows: usize,
    cols: usize,
    s_bound: usize,
    cells: Vec<Cell>,
}

impl PdaGrid {
    /// Builds a grid, rejecting wrong cell counts and out-of-range symbols.
    pub fn new(rows: usize, cols: usize, s_bound: usize, cells: Vec<Cell>) -> Result<Self> {
        if rows == 0 {
            return Err(PdaError::Malformed("a grid needs at least one row".into()));
        }
        if cells.len() != rows * cols {
            return Err(PdaError::Malformed(format!(
                "expected {} cells for a {rows}x{cols} grid, got {}",
                rows * cols,
                cells.len()
            )));
        }
        if s_bound > u32::MAX as usize {
            return Err(PdaError::Malformed("symbol bound exceeds u32".into()));
        }
        if let Some((i, c)) = cells
            .iter()
            .enumerate()
            .find(|(_, c)| matches!(c, Cell::Symbol(x) if *x as usize >= s_bound))
        {
            return Err(PdaError::Malformed(format!(
                "symbol {c} at ({}, {}) is not below S={s_bound}",
                i / cols,
                i % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            s_bound,
            cells,
        })
    }

    /// Builds a grid from nested rows. Every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Cell>>, s_bound: usize) -> Result<Self> {
        let f = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != k) {
            return Err(PdaError::Malformed(format!(
                "row {i} has {} cells, expected {k}",
                rows[i].len()
            )));
        }
        Self::new(f, k, s_bound, rows.into_iter().flatten().collect())
    }

    /// The `rows × 0` grid with no symbols: identity for [`crate::concat`].
    pub fn empty(rows: usize) -> Result<Self> {
        Self::new(rows, 0, 0, Vec::new())
    }

    /// Construct without validation; callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(
        rows: usize,
        cols: usize,
        s_bound: usize,
        cells: Vec<Cell>,
    ) -> Self {
        debug_assert!(rows >= 1 && cells.len() == rows * cols);
        debug_assert!(cells
            .iter()
            .all(|c| c.symbol().is_none_or(|x| (x as usize) < s_bound)));
        Self {
            rows,
            cols,
            s_bound,
            cells,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn s_bound(&self) -> usize {
        self.s_bound
    }

    #[inline]
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Cell] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Cell> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn stars_in_column(&self, col: usize) -> usize {
        self.column(col).filter(|c| c.is_star()).count()
    }

    /// Common star count of every column, if there is one (`None` for `K = 0`).
    pub fn column_regularity(&self) -> Option<usize> {
        if self.cols == 0 {
            return None;
        }
        let z = self.stars_in_column(0);
        (1..self.cols)
            .all(|c| self.stars_in_column(c) == z)
            .then_some(z)
    }

    /// Whether the grid is column-regular with exactly `z` stars per column.
    /// Empty grids satisfy every `z ≤ F`.
    pub fn is_z_regular(&self, z: usize) -> bool {
        z <= self.rows && (0..self.cols).all(|c| self.stars_in_column(c) == z)
    }

    /// Number of distinct symbols that actually occur.
    pub fn symbols_used(&self) -> usize {
        let mut seen = vec![false; self.s_bound];
        let mut n = 0;
        for x in self.cells.iter().filter_map(|c| c.symbol()) {
            if !std::mem::replace(&mut seen[x as usize], true) {
                n += 1;
            }
        }
        n
    }

    pub fn params(&self) -> PdaParams {
        PdaParams {
            k: self.cols,
            f: self.rows,
            z: self.column_regularity(),
            s: self.s_bound,
            d: gcd(self.rows, self.s_bound),
        }
    }

    /// Same cells with a larger declared symbol bound (padding symbols stay unused).
    pub fn with_s_bound(mut self, s_bound: usize) -> Result<Self> {
        if s_bound < self.s_bound {
            let max_used = self.cells.iter().filter_map(|c| c.symbol()).max();
            if max_used.is_some_and(|x| x as usize >= s_bound) {
                return Err(PdaError::Usage(format!(
                    "cannot shrink S to {s_bound}: symbol {} is in use",
                    max_used.unwrap()
                )));
            }
        }
        self.s_bound = s_bound;
        Ok(self)
    }

    /// Occurrences `(row, col)` of every symbol, indexed by symbol.
    pub fn occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.s_bound];
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Cell::Symbol(x) = self.get(r, c) {
                    occ[x as usize].push((r, c));
                }
            }
        }
        occ
    }
}

impl fmt::Display for PdaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(Cell::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cell::{Star as X, Symbol as N};

    #[test]
    fn rejects_malformed() {
        assert!(PdaGrid::new(0, 0, 0, vec![]).is_err());
        assert!(PdaGrid::new(2, 2, 1, vec![X, N(0), N(0)]).is_err());
        assert!(PdaGrid::new(1, 2, 1, vec![N(0), N(1)]).is_err());
        assert!(PdaGrid::from_rows(vec![vec![X], vec![X, X]], 0).is_err());
    }

    #[test]
    fn params_of_small_grid() {
        let g = PdaGrid::from_rows(vec![vec![X, N(0)], vec![N(0), X]], 1).unwrap();
        assert_eq!(
            g.params(),
            PdaParams {
                k: 2,
                f: 2,
                z: Some(1),
                s: 1,
                d: 1
            }
        );
        assert_eq!(g.symbols_used(), 1);
        assert_eq!(g.to_string(), "* 0\n0 *\n");
    }

    #[test]
    fn empty_grid_has_no_z() {
        let g = PdaGrid::empty(3).unwrap();
        assert_eq!(g.params().z, None);
        assert!(g.is_z_regular(2));
        assert_eq!(g.params().d, 3);
    }

    #[test]
    fn irregular_grid() {
        let g = PdaGrid::from_rows(vec![vec![X, N(0)], vec![X, X]], 1).unwrap();
        assert_eq!(g.column_regularity(), None);
        assert!(!g.is_z_regular(1));
    }
}
