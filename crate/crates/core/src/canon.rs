//! Comparing grids up to relabeling.
//!
//! [`canonical_form`] renumbers symbols in order of first appearance
//! (row-major), which is a normal form for symbol relabeling alone.
//! [`equivalent`] decides isomorphism under row, column and symbol
//! relabeling together by backtracking; it is exponential in the worst case
//! and meant for small grids.

use crate::grid::{Cell, PdaGrid};

pub fn canonical_form(grid: &PdaGrid) -> PdaGrid {
    let mut map: Vec<Option<u32>> = vec![None; grid.s_bound()];
    let mut next = 0u32;
    let cells = grid
        .cells()
        .iter()
        .map(|&cell| match cell {
            Cell::Star => Cell::Star,
            Cell::Symbol(x) => Cell::Symbol(*map[x as usize].get_or_insert_with(|| {
                next += 1;
                next - 1
            })),
        })
        .collect();
    PdaGrid::from_parts_unchecked(grid.rows(), grid.cols(), grid.s_bound(), cells)
}

struct Matcher<'a> {
    a: &'a PdaGrid,
    b: &'a PdaGrid,
    row_map: Vec<usize>,
    row_used: Vec<bool>,
    col_used: Vec<bool>,
    fwd: Vec<Option<u32>>,
    back: Vec<Option<u32>>,
}

impl Matcher<'_> {
    fn row_profile(g: &PdaGrid, r: usize) -> usize {
        g.row(r).iter().filter(|c| c.is_star()).count()
    }

    fn map_rows(&mut self, r: usize) -> bool {
        if r == self.a.rows() {
            return self.map_cols(0);
        }
        let want = Self::row_profile(self.a, r);
        for t in 0..self.b.rows() {
            if self.row_used[t] || Self::row_profile(self.b, t) != want {
                continue;
            }
            self.row_used[t] = true;
            self.row_map[r] = t;
            if self.map_rows(r + 1) {
                return true;
            }
            self.row_used[t] = false;
        }
        false
    }

    fn map_cols(&mut self, c: usize) -> bool {
        if c == self.a.cols() {
            return true;
        }
        for d in 0..self.b.cols() {
            if self.col_used[d] {
                continue;
            }
            let mut added = Vec::new();
            let fits = (0..self.a.rows()).all(|r| {
                match (self.a.get(r, c), self.b.get(self.row_map[r], d)) {
                    (Cell::Star, Cell::Star) => true,
                    (Cell::Symbol(x), Cell::Symbol(y)) => {
                        match (self.fwd[x as usize], self.back[y as usize]) {
                            (None, None) => {
                                self.fwd[x as usize] = Some(y);
                                self.back[y as usize] = Some(x);
                                added.push((x, y));
                                true
                            }
                            (Some(fy), Some(bx)) => fy == y && bx == x,
                            _ => false,
                        }
                    }
                    _ => false,
                }
            });
            if fits {
                self.col_used[d] = true;
                if self.map_cols(c + 1) {
                    return true;
                }
                self.col_used[d] = false;
            }
            for (x, y) in added {
                self.fwd[x as usize] = None;
                self.back[y as usize] = None;
            }
        }
        false
    }
}

/// Whether some row, column and symbol relabeling turns `a` into `b`.
pub fn equivalent(a: &PdaGrid, b: &PdaGrid) -> bool {
    if a.rows() != b.rows()
        || a.cols() != b.cols()
        || a.s_bound() != b.s_bound()
        || a.symbols_used() != b.symbols_used()
    {
        return false;
    }
    let mut m = Matcher {
        a,
        b,
        row_map: vec![0; a.rows()],
        row_used: vec![false; a.rows()],
        col_used: vec![false; a.cols()],
        fwd: vec![None; a.s_bound()],
        back: vec![None; b.s_bound()],
    };
    m.map_rows(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{mn_pda, optimal_fz2};
    use crate::transform::permute;
    use Cell::{Star as X, Symbol as N};

    #[test]
    fn relabeled_copies_agree() {
        let g = PdaGrid::from_rows(
            vec![vec![X, N(0), N(1)], vec![N(0), X, N(2)], vec![N(1), N(2), X]],
            3,
        )
        .unwrap();
        let h = permute(&g, &[2, 0, 1], &[1, 2, 0], &[2, 1, 0]).unwrap();
        assert!(equivalent(&g, &h));
        let relabeled = permute(&g, &[0, 1, 2], &[0, 1, 2], &[2, 0, 1]).unwrap();
        assert_eq!(canonical_form(&relabeled), canonical_form(&g));
        assert_eq!(canonical_form(&canonical_form(&g)), canonical_form(&g));
    }

    #[test]
    fn different_grids_differ() {
        let a = PdaGrid::from_rows(vec![vec![X, N(0)], vec![N(0), X]], 2).unwrap();
        let b = PdaGrid::from_rows(vec![vec![X, N(0)], vec![N(1), X]], 2).unwrap();
        assert!(!equivalent(&a, &b));
        // same parameters, different multiplicity profile
        let c = mn_pda(4, 2).unwrap();
        let d = optimal_fz2(4, 4).unwrap().0;
        assert!(equivalent(&c, &d));
        let e = optimal_fz2(4, 5).unwrap().0;
        assert!(!equivalent(&c, &e));
    }
}
