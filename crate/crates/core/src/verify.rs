//! Checking a grid against the two defining properties of a PDA.
//!
//! Property 1: no symbol repeats within a row or a column.
//! Property 2: if equal symbols sit at `(a, b)` and `(c, d)`, both opposite
//! corners `(a, d)` and `(c, b)` are stars.
//!
//! The corner check is only applied to pairs in distinct rows and columns;
//! pairs sharing a row or a column are already reported as repeats.

use serde::{Deserialize, Serialize};

use crate::grid::{Cell, PdaGrid};

pub type Pos = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Violation {
    RowRepeat {
        row: usize,
        symbol: u32,
        col1: usize,
        col2: usize,
    },
    ColRepeat {
        col: usize,
        symbol: u32,
        row1: usize,
        row2: usize,
    },
    CornerViolation {
        symbol: u32,
        cell_a: Pos,
        cell_b: Pos,
        offending_corner: Pos,
    },
    StarCountMismatch {
        col: usize,
        found: usize,
        expected: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// `d(x)`: occurrence count of every symbol in `[0, S)`.
    pub multiplicity: Vec<usize>,
    /// `A_x`: rows in which symbol `x` does not occur, ascending.
    pub missing_rows: Vec<Vec<usize>>,
}

impl VerificationReport {
    /// Symbols whose occurrence count equals `count`.
    pub fn symbols_with_multiplicity(&self, count: usize) -> impl Iterator<Item = usize> + '_ {
        self.multiplicity
            .iter()
            .enumerate()
            .filter(move |(_, d)| **d == count)
            .map(|(x, _)| x)
    }
}

/// Verifies `grid`, optionally requiring exactly `expected_z` stars per column.
pub fn verify(grid: &PdaGrid, expected_z: Option<usize>) -> VerificationReport {
    let (f, k, s) = (grid.rows(), grid.cols(), grid.s_bound());
    let mut violations = Vec::new();

    // property 1, rows
    let mut first_seen: Vec<Option<usize>> = vec![None; s];
    for r in 0..f {
        first_seen.iter_mut().for_each(|e| *e = None);
        for c in 0..k {
            if let Cell::Symbol(x) = grid.get(r, c) {
                match first_seen[x as usize] {
                    Some(c1) => violations.push(Violation::RowRepeat {
                        row: r,
                        symbol: x,
                        col1: c1,
                        col2: c,
                    }),
                    None => first_seen[x as usize] = Some(c),
                }
            }
        }
    }

    // property 1, columns
    for c in 0..k {
        first_seen.iter_mut().for_each(|e| *e = None);
        for r in 0..f {
            if let Cell::Symbol(x) = grid.get(r, c) {
                match first_seen[x as usize] {
                    Some(r1) => violations.push(Violation::ColRepeat {
                        col: c,
                        symbol: x,
                        row1: r1,
                        row2: r,
                    }),
                    None => first_seen[x as usize] = Some(r),
                }
            }
        }
    }

    // property 2
    let occurrences = grid.occurrences();
    for (x, occ) in occurrences.iter().enumerate() {
        for (i, &(a, b)) in occ.iter().enumerate() {
            for &(c, d) in &occ[i + 1..] {
                if a == c || b == d {
                    continue;
                }
                for corner in [(a, d), (c, b)] {
                    if !grid.get(corner.0, corner.1).is_star() {
                        violations.push(Violation::CornerViolation {
                            symbol: x as u32,
                            cell_a: (a, b),
                            cell_b: (c, d),
                            offending_corner: corner,
                        });
                    }
                }
            }
        }
    }

    if let Some(z) = expected_z {
        for c in 0..k {
            let found = grid.stars_in_column(c);
            if found != z {
                violations.push(Violation::StarCountMismatch {
                    col: c,
                    found,
                    expected: z,
                });
            }
        }
    }

    let multiplicity = occurrences.iter().map(Vec::len).collect();
    let missing_rows = occurrences
        .iter()
        .map(|occ| {
            let mut present = vec![false; f];
            occ.iter().for_each(|&(r, _)| present[r] = true);
            (0..f).filter(|&r| !present[r]).collect()
        })
        .collect();

    VerificationReport {
        valid: violations.is_empty(),
        violations,
        multiplicity,
        missing_rows,
    }
}

/// Shorthand for `verify(grid, expected_z).valid`.
pub fn is_valid(grid: &PdaGrid, expected_z: Option<usize>) -> bool {
    verify(grid, expected_z).valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cell::{Star as X, Symbol as N};

    fn grid(rows: Vec<Vec<Cell>>, s: usize) -> PdaGrid {
        PdaGrid::from_rows(rows, s).unwrap()
    }

    #[test]
    fn two_by_two_is_valid() {
        let g = grid(vec![vec![X, N(0)], vec![N(0), X]], 1);
        let rep = verify(&g, Some(1));
        assert!(rep.valid);
        assert_eq!(rep.multiplicity, vec![2]);
        assert_eq!(rep.missing_rows, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_star_is_vacuously_valid() {
        let g = grid(vec![vec![X]], 0);
        let rep = verify(&g, None);
        assert!(rep.valid);
        assert!(rep.multiplicity.is_empty());
    }

    #[test]
    fn row_repeat_detected() {
        let g = grid(vec![vec![N(0), N(0)], vec![X, X]], 1);
        let rep = verify(&g, None);
        assert!(!rep.valid);
        assert_eq!(
            rep.violations,
            vec![Violation::RowRepeat {
                row: 0,
                symbol: 0,
                col1: 0,
                col2: 1
            }]
        );
    }

    #[test]
    fn column_repeat_detected() {
        let g = grid(vec![vec![N(0)], vec![N(0)]], 1);
        let rep = verify(&g, None);
        assert_eq!(
            rep.violations,
            vec![Violation::ColRepeat {
                col: 0,
                symbol: 0,
                row1: 0,
                row2: 1
            }]
        );
    }

    #[test]
    fn corner_violation_detected() {
        // symbol 0 on the diagonal, corners hold symbol 1
        let g = grid(vec![vec![N(0), N(1)], vec![N(1), N(0)]], 2);
        let rep = verify(&g, None);
        assert!(!rep.valid);
        assert!(rep.violations.iter().all(|v| matches!(
            v,
            Violation::CornerViolation { .. }
        )));
        assert_eq!(rep.violations.len(), 4);
        assert!(rep.violations.contains(&Violation::CornerViolation {
            symbol: 0,
            cell_a: (0, 0),
            cell_b: (1, 1),
            offending_corner: (0, 1),
        }));
    }

    #[test]
    fn star_count_mismatch() {
        let g = grid(vec![vec![X, N(0)], vec![N(0), X]], 1);
        let rep = verify(&g, Some(0));
        assert_eq!(rep.violations.len(), 2);
        assert!(matches!(
            rep.violations[0],
            Violation::StarCountMismatch {
                col: 0,
                found: 1,
                expected: 0
            }
        ));
    }

    #[test]
    fn missing_rows_complement_multiplicity() {
        let g = grid(vec![vec![N(0), X], vec![X, N(0)], vec![N(1), N(2)]], 4);
        let rep = verify(&g, Some(1));
        assert!(rep.valid);
        assert_eq!(rep.multiplicity, vec![2, 1, 1, 0]);
        assert_eq!(rep.missing_rows[0], vec![2]);
        assert_eq!(rep.missing_rows[3], vec![0, 1, 2]);
    }
}
