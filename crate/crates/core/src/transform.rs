//! Structure-preserving transforms.
//!
//! A grid can be read as a set of triples `(row, col, symbol)`, one per
//! non-star cell. Both PDA properties are symmetric in the three coordinates,
//! so relabeling any coordinate, or exchanging two of them, maps PDAs to PDAs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};

fn check_bijection(perm: &[usize], len: usize, what: &'static str) -> Result<()> {
    if perm.len() != len {
        return Err(PdaError::NotBijective { what, len });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(PdaError::NotBijective { what, len });
        }
    }
    Ok(())
}

/// Relabels rows, columns and symbols. Each permutation maps an old index to
/// its new index: cell `(i, j)` holding `x` moves to
/// `(row_perm[i], col_perm[j])` and holds `symbol_perm[x]`.
pub fn permute(
    grid: &PdaGrid,
    row_perm: &[usize],
    col_perm: &[usize],
    symbol_perm: &[usize],
) -> Result<PdaGrid> {
    let (f, k, s) = (grid.rows(), grid.cols(), grid.s_bound());
    check_bijection(row_perm, f, "row permutation")?;
    check_bijection(col_perm, k, "column permutation")?;
    check_bijection(symbol_perm, s, "symbol permutation")?;
    let mut cells = vec![Cell::Star; f * k];
    for i in 0..f {
        for j in 0..k {
            cells[row_perm[i] * k + col_perm[j]] = match grid.get(i, j) {
                Cell::Star => Cell::Star,
                Cell::Symbol(x) => Cell::Symbol(symbol_perm[x as usize] as u32),
            };
        }
    }
    Ok(PdaGrid::from_parts_unchecked(f, k, s, cells))
}

/// Exchanges rows and columns. Fails on `K = 0`, which would leave no rows.
pub fn transpose(grid: &PdaGrid) -> Result<PdaGrid> {
    let (f, k) = (grid.rows(), grid.cols());
    if k == 0 {
        return Err(PdaError::Usage("cannot transpose a grid with no columns".into()));
    }
    let mut cells = Vec::with_capacity(f * k);
    for j in 0..k {
        cells.extend((0..f).map(|i| grid.get(i, j)));
    }
    Ok(PdaGrid::from_parts_unchecked(k, f, grid.s_bound(), cells))
}

/// Exchanges the roles of rows and symbols.
///
/// The result is `S × K` over `[0, F)`: cell `(x, j)` holds `k` when symbol
/// `x` occurs at `(k, j)`, and is a star otherwise. A column-regular
/// `(K, F, Z, S)` input yields a column-regular `(K, S, S - F + Z, F)` output.
pub fn symbol_dual(grid: &PdaGrid) -> Result<PdaGrid> {
    let (f, k, s) = (grid.rows(), grid.cols(), grid.s_bound());
    if s == 0 {
        return Err(PdaError::Usage("symbol dual needs S >= 1".into()));
    }
    let mut cells = vec![Cell::Star; s * k];
    for r in 0..f {
        for c in 0..k {
            if let Cell::Symbol(x) = grid.get(r, c) {
                let slot = &mut cells[x as usize * k + c];
                if !slot.is_star() {
                    return Err(PdaError::Premise(format!(
                        "symbol {x} occurs twice in column {c}"
                    )));
                }
                *slot = Cell::Symbol(r as u32);
            }
        }
    }
    Ok(PdaGrid::from_parts_unchecked(s, k, f, cells))
}

/// One of the three coordinates of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Rows,
    Cols,
    Symbols,
}

/// Assignment of input roles to output roles: the output's rows, columns and
/// symbols are taken from the input roles `self.0[0]`, `self.0[1]`, `self.0[2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RolePerm(pub [Role; 3]);

impl RolePerm {
    pub const IDENTITY: RolePerm = RolePerm([Role::Rows, Role::Cols, Role::Symbols]);
    pub const TRANSPOSE: RolePerm = RolePerm([Role::Cols, Role::Rows, Role::Symbols]);
    pub const DUAL: RolePerm = RolePerm([Role::Symbols, Role::Cols, Role::Rows]);

    pub fn all() -> [RolePerm; 6] {
        use Role::*;
        [
            RolePerm([Rows, Cols, Symbols]),
            RolePerm([Cols, Rows, Symbols]),
            RolePerm([Symbols, Cols, Rows]),
            RolePerm([Rows, Symbols, Cols]),
            RolePerm([Cols, Symbols, Rows]),
            RolePerm([Symbols, Rows, Cols]),
        ]
    }

    fn is_permutation(&self) -> bool {
        let [a, b, c] = self.0;
        a != b && b != c && a != c
    }
}

impl fmt::Display for RolePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = |r: Role| match r {
            Role::Rows => 'r',
            Role::Cols => 'c',
            Role::Symbols => 's',
        };
        write!(f, "{},{},{}", letter(self.0[0]), letter(self.0[1]), letter(self.0[2]))
    }
}

impl FromStr for RolePerm {
    type Err = PdaError;

    /// Parses `r,c,s`-style triples (also `rcs`).
    fn from_str(text: &str) -> Result<Self> {
        let roles: Vec<Role> = text
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c.to_ascii_lowercase() {
                'r' | 'f' => Ok(Role::Rows),
                'c' | 'k' => Ok(Role::Cols),
                's' => Ok(Role::Symbols),
                _ => Err(PdaError::Usage(format!("unknown role '{c}' in '{text}'"))),
            })
            .collect::<Result<_>>()?;
        let perm = match roles.as_slice() {
            [a, b, c] => RolePerm([*a, *b, *c]),
            _ => return Err(PdaError::Usage(format!("expected three roles, got '{text}'"))),
        };
        if !perm.is_permutation() {
            return Err(PdaError::Usage(format!("'{text}' repeats a role")));
        }
        Ok(perm)
    }
}

/// Realizes any of the six role assignments as a composition of
/// [`transpose`] and [`symbol_dual`].
pub fn role_permute(grid: &PdaGrid, perm: RolePerm) -> Result<PdaGrid> {
    use Role::*;
    if !perm.is_permutation() {
        return Err(PdaError::Usage(format!("{perm} is not a permutation of roles")));
    }
    match perm.0 {
        [Rows, Cols, Symbols] => Ok(grid.clone()),
        [Cols, Rows, Symbols] => transpose(grid),
        [Symbols, Cols, Rows] => symbol_dual(grid),
        [Rows, Symbols, Cols] => transpose(&symbol_dual(&transpose(grid)?)?),
        [Cols, Symbols, Rows] => transpose(&symbol_dual(grid)?),
        [Symbols, Rows, Cols] => symbol_dual(&transpose(grid)?),
        _ => unreachable!("checked above"),
    }
}

/// Places `right` beside `left`, shifting its symbols past `left`'s.
pub fn concat(left: &PdaGrid, right: &PdaGrid) -> Result<PdaGrid> {
    if left.rows() != right.rows() {
        return Err(PdaError::Usage(format!(
            "row counts differ: {} vs {}",
            left.rows(),
            right.rows()
        )));
    }
    let f = left.rows();
    let (k1, k2) = (left.cols(), right.cols());
    let shift = left.s_bound() as u32;
    let mut cells = Vec::with_capacity(f * (k1 + k2));
    for r in 0..f {
        cells.extend_from_slice(left.row(r));
        cells.extend(right.row(r).iter().map(|c| match *c {
            Cell::Star => Cell::Star,
            Cell::Symbol(x) => Cell::Symbol(x + shift),
        }));
    }
    Ok(PdaGrid::from_parts_unchecked(
        f,
        k1 + k2,
        left.s_bound() + right.s_bound(),
        cells,
    ))
}

/// `m` symbol-disjoint copies side by side; `m = 0` gives the empty grid.
pub fn replicate(grid: &PdaGrid, m: usize) -> PdaGrid {
    let (f, k, s) = (grid.rows(), grid.cols(), grid.s_bound());
    let mut cells = Vec::with_capacity(f * k * m);
    for r in 0..f {
        for copy in 0..m {
            let shift = (copy * s) as u32;
            cells.extend(grid.row(r).iter().map(|c| match *c {
                Cell::Star => Cell::Star,
                Cell::Symbol(x) => Cell::Symbol(x + shift),
            }));
        }
    }
    PdaGrid::from_parts_unchecked(f, k * m, s * m, cells)
}

/// The subarray on the given rows and columns, in the order given.
///
/// With `compact_symbols`, surviving symbols are renumbered densely in order
/// of their old labels and `S` becomes their count; otherwise labels and `S`
/// are kept. Properties 1 and 2 are hereditary, so a subarray of a PDA is a
/// PDA.
pub fn subgrid(
    grid: &PdaGrid,
    row_subset: &[usize],
    col_subset: &[usize],
    compact_symbols: bool,
) -> Result<PdaGrid> {
    if row_subset.is_empty() {
        return Err(PdaError::Usage("row subset must be nonempty".into()));
    }
    check_subset(row_subset, grid.rows(), "row")?;
    check_subset(col_subset, grid.cols(), "column")?;
    let mut cells = Vec::with_capacity(row_subset.len() * col_subset.len());
    for &r in row_subset {
        cells.extend(col_subset.iter().map(|&c| grid.get(r, c)));
    }
    let mut s = grid.s_bound();
    if compact_symbols {
        let mut map: Vec<Option<u32>> = vec![None; s];
        cells
            .iter()
            .filter_map(|c| c.symbol())
            .for_each(|x| map[x as usize] = Some(0));
        let mut next = 0;
        for slot in map.iter_mut().flatten() {
            *slot = next;
            next += 1;
        }
        for c in &mut cells {
            if let Cell::Symbol(x) = c {
                *x = map[*x as usize].expect("present");
            }
        }
        s = next as usize;
    }
    Ok(PdaGrid::from_parts_unchecked(
        row_subset.len(),
        col_subset.len(),
        s,
        cells,
    ))
}

fn check_subset(subset: &[usize], len: usize, what: &'static str) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in subset {
        if i >= len {
            return Err(PdaError::OutOfRange {
                what,
                index: i,
                len,
            });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(PdaError::Usage(format!("{what} {i} listed twice")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_valid;
    use Cell::{Star as X, Symbol as N};

    fn two_by_two() -> PdaGrid {
        PdaGrid::from_rows(vec![vec![X, N(0)], vec![N(0), X]], 1).unwrap()
    }

    #[test]
    fn identity_permutation() {
        let g = two_by_two();
        assert_eq!(permute(&g, &[0, 1], &[0, 1], &[0]).unwrap(), g);
    }

    #[test]
    fn swapping_rows() {
        let g = permute(&two_by_two(), &[1, 0], &[0, 1], &[0]).unwrap();
        let want = PdaGrid::from_rows(vec![vec![N(0), X], vec![X, N(0)]], 1).unwrap();
        assert_eq!(g, want);
        assert!(is_valid(&g, Some(1)));
    }

    #[test]
    fn non_bijective_permutation_rejected() {
        let g = two_by_two();
        assert!(matches!(
            permute(&g, &[0, 0], &[0, 1], &[0]),
            Err(PdaError::NotBijective { .. })
        ));
        assert!(permute(&g, &[0, 1], &[0, 1, 2], &[0]).is_err());
        assert!(permute(&g, &[0, 1], &[0, 1], &[1]).is_err());
    }

    #[test]
    fn transpose_of_symmetric_grid() {
        let g = two_by_two();
        assert_eq!(transpose(&g).unwrap(), g);
        assert!(transpose(&PdaGrid::empty(2).unwrap()).is_err());
    }

    #[test]
    fn dual_of_two_by_two() {
        let d = symbol_dual(&two_by_two()).unwrap();
        let want = PdaGrid::from_rows(vec![vec![N(1), N(0)]], 2).unwrap();
        assert_eq!(d, want);
        let p = d.params();
        assert_eq!((p.k, p.f, p.z, p.s), (2, 1, Some(0), 2));
        assert!(is_valid(&d, Some(0)));
    }

    #[test]
    fn dual_needs_symbols() {
        let g = PdaGrid::from_rows(vec![vec![X]], 0).unwrap();
        assert!(symbol_dual(&g).is_err());
    }

    #[test]
    fn role_perm_parsing() {
        assert_eq!("r,c,s".parse::<RolePerm>().unwrap(), RolePerm::IDENTITY);
        assert_eq!("s,c,r".parse::<RolePerm>().unwrap(), RolePerm::DUAL);
        assert_eq!("csr".parse::<RolePerm>().unwrap().to_string(), "c,s,r");
        assert!("r,r,s".parse::<RolePerm>().is_err());
        assert!("r,c".parse::<RolePerm>().is_err());
    }

    #[test]
    fn concat_two_copies() {
        let g = two_by_two();
        let c = concat(&g, &g).unwrap();
        let want = PdaGrid::from_rows(
            vec![vec![X, N(0), X, N(1)], vec![N(0), X, N(1), X]],
            2,
        )
        .unwrap();
        assert_eq!(c, want);
        let p = c.params();
        assert_eq!((p.k, p.f, p.z, p.s), (4, 2, Some(1), 2));
        assert_eq!(replicate(&g, 2), c);
    }

    #[test]
    fn concat_with_empty_is_identity() {
        let g = two_by_two();
        let e = PdaGrid::empty(2).unwrap();
        assert_eq!(concat(&g, &e).unwrap(), g);
        assert_eq!(concat(&e, &g).unwrap(), g);
        assert!(concat(&g, &PdaGrid::empty(3).unwrap()).is_err());
    }

    #[test]
    fn replicate_edges() {
        let g = two_by_two();
        assert_eq!(replicate(&g, 1), g);
        let z = replicate(&g, 0);
        assert_eq!((z.rows(), z.cols(), z.s_bound()), (2, 0, 0));
    }

    #[test]
    fn subgrid_cases() {
        let g = two_by_two();
        assert_eq!(subgrid(&g, &[0, 1], &[0, 1], false).unwrap(), g);
        let one = subgrid(&g, &[0, 1], &[0], false).unwrap();
        assert_eq!(one.cols(), 1);
        assert!(is_valid(&one, None));
        assert!(matches!(
            subgrid(&g, &[0, 2], &[0], false),
            Err(PdaError::OutOfRange { .. })
        ));
        assert!(subgrid(&g, &[], &[0], false).is_err());
        assert!(subgrid(&g, &[0, 0], &[0], false).is_err());
    }

    #[test]
    fn subgrid_compaction() {
        let g = PdaGrid::from_rows(vec![vec![N(3), N(1)], vec![X, N(4)]], 5).unwrap();
        let sub = subgrid(&g, &[0, 1], &[1], true).unwrap();
        assert_eq!(sub.s_bound(), 2);
        assert_eq!(sub.cells(), &[N(0), N(1)]);
    }
}
