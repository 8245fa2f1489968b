//! Fixtures shared by the benchmarks.

use pda_core::{mn_pda, optimal_fz2, PdaGrid};

/// `(F, S)` pairs for the `Z = F-2` construction, small to large.
pub const FZ2_SIZES: &[(usize, usize)] = &[(4, 7), (7, 31), (12, 100), (16, 400)];

/// Exhaustive search instances `(F, Z, S)` that finish in well under a second.
pub const SEARCH_CASES: &[(usize, usize, usize)] = &[(4, 2, 7), (5, 3, 6), (5, 2, 5)];

pub fn fz2_grid(f: usize, s: usize) -> PdaGrid {
    optimal_fz2(f, s).expect("construction").0
}

pub fn subset_grid(f: usize, z: usize) -> PdaGrid {
    mn_pda(f, z).expect("construction")
}
