//! Depth-first feasibility search for a `(K, F, Z, S)`-PDA.
//!
//! Partial arrays grow one column at a time. Isomorph rejection:
//! - columns appear in non-decreasing order of their star set;
//! - among columns with the same star set (which are necessarily
//!   symbol-disjoint), the symbol in the first non-star row strictly
//!   increases;
//! - symbols are introduced in first-use order.
//!
//! Every partial array is itself a valid PDA, so the deepest one reached is
//! a witness even when the search is cut short.
//!
//! Incremental checks use bitmasks: per symbol `x`, `occ[x]` holds the rows
//! where `x` already occurs and `star_and[x]` the rows that are stars in
//! every column containing `x`. A new column with star set `M` may place `x`
//! in row `r` iff `occ[x] ⊆ M` and `r ∈ star_and[x]`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::grid::{Cell, PdaGrid};

pub(crate) const MAX_ROWS: usize = 16;
pub(crate) const MAX_SYMBOLS: usize = 64;
const NO_SYMBOL: u8 = u8::MAX;
const TICK: u64 = 256;

pub(crate) struct Problem {
    pub f: usize,
    pub z: usize,
    pub s: usize,
    pub target: usize,
    masks: Vec<u32>,
    nonstar: Vec<Vec<u8>>,
}

impl Problem {
    pub fn new(f: usize, z: usize, s: usize, target: usize) -> Self {
        debug_assert!(f <= MAX_ROWS && s <= MAX_SYMBOLS && z < f);
        let masks: Vec<u32> = crate::arith::subsets_colex(f as u32, z as u32)
            .into_iter()
            .map(|m| m as u32)
            .collect();
        let nonstar = masks
            .iter()
            .map(|&m| (0..f as u8).filter(|r| m & (1 << r) == 0).collect())
            .collect();
        Self {
            f,
            z,
            s,
            target,
            masks,
            nonstar,
        }
    }
}

/// State shared by all workers of one search (across targets).
pub(crate) struct Shared {
    deadline: Option<Instant>,
    node_budget: u64,
    pub nodes: AtomicU64,
    pub aborted: AtomicBool,
    found: AtomicBool,
    witness: Mutex<Option<PdaGrid>>,
    deepest: AtomicUsize,
    deepest_witness: Mutex<Option<PdaGrid>>,
}

impl Shared {
    pub fn new(deadline: Option<Instant>, node_budget: u64) -> Self {
        Self {
            deadline,
            node_budget,
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            found: AtomicBool::new(false),
            witness: Mutex::new(None),
            deepest: AtomicUsize::new(0),
            deepest_witness: Mutex::new(None),
        }
    }

    pub fn deepest(&self) -> (usize, Option<PdaGrid>) {
        let guard = self.deepest_witness.lock().expect("poisoned");
        (self.deepest.load(Ordering::Acquire), guard.clone())
    }

    fn should_stop(&self) -> bool {
        self.found.load(Ordering::Relaxed) || self.aborted.load(Ordering::Relaxed)
    }
}

pub(crate) enum TargetResult {
    Found(PdaGrid),
    Refuted,
    Aborted,
}

#[derive(Clone, Copy)]
struct Column {
    mask_idx: usize,
    first: u8,
    syms: [u8; MAX_ROWS],
    prev_star_and: [u32; MAX_ROWS],
    prev_next_label: usize,
}

struct Searcher<'a> {
    p: &'a Problem,
    shared: &'a Shared,
    cols: Vec<Column>,
    occ: Vec<u32>,
    star_and: Vec<u32>,
    count: Vec<u8>,
    /// bit `x` of `row_ok[r]`: row `r` is a star in every column holding `x`
    row_ok: Vec<u64>,
    next_label: usize,
    local_nodes: u64,
}

impl<'a> Searcher<'a> {
    fn new(p: &'a Problem, shared: &'a Shared) -> Self {
        let full = (1u32 << p.f) - 1;
        Self {
            p,
            shared,
            cols: Vec::with_capacity(p.target),
            occ: vec![0; p.s],
            star_and: vec![full; p.s],
            count: vec![0; p.s],
            row_ok: vec![u64::MAX; p.f],
            next_label: 0,
            local_nodes: 0,
        }
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if !self.local_nodes.is_multiple_of(TICK) {
            return false;
        }
        let total = self.shared.nodes.fetch_add(TICK, Ordering::Relaxed) + TICK;
        let over_nodes = total >= self.shared.node_budget;
        let over_time = self.shared.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.shared.aborted.store(true, Ordering::Relaxed);
        }
        self.shared.should_stop()
    }

    fn flush_nodes(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.local_nodes % TICK, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn to_grid(&self) -> PdaGrid {
        let (f, k) = (self.p.f, self.cols.len());
        let mut cells = vec![Cell::Star; f * k];
        for (c, col) in self.cols.iter().enumerate() {
            for r in 0..f {
                if col.syms[r] != NO_SYMBOL {
                    cells[r * k + c] = Cell::Symbol(col.syms[r] as u32);
                }
            }
        }
        PdaGrid::from_parts_unchecked(f, k, self.p.s, cells)
    }

    fn record_depth(&self) {
        let depth = self.cols.len();
        if depth <= self.shared.deepest.load(Ordering::Relaxed) {
            return;
        }
        let mut guard = self.shared.deepest_witness.lock().expect("poisoned");
        if depth > self.shared.deepest.load(Ordering::Acquire) {
            *guard = Some(self.to_grid());
            self.shared.deepest.store(depth, Ordering::Release);
        }
    }

    /// Upper bound on the cells still placeable, against what the target needs.
    fn capacity_ok(&self) -> bool {
        let p = self.p;
        let remaining = p.target - self.cols.len();
        let need = remaining * (p.f - p.z);
        let unused = p.s - self.next_label;
        let per_symbol: usize = (0..self.next_label)
            .map(|x| {
                (self.star_and[x].count_ones() as usize).min(p.z + 1 - self.count[x] as usize)
            })
            .sum();
        if per_symbol + unused * (p.z + 1) < need {
            return false;
        }
        let existing = if self.next_label == 64 {
            u64::MAX
        } else {
            (1u64 << self.next_label) - 1
        };
        let per_row: usize = self
            .row_ok
            .iter()
            .map(|ok| ((ok & existing).count_ones() as usize + unused).min(remaining))
            .sum();
        per_row >= need
    }

    fn apply(&mut self, mask_idx: usize, syms: &[u8; MAX_ROWS]) {
        let mask = self.p.masks[mask_idx];
        let mut col = Column {
            mask_idx,
            first: NO_SYMBOL,
            syms: *syms,
            prev_star_and: [0; MAX_ROWS],
            prev_next_label: self.next_label,
        };
        for &r in &self.p.nonstar[mask_idx] {
            let x = syms[r as usize] as usize;
            if col.first == NO_SYMBOL {
                col.first = x as u8;
            }
            if x >= self.next_label {
                self.next_label = x + 1;
            }
            col.prev_star_and[r as usize] = self.star_and[x];
            self.occ[x] |= 1 << r;
            self.count[x] += 1;
            let lost = self.star_and[x] & !mask;
            self.star_and[x] &= mask;
            let mut q = lost;
            while q != 0 {
                let row = q.trailing_zeros() as usize;
                self.row_ok[row] &= !(1u64 << x);
                q &= q - 1;
            }
        }
        self.cols.push(col);
    }

    fn undo(&mut self) {
        let col = self.cols.pop().expect("column to undo");
        for &r in &self.p.nonstar[col.mask_idx] {
            let x = col.syms[r as usize] as usize;
            let prev = col.prev_star_and[r as usize];
            let mut q = prev & !self.star_and[x];
            while q != 0 {
                let row = q.trailing_zeros() as usize;
                self.row_ok[row] |= 1u64 << x;
                q &= q - 1;
            }
            self.star_and[x] = prev;
            self.occ[x] &= !(1 << r);
            self.count[x] -= 1;
        }
        self.next_label = col.prev_next_label;
    }

    /// Returns true when the whole search should stop (found or aborted).
    fn dfs(&mut self) -> bool {
        if self.tick() {
            return true;
        }
        self.record_depth();
        if self.cols.len() == self.p.target {
            let grid = self.to_grid();
            let mut w = self.shared.witness.lock().expect("poisoned");
            if w.is_none() {
                *w = Some(grid);
            }
            self.shared.found.store(true, Ordering::Relaxed);
            return true;
        }
        if !self.capacity_ok() {
            return false;
        }
        let (start, last_first) = match self.cols.last() {
            Some(c) => (c.mask_idx, c.first as usize),
            None => (0, 0),
        };
        for mi in start..self.p.masks.len() {
            let min_first = if !self.cols.is_empty() && mi == start {
                last_first + 1
            } else {
                0
            };
            if self.column_at(mi, min_first) {
                return true;
            }
        }
        false
    }

    /// Tries every admissible column with star set `mi`.
    fn column_at(&mut self, mi: usize, min_first: usize) -> bool {
        let mask = self.p.masks[mi];
        let mut fits = 0u64;
        for x in 0..self.next_label {
            if self.occ[x] & !mask == 0 {
                fits |= 1 << x;
            }
        }
        let mut syms = [NO_SYMBOL; MAX_ROWS];
        self.assign(mi, 0, fits, 0, &mut syms, min_first, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        mi: usize,
        pos: usize,
        fits: u64,
        col_used: u64,
        syms: &mut [u8; MAX_ROWS],
        min_first: usize,
        new_count: usize,
    ) -> bool {
        let p = self.p;
        let rows = &p.nonstar[mi];
        if pos == rows.len() {
            self.apply(mi, syms);
            let stop = self.dfs();
            self.undo();
            return stop;
        }
        let r = rows[pos] as usize;
        let mut cand = fits & self.row_ok[r] & !col_used;
        if pos == 0 && min_first > 0 {
            cand &= if min_first >= 64 { 0 } else { !((1u64 << min_first) - 1) };
        }
        while cand != 0 {
            let x = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            syms[r] = x as u8;
            if self.assign(mi, pos + 1, fits, col_used | (1 << x), syms, min_first, new_count) {
                return true;
            }
        }
        let label = self.next_label + new_count;
        if label < p.s && (pos > 0 || label >= min_first) {
            syms[r] = label as u8;
            if self.assign(mi, pos + 1, fits, col_used, syms, min_first, new_count + 1) {
                return true;
            }
        }
        syms[r] = NO_SYMBOL;
        false
    }

    /// Subtree whose first column has star set `mi`.
    fn run_first_column(&mut self, mi: usize) {
        let mut syms = [NO_SYMBOL; MAX_ROWS];
        self.assign(mi, 0, 0, 0, &mut syms, 0, 0);
        self.flush_nodes();
    }
}

/// Looks for a `(target, F, Z, S)`-PDA. With `parallel_width = 0` the search
/// is sequential and deterministic; otherwise first-column subtrees are
/// distributed over a pool of that many threads.
pub(crate) fn search_target(p: &Problem, shared: &Shared, parallel_width: usize) -> TargetResult {
    shared.found.store(false, Ordering::Relaxed);
    *shared.witness.lock().expect("poisoned") = None;

    if p.target == 0 {
        return TargetResult::Found(PdaGrid::from_parts_unchecked(p.f, 0, p.s, Vec::new()));
    }

    if parallel_width == 0 {
        let mut s = Searcher::new(p, shared);
        for mi in 0..p.masks.len() {
            s.run_first_column(mi);
            if shared.should_stop() {
                break;
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel_width)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..p.masks.len()).into_par_iter().for_each(|mi| {
                if shared.should_stop() {
                    return;
                }
                Searcher::new(p, shared).run_first_column(mi);
            });
        });
    }

    if let Some(w) = shared.witness.lock().expect("poisoned").take() {
        return TargetResult::Found(w);
    }
    if shared.aborted.load(Ordering::Relaxed) {
        TargetResult::Aborted
    } else {
        TargetResult::Refuted
    }
}
