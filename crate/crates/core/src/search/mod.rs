//! Exact extremal values at small scale.
//!
//! [`max_k`] computes `K_max(F, Z, S)` by trying targets downward from the
//! counting bound `⌊(Z+1)S/(F-Z)⌋` and returning the first feasible one.
//! [`min_s`] scans `S` upward from the row-peeling lower bound. Both report
//! whether every level they relied on was searched to exhaustion; if not,
//! the optimum is only a witnessed bound.

mod decompose;
mod engine;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use decompose::{decompose, Decomposition};

use crate::bounds::{degenerate_s_min, lower_bound_s, pjd_holds, upper_bound_k, SMinOracle};
use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};
use engine::{search_target, Problem, Shared, TargetResult, MAX_ROWS, MAX_SYMBOLS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_budget: Duration,
    pub node_budget: u64,
    /// Skip targets refuted by the `Z = F - 2` counting condition.
    pub prune_with_bounds: bool,
    /// Worker threads; 0 runs a sequential, deterministic search.
    pub parallel_width: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            time_budget: Duration::from_secs(60),
            node_budget: u64::MAX,
            prune_with_bounds: true,
            parallel_width: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_pruning(mut self, prune: bool) -> Self {
        self.prune_with_bounds = prune;
        self
    }

    pub fn with_threads(mut self, width: usize) -> Self {
        self.parallel_width = width;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.time_budget.is_zero() || self.node_budget == 0 {
            return Err(PdaError::Usage("search budgets must be positive".into()));
        }
        Ok(())
    }

    fn shared(&self, start: Instant) -> Shared {
        Shared::new(start.checked_add(self.time_budget), self.node_budget)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub optimum: usize,
    pub witness: PdaGrid,
    /// The optimum is exact. Otherwise it is a witnessed lower bound (for
    /// `K`) or upper bound (for `S`).
    pub exhausted: bool,
    pub nodes_visited: u64,
    pub elapsed: Duration,
}

/// JSON summary printed by the command line.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub optimum: usize,
    pub exhausted: bool,
    pub nodes: u64,
    pub elapsed: f64,
}

impl From<&SearchOutcome> for OutcomeSummary {
    fn from(o: &SearchOutcome) -> Self {
        Self {
            optimum: o.optimum,
            exhausted: o.exhausted,
            nodes: o.nodes_visited,
            elapsed: o.elapsed.as_secs_f64(),
        }
    }
}

fn check_shape(f: usize, z: usize, s: usize) -> Result<()> {
    if z >= f {
        return Err(PdaError::Usage(format!("need Z < F, got F={f} Z={z}")));
    }
    if f > MAX_ROWS {
        return Err(PdaError::Usage(format!("search supports F <= {MAX_ROWS}, got {f}")));
    }
    if s > MAX_SYMBOLS {
        return Err(PdaError::Usage(format!("search supports S <= {MAX_SYMBOLS}, got {s}")));
    }
    Ok(())
}

fn refuted_by_bounds(cfg: &SearchConfig, k: usize, f: usize, z: usize, s: usize) -> bool {
    cfg.prune_with_bounds && f >= 3 && z + 2 == f && !pjd_holds(k as u64, f as u64, s as u64)
}

/// Largest `K` such that a `(K, F, Z, S)`-PDA exists.
pub fn max_k(f: usize, z: usize, s: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_shape(f, z, s)?;
    cfg.validate()?;
    let start = Instant::now();
    let shared = cfg.shared(start);
    let upper = upper_bound_k(f as u64, z as u64, s as u64)?.value as usize;

    let mut exhausted = true;
    let mut result: Option<(usize, PdaGrid)> = None;
    for target in (1..=upper).rev() {
        if refuted_by_bounds(cfg, target, f, z, s) {
            continue;
        }
        let (deepest, witness) = shared.deepest();
        if deepest >= target {
            result = witness.map(|w| (deepest, w));
            break;
        }
        match search_target(&Problem::new(f, z, s, target), &shared, cfg.parallel_width) {
            TargetResult::Found(w) => {
                result = Some((target, w));
                break;
            }
            TargetResult::Refuted => {}
            TargetResult::Aborted => {
                exhausted = false;
                let (deepest, witness) = shared.deepest();
                result = witness.map(|w| (deepest, w));
                break;
            }
        }
    }
    let (optimum, witness) = match result {
        Some(r) => r,
        None => (0, PdaGrid::new(f, 0, s, Vec::new())?),
    };
    Ok(SearchOutcome {
        optimum,
        witness,
        exhausted,
        nodes_visited: shared.nodes.load(std::sync::atomic::Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

/// `(K, F, Z, K(F-Z))`-PDA with every symbol used once.
fn all_distinct(k: usize, f: usize, z: usize) -> PdaGrid {
    let s = k * (f - z);
    let mut cells = vec![Cell::Star; f * k];
    let mut next = 0u32;
    for c in 0..k {
        for r in z..f {
            cells[r * k + c] = Cell::Symbol(next);
            next += 1;
        }
    }
    PdaGrid::from_parts_unchecked(f, k, s, cells)
}

/// Smallest `S` such that a `(K, F, Z, S)`-PDA exists.
pub fn min_s(k: usize, f: usize, z: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_shape(f, z, 0)?;
    cfg.validate()?;
    let start = Instant::now();
    if k == 0 {
        return Ok(SearchOutcome {
            optimum: 0,
            witness: PdaGrid::new(f, 0, 0, Vec::new())?,
            exhausted: true,
            nodes_visited: 0,
            elapsed: start.elapsed(),
        });
    }
    let shared = cfg.shared(start);
    let floor = lower_bound_s(k as u64, f as u64, z as u64)?.value as usize;
    let trivial = k * (f - z);
    let mut exhausted = true;
    for s in floor..trivial {
        if (upper_bound_k(f as u64, z as u64, s as u64)?.value as usize) < k
            || refuted_by_bounds(cfg, k, f, z, s)
        {
            continue;
        }
        if s > MAX_SYMBOLS {
            exhausted = false;
            break;
        }
        match search_target(&Problem::new(f, z, s, k), &shared, cfg.parallel_width) {
            TargetResult::Found(w) => {
                return Ok(SearchOutcome {
                    optimum: s,
                    witness: w,
                    exhausted,
                    nodes_visited: shared.nodes.load(std::sync::atomic::Ordering::Relaxed),
                    elapsed: start.elapsed(),
                });
            }
            TargetResult::Refuted => {}
            TargetResult::Aborted => {
                exhausted = false;
                break;
            }
        }
    }
    Ok(SearchOutcome {
        optimum: trivial,
        witness: all_distinct(k, f, z),
        exhausted,
        nodes_visited: shared.nodes.load(std::sync::atomic::Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

/// Exact minimum `S` from [`min_s`] where the search exhausts, falling back
/// to the row-peeling bound elsewhere.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    pub cfg: SearchConfig,
}

impl SMinOracle for ExactOracle {
    fn s_min_lower(&self, k: u64, f: u64, z: u64) -> Result<(u64, bool)> {
        if let Some(v) = degenerate_s_min(k, f, z) {
            return Ok((v, true));
        }
        let fallback = lower_bound_s(k, f, z)?.value;
        if f as usize > MAX_ROWS {
            return Ok((fallback, true));
        }
        let out = min_s(k as usize, f as usize, z as usize, &self.cfg)?;
        if out.exhausted {
            Ok((out.optimum as u64, true))
        } else {
            Ok((fallback, true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_valid;

    fn cfg() -> SearchConfig {
        SearchConfig::default().with_time_budget(Duration::from_secs(60))
    }

    #[test]
    fn max_k_small() {
        for (f, z, s, want) in [(2, 0, 5, 2), (4, 2, 4, 6), (3, 1, 4, 3), (3, 1, 0, 0), (3, 1, 3, 3)] {
            let out = max_k(f, z, s, &cfg()).unwrap();
            assert!(out.exhausted);
            assert_eq!(out.optimum, want, "max_k({f},{z},{s})");
            assert_eq!(out.witness.cols(), want);
            assert_eq!(out.witness.s_bound(), s);
            assert!(is_valid(&out.witness, Some(z)));
        }
    }

    #[test]
    fn max_k_without_pruning() {
        let out = max_k(3, 1, 4, &cfg().with_pruning(false)).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.optimum, 3);
    }

    #[test]
    fn min_s_small() {
        let out = min_s(6, 4, 2, &cfg()).unwrap();
        assert_eq!((out.optimum, out.exhausted), (4, true));
        assert!(is_valid(&out.witness, Some(2)));
        for f in 1..6 {
            for z in 0..f {
                let out = min_s(1, f, z, &cfg()).unwrap();
                assert_eq!(out.optimum, f - z);
            }
        }
        let out = min_s(3, 3, 1, &cfg()).unwrap();
        assert_eq!((out.optimum, out.exhausted), (3, true));
        let out = min_s(0, 3, 1, &cfg()).unwrap();
        assert_eq!(out.optimum, 0);
    }

    #[test]
    fn node_budget_cuts_search_short() {
        let out = max_k(4, 2, 5, &cfg().with_pruning(false).with_node_budget(300)).unwrap();
        assert!(!out.exhausted);
        assert!(out.optimum <= 7);
        assert_eq!(out.witness.cols(), out.optimum);
        assert!(is_valid(&out.witness, Some(2)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(max_k(3, 3, 2, &cfg()).is_err());
        assert!(max_k(17, 3, 2, &cfg()).is_err());
        assert!(max_k(3, 1, 65, &cfg()).is_err());
        assert!(max_k(3, 1, 4, &cfg().with_node_budget(0)).is_err());
    }
}
