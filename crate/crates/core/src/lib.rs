//! Placement delivery arrays (PDAs) for centralized coded caching.
//!
//! A `(K, F, Z, S)`-PDA is an `F × K` array over `[0, S) ∪ {*}` in which no
//! symbol repeats in a row or column, every column holds `Z` stars, and any
//! two cells holding the same symbol have stars in their opposite corners.
//! Column `k` describes user `k`'s cache (stars are cached subfiles), and
//! each symbol is one XOR broadcast in the delivery phase, so the scheme's
//! delivery rate is `S / F`.
//!
//! The crate covers:
//! - [`grid`], [`verify`], [`format`]: representation, checking, and the
//!   `.pda` text / JSON formats;
//! - [`transform`]: permutations, transpose, the row/symbol dual,
//!   concatenation, replication, subarrays;
//! - [`construct`]: the subset construction, the two-row base case and the
//!   recursive `Z = F - 2` family;
//! - [`bounds`]: lower bounds on `S`, upper bounds on `K`, and checkers for
//!   structural facts about optimal `Z = F - 2` arrays;
//! - [`search`]: exhaustive isomorph-rejecting search for exact optima and
//!   block decomposition;
//! - [`sim`]: the coded-caching scheme a PDA induces, end to end.

pub mod arith;
pub mod bounds;
pub mod canon;
pub mod construct;
pub mod error;
pub mod format;
pub mod grid;
pub mod search;
pub mod sim;
pub mod transform;
pub mod verify;

pub use canon::{canonical_form, equivalent};
pub use construct::{f2_base, fz2_formula, mn_pda, optimal_fz2, ConstructionRecipe, RecipeKind};
pub use error::{PdaError, Result};
pub use grid::{Cell, PdaGrid, PdaParams};
pub use search::{decompose, max_k, min_s, Decomposition, SearchConfig, SearchOutcome};
pub use sim::{rate, simulate, CachingInstance, CachingTranscript};
pub use transform::{concat, permute, replicate, role_permute, subgrid, symbol_dual, transpose, Role, RolePerm};
pub use verify::{is_valid, verify, VerificationReport, Violation};
