use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "pda", version, about = "Build, check, transform and search placement delivery arrays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a constructed array
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Write the array here instead of stdout
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Print the construction recipe as JSON on stdout
        #[arg(long, global = true)]
        recipe: bool,
    },
    /// Check the two PDA properties (and optionally the star count)
    Verify {
        /// `.pda` or JSON file, `-` for stdin
        input: String,
        /// Expected stars per column
        #[arg(long)]
        z: Option<usize>,
        /// Also report the structural checks for Z = F-2 arrays
        #[arg(long)]
        structure: bool,
    },
    /// Relabel, transpose, dualize or combine arrays
    Transform {
        #[command(subcommand)]
        op: TransformOp,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Bounds on S and K
    Bound(BoundArgs),
    /// Exhaustive search for exact optima
    Search {
        #[command(subcommand)]
        target: SearchTarget,
    },
    /// Run the coded-caching scheme an array induces
    Simulate(SimulateArgs),
    /// Split off an F(F-1)/2-column block from a Z = F-2 array
    Decompose {
        input: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the block here
        #[arg(long)]
        block_out: Option<PathBuf>,
        /// Write the remainder here
        #[arg(long)]
        rest_out: Option<PathBuf>,
    },
    /// Table of the Z = F-2 formula against exhaustive search
    Catalog(CatalogArgs),
}

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// Subset construction: rows are elements, columns are Z-subsets
    Mn {
        #[arg(long)]
        f: usize,
        #[arg(long)]
        z: usize,
    },
    /// Largest known Z = F-2 array with S symbols
    Opt2 {
        #[arg(long)]
        f: usize,
        #[arg(long)]
        s: usize,
    },
    /// Two-row array with S symbols and no stars
    F2 {
        #[arg(long)]
        s: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransformOp {
    /// Apply row, column and symbol permutations (old index -> new index)
    Permute {
        input: String,
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        symbols: Option<Vec<usize>>,
    },
    Transpose {
        input: String,
    },
    /// Exchange the roles of rows and symbols
    Dual {
        input: String,
    },
    /// Any of the six role assignments, e.g. `c,s,r`
    Role {
        input: String,
        #[arg(long)]
        perm: String,
    },
    /// Place two arrays side by side
    Concat {
        left: String,
        right: String,
    },
    /// Concatenate M copies
    Replicate {
        input: String,
        #[arg(long)]
        m: usize,
    },
    /// Keep the given rows and columns
    Subgrid {
        input: String,
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        cols: Option<Vec<usize>>,
        /// Renumber the surviving symbols densely
        #[arg(long)]
        compact: bool,
    },
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub f: u64,
    /// Stars per column; `f-2` is accepted
    #[arg(long)]
    pub z: String,
    #[arg(long)]
    pub s: Option<u64>,
    /// Check whether K is ruled out for Z = F-2 at this S
    #[arg(long, requires = "s")]
    pub refute: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Wall-clock budget such as `60s`, `500ms` or `2m`
    #[arg(long, value_parser = parse_duration)]
    pub budget: Option<Duration>,
    /// Node budget
    #[arg(long)]
    pub nodes: Option<u64>,
    /// Worker threads (0 = sequential and deterministic)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Do not skip targets ruled out by counting bounds
    #[arg(long)]
    pub no_prune: bool,
}

#[derive(Subcommand, Debug)]
pub enum SearchTarget {
    /// Largest K for given F, Z, S
    Maxk {
        #[arg(long)]
        f: usize,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the witness here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest S for given K, F, Z
    Mins {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        z: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub pda: String,
    #[arg(long)]
    pub files: usize,
    /// One file index per user
    #[arg(long, value_delimiter = ',', required_unless_present = "all_demands")]
    pub demands: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub subfile_bytes: usize,
    /// Try every one of the N^K demand vectors
    #[arg(long, conflicts_with = "demands")]
    pub all_demands: bool,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// Only `f-2` is supported
    #[arg(long, default_value = "f-2")]
    pub z: String,
    /// Row range, e.g. `2..6` (inclusive) or `4`
    #[arg(long, value_parser = parse_range)]
    pub f: (usize, usize),
    #[arg(long, default_value_t = 1)]
    pub s_min: usize,
    #[arg(long)]
    pub s_max: usize,
    /// Skip the search column
    #[arg(long)]
    pub no_search: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

pub fn parse_duration(text: &str) -> Result<Duration, String> {
    let text = text.trim();
    let split = text.find(|c: char| !c.is_ascii_digit() && c != '.').unwrap_or(text.len());
    let (num, unit) = text.split_at(split);
    let value: f64 = num.parse().map_err(|_| format!("bad duration '{text}'"))?;
    let secs = match unit {
        "" | "s" => value,
        "ms" => value / 1000.0,
        "m" | "min" => value * 60.0,
        "h" => value * 3600.0,
        _ => return Err(format!("unknown unit '{unit}' in '{text}'")),
    };
    if !(secs > 0.0 && secs.is_finite()) {
        return Err(format!("duration must be positive, got '{text}'"));
    }
    Ok(Duration::from_secs_f64(secs))
}

pub fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let bad = || format!("bad range '{text}', expected A..B or A");
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (
            a.parse().map_err(|_| bad())?,
            b.trim_start_matches('=').parse().map_err(|_| bad())?,
        ),
        None => {
            let v = text.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range '{text}'"));
    }
    Ok((lo, hi))
}

/// `Z` given as a number or as `f-2`.
pub fn parse_z(text: &str, f: u64) -> Result<u64, String> {
    let t = text.trim().to_ascii_lowercase();
    if let Some(rest) = t.strip_prefix("f-") {
        let off: u64 = rest.parse().map_err(|_| format!("bad Z '{text}'"))?;
        return f.checked_sub(off).ok_or_else(|| format!("Z = F-{off} is negative for F={f}"));
    }
    t.parse().map_err(|_| format!("bad Z '{text}'"))
}
