//! The `pda` command line.
//!
//! [`run`] takes the arguments and the three standard streams and returns
//! the exit code, so the whole surface is testable in-process. Exit codes:
//! 0 success or valid, 1 invalid array or refuted claim, 2 usage error.
//! Structured output is one JSON object per line on stdout; arrays are
//! written in the `.pda` text format.

pub mod args;
pub mod catalog;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::Parser;
use pda_core::bounds::{
    conjectured_k_fz2, lower_bound_s, lower_bound_s_fz2, pjd_holds, pjd_required_s,
    recursive_lower_bound_s, structural_checks, upper_bound_k, BoundEstimate, RecursiveOracle,
};
use pda_core::format::{from_json, parse, render};
use pda_core::search::OutcomeSummary;
use pda_core::sim::{all_demands, TranscriptSummary};
use pda_core::*;
use serde::Serialize;
use serde_json::json;

use args::{BudgetArgs, Cli, Command, ConstructKind, SearchTarget, SimulateArgs, TransformOp};
pub use catalog::{catalog, CatalogRow};

/// Environment variable overriding the default search budget.
pub const BUDGET_ENV: &str = "PDA_SEARCH_BUDGET";
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);
const MAX_DEMAND_VECTORS: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<PdaError> for Failure {
    fn from(e: PdaError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let line = serde_json::to_string(value).map_err(|e| Failure::usage(e.to_string()))?;
        writeln!(self.stdout, "{line}")?;
        Ok(())
    }

    fn note(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.stderr, "{msg}");
    }

    fn read_text(&mut self, input: &str) -> Result<String, Failure> {
        if input == "-" {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text)?;
            Ok(text)
        } else {
            std::fs::read_to_string(input).map_err(|e| Failure::usage(format!("{input}: {e}")))
        }
    }

    fn read_grid(&mut self, input: &str) -> Result<PdaGrid, Failure> {
        let text = self.read_text(input)?;
        parse_any(&text).map_err(|e| Failure::usage(format!("{input}: {e}")))
    }

    fn emit_grid(&mut self, grid: &PdaGrid, out: Option<&PathBuf>) -> Result<(), Failure> {
        let text = render(grid);
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// `.pda` text or its JSON mirror.
fn parse_any(text: &str) -> Result<PdaGrid> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        parse(text)
    }
}

pub fn run<I, T>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Streams {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            io.note(format!("error: {}", f.msg));
            f.code
        }
    }
}

fn dispatch(command: Command, io: &mut Streams) -> Outcome {
    match command {
        Command::Construct { kind, out, recipe } => construct(kind, out, recipe, io),
        Command::Verify {
            input,
            z,
            structure,
        } => verify_cmd(&input, z, structure, io),
        Command::Transform { op, out } => transform(op, out, io),
        Command::Bound(b) => bound(b, io),
        Command::Search { target } => search(target, io),
        Command::Simulate(s) => simulate_cmd(s, io),
        Command::Decompose {
            input,
            budget,
            block_out,
            rest_out,
        } => decompose_cmd(&input, &budget, block_out, rest_out, io),
        Command::Catalog(c) => catalog::run(c, io),
    }
}

fn construct(kind: ConstructKind, out: Option<PathBuf>, recipe: bool, io: &mut Streams) -> Outcome {
    let (grid, rec) = match kind {
        ConstructKind::Mn { f, z } => {
            let g = mn_pda(f, z)?;
            let r = ConstructionRecipe::leaf(RecipeKind::Mn, &[("f", f), ("z", z)]);
            (g, r)
        }
        ConstructKind::Opt2 { f, s } => optimal_fz2(f, s)?,
        ConstructKind::F2 { s } => (f2_base(s), ConstructionRecipe::leaf(RecipeKind::F2Base, &[("s", s)])),
    };
    io.note(format!("constructed {}", grid.params()));
    if recipe {
        io.json(&rec)?;
        if let Some(path) = out.as_ref() {
            io.emit_grid(&grid, Some(path))?;
        }
    } else {
        io.emit_grid(&grid, out.as_ref())?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    params: PdaParams,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn verify_cmd(input: &str, z: Option<usize>, structure: bool, io: &mut Streams) -> Outcome {
    let text = io.read_text(input)?;
    let grid = match parse_any(&text) {
        Ok(g) => g,
        Err(e) => {
            io.json(&json!({ "valid": false, "error": e.to_string() }))?;
            return Ok(EXIT_INVALID);
        }
    };
    let report = verify(&grid, z);
    io.json(&VerifyLine {
        params: grid.params(),
        report: &report,
    })?;
    if structure {
        io.json(&json!({ "structure": structural_checks(&grid) }))?;
    }
    if report.valid {
        io.note(format!("valid {}", grid.params()));
        Ok(EXIT_OK)
    } else {
        io.note(format!("invalid: {} violations", report.violations.len()));
        Ok(EXIT_INVALID)
    }
}

fn all_rows(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn transform(op: TransformOp, out: Option<PathBuf>, io: &mut Streams) -> Outcome {
    let grid = match op {
        TransformOp::Permute {
            input,
            rows,
            cols,
            symbols,
        } => {
            let g = io.read_grid(&input)?;
            permute(
                &g,
                &rows.unwrap_or_else(|| all_rows(g.rows())),
                &cols.unwrap_or_else(|| all_rows(g.cols())),
                &symbols.unwrap_or_else(|| all_rows(g.s_bound())),
            )?
        }
        TransformOp::Transpose { input } => transpose(&io.read_grid(&input)?)?,
        TransformOp::Dual { input } => symbol_dual(&io.read_grid(&input)?)?,
        TransformOp::Role { input, perm } => {
            let perm: RolePerm = perm.parse()?;
            role_permute(&io.read_grid(&input)?, perm)?
        }
        TransformOp::Concat { left, right } => {
            if left == "-" && right == "-" {
                return Err(Failure::usage("only one input can be stdin"));
            }
            let l = io.read_grid(&left)?;
            let r = io.read_grid(&right)?;
            concat(&l, &r)?
        }
        TransformOp::Replicate { input, m } => replicate(&io.read_grid(&input)?, m),
        TransformOp::Subgrid {
            input,
            rows,
            cols,
            compact,
        } => {
            let g = io.read_grid(&input)?;
            subgrid(
                &g,
                &rows.unwrap_or_else(|| all_rows(g.rows())),
                &cols.unwrap_or_else(|| all_rows(g.cols())),
                compact,
            )?
        }
    };
    io.emit_grid(&grid, out.as_ref())?;
    Ok(EXIT_OK)
}

fn bound(b: args::BoundArgs, io: &mut Streams) -> Outcome {
    let z = args::parse_z(&b.z, b.f).map_err(Failure::usage)?;
    let f = b.f;
    if z >= f {
        return Err(Failure::usage(format!("need Z < F, got F={f} Z={z}")));
    }
    if let Some(k) = b.refute {
        let s = b.s.expect("clap enforces --s");
        if z + 2 != f {
            return Err(Failure::usage("--refute applies to Z = F-2 only"));
        }
        let refuted = !pjd_holds(k, f, s);
        io.json(&json!({
            "k": k, "f": f, "z": z, "s": s,
            "required_s": pjd_required_s(k, f, s),
            "refuted": refuted,
        }))?;
        return Ok(if refuted { EXIT_INVALID } else { EXIT_OK });
    }
    if b.k.is_none() && b.s.is_none() {
        return Err(Failure::usage("give --k (bounds on S) and/or --s (bounds on K)"));
    }
    let mut lines: Vec<BoundEstimate> = Vec::new();
    if let Some(k) = b.k.filter(|&k| k > 0) {
        lines.push(lower_bound_s(k, f, z)?);
        lines.push(recursive_lower_bound_s(k, f, z, &RecursiveOracle::new())?);
        if z + 2 == f && f >= 3 {
            lines.push(lower_bound_s_fz2(k, f)?);
        }
    }
    if let Some(s) = b.s {
        lines.push(upper_bound_k(f, z, s)?);
        if z + 2 == f {
            lines.push(conjectured_k_fz2(f, s)?);
        }
    }
    for line in &lines {
        io.json(line)?;
    }
    Ok(EXIT_OK)
}

/// Flag, then environment, then the given default.
fn search_config(b: &BudgetArgs, default: Duration) -> Result<SearchConfig, Failure> {
    let time = match (b.budget, std::env::var(BUDGET_ENV)) {
        (Some(t), _) => t,
        (None, Ok(v)) => args::parse_duration(&v).map_err(|e| Failure::usage(format!("{BUDGET_ENV}: {e}")))?,
        (None, Err(_)) => default,
    };
    let mut cfg = SearchConfig::default()
        .with_time_budget(time)
        .with_pruning(!b.no_prune)
        .with_threads(b.threads);
    if let Some(n) = b.nodes {
        cfg = cfg.with_node_budget(n);
    }
    Ok(cfg)
}

fn search(target: SearchTarget, io: &mut Streams) -> Outcome {
    let (out, outcome, z) = match target {
        SearchTarget::Maxk { f, z, s, budget, out } => {
            let cfg = search_config(&budget, DEFAULT_BUDGET)?;
            (out, max_k(f, z, s, &cfg)?, z)
        }
        SearchTarget::Mins { k, f, z, budget, out } => {
            let cfg = search_config(&budget, DEFAULT_BUDGET)?;
            (out, min_s(k, f, z, &cfg)?, z)
        }
    };
    debug_assert!(is_valid(&outcome.witness, if outcome.witness.cols() > 0 { Some(z) } else { None }));
    io.json(&OutcomeSummary::from(&outcome))?;
    io.note(format!("witness {}", outcome.witness.params()));
    if let Some(path) = out.as_ref() {
        io.emit_grid(&outcome.witness, Some(path))?;
    }
    Ok(EXIT_OK)
}

fn simulate_cmd(a: SimulateArgs, io: &mut Streams) -> Outcome {
    let grid = io.read_grid(&a.pda)?;
    let instance = |d: Vec<usize>| -> Result<CachingInstance, Failure> {
        Ok(CachingInstance::new(&grid, a.files, d)?
            .with_seed(a.seed)
            .with_subfile_size(a.subfile_bytes))
    };
    if !a.all_demands {
        let inst = instance(a.demands.unwrap_or_default())?;
        let t = simulate(&grid, &inst)?;
        let summary = TranscriptSummary::from(&t);
        io.json(&summary)?;
        return Ok(if summary.decoded_all { EXIT_OK } else { EXIT_INVALID });
    }
    let total = (a.files as u64).checked_pow(grid.cols() as u32);
    if total.is_none_or(|t| t > MAX_DEMAND_VECTORS) {
        return Err(Failure::usage(format!(
            "{}^{} demand vectors is too many for --all-demands",
            a.files,
            grid.cols()
        )));
    }
    let mut failed: Vec<Vec<usize>> = Vec::new();
    let mut count = 0u64;
    for d in all_demands(a.files, grid.cols()) {
        count += 1;
        if !simulate(&grid, &instance(d.clone())?)?.decoded_all() {
            failed.push(d);
        }
    }
    io.json(&json!({
        "assignments": count,
        "rate": rate(&grid).to_string(),
        "broadcasts": grid.symbols_used(),
        "decoded_all": failed.is_empty(),
        "failed": failed.iter().take(10).collect::<Vec<_>>(),
    }))?;
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_INVALID })
}

fn decompose_cmd(
    input: &str,
    budget: &BudgetArgs,
    block_out: Option<PathBuf>,
    rest_out: Option<PathBuf>,
    io: &mut Streams,
) -> Outcome {
    let grid = io.read_grid(input)?;
    let cfg = search_config(budget, DEFAULT_BUDGET)?;
    match decompose(&grid, &cfg)? {
        Some(d) => {
            io.json(&json!({
                "found": true,
                "block": d.block.params(),
                "remainder": d.remainder.params(),
                "block_columns": d.block_columns,
            }))?;
            if let Some(p) = block_out.as_ref() {
                io.emit_grid(&d.block, Some(p))?;
            }
            if let Some(p) = rest_out.as_ref() {
                io.emit_grid(&d.remainder, Some(p))?;
            }
            Ok(EXIT_OK)
        }
        None => {
            io.json(&json!({ "found": false }))?;
            Ok(EXIT_INVALID)
        }
    }
}
