//! `.pda` text format and its JSON mirror.
//!
//! ```text
//! #PDA v1
//! K=2 F=2 Z=1 S=1
//! * 0
//! 0 *
//! ```
//!
//! The renderer is canonical (single spaces, `\n` line ends, `Z=-` for
//! irregular or empty grids). The parser tolerates any run of spaces or tabs
//! and `\r\n` line ends, and rejects wrong counts, out-of-range symbols and a
//! declared `Z` the grid does not satisfy.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};

pub const MAGIC: &str = "#PDA v1";

pub fn render(grid: &PdaGrid) -> String {
    let p = grid.params();
    let z = p.z.map_or_else(|| "-".to_string(), |z| z.to_string());
    let mut out = String::with_capacity(32 + grid.cells().len() * 3);
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "K={} F={} Z={} S={}", p.k, p.f, z, p.s);
    for r in 0..grid.rows() {
        let mut first = true;
        for cell in grid.row(r) {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{cell}");
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> PdaError {
    PdaError::Parse {
        line,
        msg: msg.into(),
    }
}

fn header_field(token: Option<&str>, key: &str, line: usize) -> Result<String> {
    let token = token.ok_or_else(|| perr(line, format!("missing {key}=")))?;
    let (k, v) = token
        .split_once('=')
        .ok_or_else(|| perr(line, format!("expected {key}=<value>, got '{token}'")))?;
    if k != key {
        return Err(perr(line, format!("expected {key}=, got '{token}'")));
    }
    Ok(v.to_string())
}

fn parse_count(v: &str, key: &str, line: usize) -> Result<usize> {
    v.parse()
        .map_err(|_| perr(line, format!("{key} must be a non-negative integer, got '{v}'")))
}

pub fn parse(text: &str) -> Result<PdaGrid> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let magic = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if magic.trim() != MAGIC {
        return Err(perr(1, format!("expected '{MAGIC}', got '{magic}'")));
    }
    let header = lines.next().ok_or_else(|| perr(2, "missing header line"))?;
    let mut fields = header.split_whitespace();
    let k = parse_count(&header_field(fields.next(), "K", 2)?, "K", 2)?;
    let f = parse_count(&header_field(fields.next(), "F", 2)?, "F", 2)?;
    let z_text = header_field(fields.next(), "Z", 2)?;
    let s = parse_count(&header_field(fields.next(), "S", 2)?, "S", 2)?;
    if let Some(extra) = fields.next() {
        return Err(perr(2, format!("unexpected header field '{extra}'")));
    }
    let z = match z_text.as_str() {
        "-" => None,
        v => Some(parse_count(v, "Z", 2)?),
    };
    if f == 0 {
        return Err(perr(2, "F must be at least 1"));
    }

    let mut cells = Vec::with_capacity(f * k);
    for r in 0..f {
        let line_no = r + 3;
        let line = lines.next().unwrap_or("");
        let before = cells.len();
        for tok in line.split_whitespace() {
            let cell = if tok == "*" {
                Cell::Star
            } else {
                let x: u32 = tok
                    .parse()
                    .map_err(|_| perr(line_no, format!("bad cell '{tok}'")))?;
                if x as usize >= s {
                    return Err(perr(line_no, format!("symbol {x} is not below S={s}")));
                }
                Cell::Symbol(x)
            };
            cells.push(cell);
        }
        let got = cells.len() - before;
        if got != k {
            return Err(perr(line_no, format!("expected {k} cells, got {got}")));
        }
    }
    for (i, rest) in lines.enumerate() {
        if !rest.trim().is_empty() {
            return Err(perr(f + 3 + i, "trailing content after the last row"));
        }
    }

    let grid = PdaGrid::new(f, k, s, cells).map_err(|e| perr(2, e.to_string()))?;
    if let Some(z) = z {
        if !grid.is_z_regular(z) {
            return Err(perr(2, format!("header declares Z={z} but columns disagree")));
        }
    }
    Ok(grid)
}

/// A cell in the JSON mirror: the string `"*"` or a symbol number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonCell {
    Symbol(u32),
    Star(StarMark),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StarMark {
    #[serde(rename = "*")]
    Star,
}

/// JSON mirror of the text format: `{k, f, z, s, rows}` with `z = null`
/// for irregular grids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaJson {
    pub k: usize,
    pub f: usize,
    pub z: Option<usize>,
    pub s: usize,
    pub rows: Vec<Vec<JsonCell>>,
}

impl From<&PdaGrid> for PdaJson {
    fn from(grid: &PdaGrid) -> Self {
        let p = grid.params();
        PdaJson {
            k: p.k,
            f: p.f,
            z: p.z,
            s: p.s,
            rows: (0..grid.rows())
                .map(|r| {
                    grid.row(r)
                        .iter()
                        .map(|c| match c {
                            Cell::Star => JsonCell::Star(StarMark::Star),
                            Cell::Symbol(x) => JsonCell::Symbol(*x),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<PdaJson> for PdaGrid {
    type Error = PdaError;

    fn try_from(j: PdaJson) -> Result<Self> {
        if j.rows.len() != j.f {
            return Err(PdaError::Malformed(format!(
                "f={} but {} rows given",
                j.f,
                j.rows.len()
            )));
        }
        if let Some(r) = j.rows.iter().position(|r| r.len() != j.k) {
            return Err(PdaError::Malformed(format!("row {r} does not have k={} cells", j.k)));
        }
        let cells = j
            .rows
            .into_iter()
            .flatten()
            .map(|c| match c {
                JsonCell::Star(_) => Cell::Star,
                JsonCell::Symbol(x) => Cell::Symbol(x),
            })
            .collect();
        let grid = PdaGrid::new(j.f, j.k, j.s, cells)?;
        if let Some(z) = j.z {
            if !grid.is_z_regular(z) {
                return Err(PdaError::Malformed(format!("z={z} does not match the columns")));
            }
        }
        Ok(grid)
    }
}

pub fn to_json(grid: &PdaGrid) -> String {
    serde_json::to_string(&PdaJson::from(grid)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<PdaGrid> {
    let j: PdaJson = serde_json::from_str(text).map_err(|e| PdaError::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    j.try_into()
}
