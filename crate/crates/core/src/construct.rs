//! Explicit and recursive PDA families.
//!
//! * [`mn_pda`]: columns are the `Z`-subsets of the rows, symbols the
//!   `(Z+1)`-subsets; a `(C(F,Z), F, Z, C(F,Z+1))`-PDA.
//! * [`f2_base`]: the starless two-row array, `⌊S/2⌋` columns.
//! * [`optimal_fz2`]: the Euclid-style recursion for `Z = F - 2`, alternating
//!   full subset blocks with a symbol dual of the smaller instance.
//!
//! Every construction also produces a [`ConstructionRecipe`] whose
//! evaluation rebuilds the grid bit for bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{binomial, colex_rank, gcd, subsets_colex};
use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};
use crate::transform::{concat, replicate, symbol_dual};

/// Largest `F` accepted by the subset construction (row sets are bitmasks).
pub const MAX_SUBSET_ROWS: usize = 63;

/// `(C(F,Z), F, Z, C(F,Z+1))`-PDA over subsets in colexicographic order.
///
/// Column `B` (a `Z`-subset) has a star in row `i` iff `i ∈ B`; otherwise it
/// holds the colex rank of `B ∪ {i}` among `(Z+1)`-subsets.
pub fn mn_pda(f: usize, z: usize) -> Result<PdaGrid> {
    if z >= f {
        return Err(PdaError::Usage(format!("subset construction needs Z < F, got F={f} Z={z}")));
    }
    if f > MAX_SUBSET_ROWS {
        return Err(PdaError::Usage(format!("F={f} exceeds {MAX_SUBSET_ROWS}")));
    }
    let columns = subsets_colex(f as u32, z as u32);
    let k = columns.len();
    let s = binomial(f as u64, z as u64 + 1) as usize;
    let mut cells = vec![Cell::Star; f * k];
    for (c, &b) in columns.iter().enumerate() {
        for i in 0..f {
            let bit = 1u64 << i;
            if b & bit == 0 {
                cells[i * k + c] = Cell::Symbol(colex_rank(b | bit) as u32);
            }
        }
    }
    Ok(PdaGrid::from_parts_unchecked(f, k, s, cells))
}

/// `(⌊S/2⌋, 2, 0, S)`-PDA: column `j` holds `2j` over `2j+1`.
pub fn f2_base(s: usize) -> PdaGrid {
    let k = s / 2;
    let cells = (0..2)
        .flat_map(|r| (0..k).map(move |j| Cell::Symbol((2 * j + r) as u32)))
        .collect();
    PdaGrid::from_parts_unchecked(2, k, s, cells)
}

/// `(F-1)(S-1)/2 + (gcd(F,S)-1)/2`, the column count reached by
/// [`optimal_fz2`]. The numerator is always even.
pub fn fz2_formula(f: usize, s: usize) -> usize {
    if s == 0 {
        return 0;
    }
    ((f - 1) * (s - 1) + gcd(f, s) - 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeKind {
    Mn,
    F2Base,
    OptimalFz2,
    Replicate,
    Concat,
    Dual,
}

/// Provenance tree of a construction. Leaves are `mn` or `f2_base`.
///
/// Node semantics under [`ConstructionRecipe::evaluate`]:
/// `mn {f, z}` and `f2_base {s}` are leaves; `replicate {m}` and `dual` take
/// one child; `concat` folds its children left to right and then widens `S`
/// by `pad_symbols` unused symbols; `optimal_fz2 {f, s}` annotates its single
/// child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub name: RecipeKind,
    pub parameters: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ConstructionRecipe>,
}

impl ConstructionRecipe {
    fn node(name: RecipeKind, params: &[(&str, usize)], children: Vec<Self>) -> Self {
        Self {
            name,
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            children,
        }
    }

    /// A node without children, e.g. `leaf(RecipeKind::Mn, &[("f", 4), ("z", 2)])`.
    pub fn leaf(name: RecipeKind, params: &[(&str, usize)]) -> Self {
        Self::node(name, params, Vec::new())
    }

    fn param(&self, key: &str) -> Result<usize> {
        self.parameters
            .get(key)
            .copied()
            .ok_or_else(|| PdaError::Usage(format!("{:?} node lacks '{key}'", self.name)))
    }

    fn only_child(&self) -> Result<&Self> {
        match self.children.as_slice() {
            [c] => Ok(c),
            _ => Err(PdaError::Usage(format!("{:?} node needs exactly one child", self.name))),
        }
    }

    /// Rebuilds the grid this recipe describes.
    pub fn evaluate(&self) -> Result<PdaGrid> {
        match self.name {
            RecipeKind::Mn => mn_pda(self.param("f")?, self.param("z")?),
            RecipeKind::F2Base => Ok(f2_base(self.param("s")?)),
            RecipeKind::Replicate => Ok(replicate(&self.only_child()?.evaluate()?, self.param("m")?)),
            RecipeKind::Dual => symbol_dual(&self.only_child()?.evaluate()?),
            RecipeKind::OptimalFz2 => self.only_child()?.evaluate(),
            RecipeKind::Concat => {
                let mut parts = self.children.iter();
                let first = parts
                    .next()
                    .ok_or_else(|| PdaError::Usage("concat node without children".into()))?;
                let mut acc = first.evaluate()?;
                for child in parts {
                    acc = concat(&acc, &child.evaluate()?)?;
                }
                let pad = self.parameters.get("pad_symbols").copied().unwrap_or(0);
                let s = acc.s_bound() + pad;
                acc.with_s_bound(s)
            }
        }
    }

    /// Leaf nodes, left to right.
    pub fn leaves(&self) -> Vec<&ConstructionRecipe> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Self::depth).max().unwrap_or(0)
    }
}

/// Recipe for the `Z = F - 2` construction with `K = fz2_formula(F, S)`.
///
/// `F = 2` is [`f2_base`]. Otherwise write `S = mF + r` with `1 ≤ r ≤ F`:
/// `r = F` gives `m + 1` subset blocks; `r = 1` gives `m` blocks plus one
/// unused symbol; `2 ≤ r < F` appends the symbol dual of the `(r, F)`
/// instance to `m` blocks.
pub fn optimal_fz2_recipe(f: usize, s: usize) -> Result<ConstructionRecipe> {
    if f < 2 {
        return Err(PdaError::Usage(format!("Z = F - 2 construction needs F >= 2, got {f}")));
    }
    if s == 0 {
        return Err(PdaError::Usage("Z = F - 2 construction needs S >= 1".into()));
    }
    if f > MAX_SUBSET_ROWS {
        return Err(PdaError::Usage(format!("F={f} exceeds {MAX_SUBSET_ROWS}")));
    }
    let body = if f == 2 {
        ConstructionRecipe::node(RecipeKind::F2Base, &[("s", s)], vec![])
    } else {
        let (m, r) = ((s - 1) / f, (s - 1) % f + 1);
        let blocks = |m: usize| {
            ConstructionRecipe::node(
                RecipeKind::Replicate,
                &[("m", m)],
                vec![ConstructionRecipe::node(RecipeKind::Mn, &[("f", f), ("z", f - 2)], vec![])],
            )
        };
        if r == f {
            blocks(m + 1)
        } else if r == 1 {
            ConstructionRecipe::node(RecipeKind::Concat, &[("pad_symbols", 1)], vec![blocks(m)])
        } else {
            let rest = ConstructionRecipe::node(RecipeKind::Dual, &[], vec![optimal_fz2_recipe(r, f)?]);
            ConstructionRecipe::node(RecipeKind::Concat, &[], vec![blocks(m), rest])
        }
    };
    Ok(ConstructionRecipe::node(
        RecipeKind::OptimalFz2,
        &[("f", f), ("s", s)],
        vec![body],
    ))
}

/// Valid `(K*, F, F-2, S)`-PDA with `K* = fz2_formula(F, S)`, and its recipe.
pub fn optimal_fz2(f: usize, s: usize) -> Result<(PdaGrid, ConstructionRecipe)> {
    let recipe = optimal_fz2_recipe(f, s)?;
    let grid = recipe.evaluate()?;
    Ok((grid, recipe))
}
