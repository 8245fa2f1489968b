//! The coded-caching scheme a PDA induces.
//!
//! Each file is split into `F` subfiles. User `k` caches subfile `j` of every
//! file iff cell `(j, k)` is a star. In the delivery phase the server sends,
//! for each symbol `s` in the grid, the XOR of subfile `j` of the file
//! demanded by user `k` over all cells `(j, k)` holding `s`. A user recovers
//! each missing subfile from one broadcast by cancelling the other terms
//! with its cache.
//!
//! Subfile bytes are pseudo-random, derived from `(seed, file, subfile)`, so
//! decoding is checked byte for byte.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PdaError, Result};
use crate::grid::{Cell, PdaGrid};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachingInstance {
    pub n_files: usize,
    pub k_users: usize,
    pub f_subfiles: usize,
    pub subfile_size: usize,
    pub demands: Vec<usize>,
    pub seed: u64,
}

impl CachingInstance {
    pub fn new(grid: &PdaGrid, n_files: usize, demands: Vec<usize>) -> Result<Self> {
        let inst = Self {
            n_files,
            k_users: grid.cols(),
            f_subfiles: grid.rows(),
            subfile_size: 32,
            demands,
            seed: 0,
        };
        inst.check(grid)?;
        Ok(inst)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_subfile_size(mut self, bytes: usize) -> Self {
        self.subfile_size = bytes;
        self
    }

    fn check(&self, grid: &PdaGrid) -> Result<()> {
        if self.n_files == 0 {
            return Err(PdaError::Usage("need at least one file".into()));
        }
        if self.k_users != grid.cols() || self.f_subfiles != grid.rows() {
            return Err(PdaError::Usage(format!(
                "instance is {} users x {} subfiles, grid is {} x {}",
                self.k_users,
                self.f_subfiles,
                grid.cols(),
                grid.rows()
            )));
        }
        if self.demands.len() != self.k_users {
            return Err(PdaError::Usage(format!(
                "{} demands for {} users",
                self.demands.len(),
                self.k_users
            )));
        }
        if let Some(&d) = self.demands.iter().find(|&&d| d >= self.n_files) {
            return Err(PdaError::Usage(format!("demand {d} is not below N={}", self.n_files)));
        }
        Ok(())
    }

    /// Content of subfile `subfile` of file `file`.
    pub fn subfile(&self, file: usize, subfile: usize) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((file as u64) << 32) | subfile as u64);
        let mut buf = vec![0u8; self.subfile_size];
        rng.fill_bytes(&mut buf);
        buf
    }
}

/// What each user stores: `(file, subfile)` pairs with their bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub caches: Vec<HashMap<(usize, usize), Vec<u8>>>,
}

impl Placement {
    /// Cached `(file, subfile)` pairs of one user, sorted.
    pub fn cached(&self, user: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.caches[user].keys().copied().collect();
        v.sort_unstable();
        v
    }
}

/// One summand of a broadcast: subfile `subfile` of `file`, wanted by the
/// user of column `user`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub user: usize,
    pub file: usize,
    pub subfile: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Broadcast {
    pub symbol: u32,
    pub terms: Vec<Term>,
    pub payload: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachingTranscript {
    pub placement: Placement,
    pub broadcasts: Vec<Broadcast>,
    pub decoded: Vec<bool>,
    pub rate: Ratio<u64>,
}

impl CachingTranscript {
    pub fn decoded_all(&self) -> bool {
        self.decoded.iter().all(|&ok| ok)
    }
}

/// Printable digest of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptSummary {
    pub rate: String,
    pub broadcasts: usize,
    pub decoded_all: bool,
    pub failed_users: Vec<usize>,
}

impl From<&CachingTranscript> for TranscriptSummary {
    fn from(t: &CachingTranscript) -> Self {
        Self {
            rate: t.rate.to_string(),
            broadcasts: t.broadcasts.len(),
            decoded_all: t.decoded_all(),
            failed_users: t
                .decoded
                .iter()
                .enumerate()
                .filter(|(_, ok)| !**ok)
                .map(|(k, _)| k)
                .collect(),
        }
    }
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    acc.iter_mut().zip(other).for_each(|(a, b)| *a ^= b);
}

pub fn place(grid: &PdaGrid, inst: &CachingInstance) -> Result<Placement> {
    inst.check(grid)?;
    let caches = (0..grid.cols())
        .map(|k| {
            let mut cache = HashMap::new();
            for j in (0..grid.rows()).filter(|&j| grid.get(j, k).is_star()) {
                for file in 0..inst.n_files {
                    cache.insert((file, j), inst.subfile(file, j));
                }
            }
            cache
        })
        .collect();
    Ok(Placement { caches })
}

/// One broadcast per symbol present in the grid, in symbol order.
pub fn deliver(grid: &PdaGrid, inst: &CachingInstance) -> Result<Vec<Broadcast>> {
    inst.check(grid)?;
    let mut out = Vec::new();
    for (x, cells) in grid.occurrences().into_iter().enumerate() {
        if cells.is_empty() {
            continue;
        }
        let mut payload = vec![0u8; inst.subfile_size];
        let terms = cells
            .into_iter()
            .map(|(j, k)| {
                let file = inst.demands[k];
                xor_into(&mut payload, &inst.subfile(file, j));
                Term {
                    user: k,
                    file,
                    subfile: j,
                }
            })
            .collect();
        out.push(Broadcast {
            symbol: x as u32,
            terms,
            payload,
        });
    }
    Ok(out)
}

/// Per-user verdict: every subfile of the demanded file is reconstructed
/// byte for byte.
pub fn decode(
    grid: &PdaGrid,
    inst: &CachingInstance,
    placement: &Placement,
    broadcasts: &[Broadcast],
) -> Result<Vec<bool>> {
    inst.check(grid)?;
    let by_symbol: HashMap<u32, &Broadcast> = broadcasts.iter().map(|b| (b.symbol, b)).collect();
    let verdicts = (0..grid.cols())
        .map(|k| {
            let cache = &placement.caches[k];
            let want = inst.demands[k];
            (0..grid.rows()).all(|j| {
                let got = match grid.get(j, k) {
                    Cell::Star => cache.get(&(want, j)).cloned(),
                    Cell::Symbol(x) => by_symbol.get(&x).and_then(|b| {
                        let mut acc = b.payload.clone();
                        for t in b.terms.iter().filter(|t| (t.user, t.subfile) != (k, j)) {
                            xor_into(&mut acc, cache.get(&(t.file, t.subfile))?);
                        }
                        Some(acc)
                    }),
                };
                got.is_some_and(|bytes| bytes == inst.subfile(want, j))
            })
        })
        .collect();
    Ok(verdicts)
}

/// Delivery rate `S_used / F` in lowest terms, where `S_used` counts the
/// symbols that actually occur.
pub fn rate(grid: &PdaGrid) -> Ratio<u64> {
    Ratio::new(grid.symbols_used() as u64, grid.rows() as u64)
}

/// Placement, delivery and decoding in one go.
pub fn simulate(grid: &PdaGrid, inst: &CachingInstance) -> Result<CachingTranscript> {
    let placement = place(grid, inst)?;
    let broadcasts = deliver(grid, inst)?;
    let decoded = decode(grid, inst, &placement, &broadcasts)?;
    Ok(CachingTranscript {
        placement,
        broadcasts,
        decoded,
        rate: rate(grid),
    })
}

/// All `n^k` demand vectors in lexicographic order.
pub fn all_demands(n_files: usize, k_users: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n_files as u64).checked_pow(k_users as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut i| {
        let mut d = vec![0; k_users];
        for slot in d.iter_mut().rev() {
            *slot = (i % n_files as u64) as usize;
            i /= n_files as u64;
        }
        d
    })
}

pub fn random_demands<R: Rng>(rng: &mut R, n_files: usize, k_users: usize) -> Vec<usize> {
    (0..k_users).map(|_| rng.gen_range(0..n_files)).collect()
}
