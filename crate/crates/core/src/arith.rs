//! Exact integer helpers shared by the bound formulas and constructions.

pub use num_integer::gcd;

/// `⌈a / b⌉` for non-negative `a` and positive `b`.
#[inline]
pub fn ceil_div(a: u64, b: u64) -> u64 {
    debug_assert!(b > 0);
    a.div_ceil(b)
}

/// `⌈a / b⌉` for signed `a` and positive `b`, rounding toward +∞.
#[inline]
pub fn ceil_div_signed(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Rank of a subset (as a bitmask) in colexicographic order among subsets of
/// the same size.
pub fn colex_rank(mask: u64) -> u64 {
    let mut rank = 0;
    let mut j = 0;
    let mut m = mask;
    while m != 0 {
        let c = m.trailing_zeros() as u64;
        j += 1;
        rank += binomial(c, j);
        m &= m - 1;
    }
    rank
}

/// All `k`-subsets of `[0, n)` as bitmasks, in colexicographic order
/// (equivalently, increasing numeric value).
pub fn subsets_colex(n: u32, k: u32) -> Vec<u64> {
    assert!(n < 64, "subset enumeration limited to n < 64");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while m < limit {
        out.push(m);
        // Gosper's hack
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}
