//! Sumsets of binary block families and the compression maps used to lower
//! bound them.
//!
//! A binary `k`-vector is packed into a `u32` with component `j` (1-based)
//! at bit `j-1`. A vector in `{0..M}^k` is packed as a base-`(M+1)` numeral
//! with component `j` at digit `j-1`; because every component stays at
//! most `M`, adding packed binary vectors never carries, so sumsets are
//! computed with plain integer addition.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_budget, Error, Result};
use crate::Budget;

/// `M` sets of binary `k`-vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFamily {
    pub k: usize,
    pub sets: Vec<BTreeSet<u32>>,
}

impl BlockFamily {
    pub fn new(k: usize, sets: Vec<BTreeSet<u32>>) -> Result<Self> {
        if k == 0 || k > 24 {
            return Err(Error::PreconditionViolated(format!(
                "block length must be in 1..=24, got {k}"
            )));
        }
        if sets.is_empty() {
            return Err(Error::PreconditionViolated("family is empty".into()));
        }
        for a in &sets {
            if a.is_empty() {
                return Err(Error::PreconditionViolated("empty block set".into()));
            }
            if a.iter().any(|&v| v >> k != 0) {
                return Err(Error::PreconditionViolated(format!(
                    "vector wider than k={k}"
                )));
            }
        }
        Ok(BlockFamily { k, sets })
    }

    /// Builds a family from vectors written as component lists.
    pub fn from_vectors(k: usize, sets: &[&[&[u8]]]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|vs| vs.iter().map(|v| pack_binary(v)).collect())
            .collect();
        Self::new(k, sets)
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// `prod |A_i|`, saturating.
    pub fn product_size(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128))
    }
}

pub fn pack_binary(v: &[u8]) -> u32 {
    v.iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | ((b as u32 & 1) << j))
}

pub fn unpack_binary(v: u32, k: usize) -> Vec<u8> {
    (0..k).map(|j| (v >> j & 1) as u8).collect()
}

/// Packs a vector in `{0..m}^k`.
pub fn pack_sum(p: &[u64], m: usize) -> u64 {
    let radix = m as u64 + 1;
    p.iter().rev().fold(0, |acc, &c| acc * radix + c)
}

pub fn unpack_sum(mut p: u64, m: usize, k: usize) -> Vec<u64> {
    let radix = m as u64 + 1;
    (0..k)
        .map(|_| {
            let d = p % radix;
            p /= radix;
            d
        })
        .collect()
}

fn embed(a: u32, m: usize, k: usize) -> u64 {
    let radix = m as u64 + 1;
    let mut weight = 1u64;
    let mut out = 0;
    for j in 0..k {
        if a >> j & 1 == 1 {
            out += weight;
        }
        weight *= radix;
    }
    out
}

/// Componentwise integer sum of `M` binary vectors.
pub fn q_sum(tuple: &[&[u8]]) -> Vec<u64> {
    let k = tuple.first().map_or(0, |v| v.len());
    (0..k)
        .map(|j| tuple.iter().map(|v| v[j] as u64).sum())
        .collect()
}

/// `{Q(a) : a in A_1 x ... x A_M}`, as packed base-`(M+1)` numerals.
pub fn q_sumset(family: &BlockFamily, budget: &Budget) -> Result<BTreeSet<u64>> {
    check_budget(
        "sumset product",
        family.product_size(),
        budget.sumset as u128,
    )?;
    let m = family.m();
    let k = family.k;
    let mut acc: BTreeSet<u64> = BTreeSet::from([0]);
    for a in &family.sets {
        let lifted: Vec<u64> = a.iter().map(|&v| embed(v, m, k)).collect();
        acc = acc
            .iter()
            .flat_map(|&s| lifted.iter().map(move |&v| s + v))
            .collect();
    }
    Ok(acc)
}

/// Decrements component `j` (1-based), floored at zero.
pub fn h_j(p: &[u64], j: usize) -> Vec<u64> {
    let mut out = p.to_vec();
    out[j - 1] = out[j - 1].saturating_sub(1);
    out
}

fn h_binary(a: u32, j: usize) -> u32 {
    a & !(1 << (j - 1))
}

/// Moves every `a` with a one at `j` down to `a - e_j`, unless that vector
/// is already present. Preserves cardinality.
pub fn phi_j(a: &BTreeSet<u32>, j: usize) -> BTreeSet<u32> {
    let out: BTreeSet<u32> = a
        .iter()
        .map(|&v| {
            let h = h_binary(v, j);
            if a.contains(&h) {
                v
            } else {
                h
            }
        })
        .collect();
    assert_eq!(out.len(), a.len(), "compression must preserve cardinality");
    out
}

/// `phi^(j)(A) == A`.
pub fn is_invariant(a: &BTreeSet<u32>, j: usize) -> bool {
    phi_j(a, j) == *a
}

/// Applies `phi^(1)`, ..., `phi^(t)` to every set of the family.
pub fn compress_through(family: &BlockFamily, t: usize) -> BlockFamily {
    let sets = family
        .sets
        .iter()
        .map(|a| (1..=t).fold(a.clone(), |acc, j| phi_j(&acc, j)))
        .collect();
    BlockFamily { k: family.k, sets }
}

pub fn compress(family: &BlockFamily) -> BlockFamily {
    compress_through(family, family.k)
}

/// After compressing through stage `t`, every set is invariant under
/// `phi^(m)` for all `m <= t`.
pub fn check_invariance(family: &BlockFamily, t: usize) -> bool {
    let compressed = compress_through(family, t);
    compressed
        .sets
        .iter()
        .all(|a| (1..=t).all(|m| is_invariant(a, m)))
}

/// `|Q(U)|` never grows under any compression stage.
pub fn check_sumset_shrink(family: &BlockFamily, budget: &Budget) -> Result<bool> {
    let mut previous = q_sumset(family, budget)?.len();
    let mut current = family.clone();
    for j in 1..=family.k {
        current = BlockFamily {
            k: current.k,
            sets: current.sets.iter().map(|a| phi_j(a, j)).collect(),
        };
        let size = q_sumset(&current, budget)?.len();
        if size > previous {
            return Ok(false);
        }
        previous = size;
    }
    Ok(true)
}

/// For `V = compress(U)`: every `q <= p` (componentwise) with `p` in
/// `Q(V)` is itself in `Q(V)`. Checked over the whole grid `{0..M}^k`.
pub fn check_downward_closure(family: &BlockFamily, budget: &Budget) -> Result<bool> {
    let m = family.m();
    let k = family.k;
    let compressed = compress(family);
    let sums = q_sumset(&compressed, budget)?;
    let grid = (m as u128 + 1).saturating_pow(k as u32);
    check_budget("sum grid", grid, budget.sumset as u128)?;
    let unpacked: Vec<Vec<u64>> = sums.iter().map(|&p| unpack_sum(p, m, k)).collect();
    for g in 0..grid as u64 {
        let q = unpack_sum(g, m, k);
        let dominated = unpacked
            .iter()
            .any(|p| q.iter().zip(p).all(|(a, b)| a <= b));
        if dominated && !sums.contains(&g) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBound {
    pub lhs: u64,
    pub rhs: f64,
    pub holds: bool,
}

/// Minimum of `prod (1 + m_i)` over `0 <= m_i <= M` with
/// `sum m_i >= delta*M*k`, against `(M+1)^{delta*k}`.
pub fn product_min_bound(k: usize, m: usize, delta: f64, budget: &Budget) -> Result<ProductBound> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!(
            "delta must be in (0,1], got {delta}"
        )));
    }
    let grid = (m as u128 + 1).saturating_pow(k as u32);
    check_budget("product grid", grid, budget.sumset as u128)?;
    let threshold = delta * (m * k) as f64 - 1e-9;
    let lhs = (0..grid as u64)
        .map(|g| unpack_sum(g, m, k))
        .filter(|v| v.iter().sum::<u64>() as f64 >= threshold)
        .map(|v| v.iter().map(|&c| c + 1).product::<u64>())
        .min()
        .expect("the all-M point is always feasible");
    let rhs = ((m + 1) as f64).powf(delta * k as f64);
    Ok(ProductBound {
        lhs,
        rhs,
        holds: lhs as f64 >= rhs - 1e-9,
    })
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// The `y` in `[0, 1/2]` with `H(y) = (1 - 1/x)/2`, by bisection.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!(
            "gamma is defined for x >= 1, got {x}"
        )));
    }
    let target = 0.5 * (1.0 - 1.0 / x);
    if target <= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumsetBound {
    pub sumset_size: usize,
    pub rhs: f64,
    pub holds: bool,
}

/// `|Q(U)| >= (M+1)^{gamma(k/n) k}` for a family with `|A_i| >= 2^{k-n}`.
pub fn sumset_size_check(family: &BlockFamily, n: usize, budget: &Budget) -> Result<SumsetBound> {
    let k = family.k;
    if n == 0 || n >= k {
        return Err(Error::PreconditionViolated(format!(
            "need 0 < n < k, got n={n}, k={k}"
        )));
    }
    let min_size = 1usize << (k - n);
    if let Some(a) = family.sets.iter().find(|a| a.len() < min_size) {
        return Err(Error::PreconditionViolated(format!(
            "block set of size {} is below 2^(k-n) = {min_size}",
            a.len()
        )));
    }
    let sumset_size = q_sumset(family, budget)?.len();
    let g = gamma(k as f64 / n as f64)?;
    let rhs = ((family.m() + 1) as f64).powf(g * k as f64);
    Ok(SumsetBound {
        sumset_size,
        rhs,
        holds: sumset_size as f64 >= rhs - 1e-9,
    })
}

/// `sum_{j <= floor(delta k)} C(k, j)` against `2^{k H(delta)}`.
pub fn hamming_ball_bound(k: usize, delta: f64) -> (u64, f64, bool) {
    let top = ((delta * k as f64) + 1e-9).floor() as usize;
    let mut binom = 1u64;
    let mut lhs = 0u64;
    for j in 0..=top.min(k) {
        if j > 0 {
            binom = binom * (k - j + 1) as u64 / j as u64;
        }
        lhs += binom;
    }
    let rhs = 2f64.powf(k as f64 * binary_entropy(delta));
    (lhs, rhs, lhs as f64 <= rhs * (1.0 + 1e-12))
}

/// Random family with `k <= max_k`, `n < k`, `M <= max_m` and every
/// `|A_i| >= 2^{k-n}`. Returns the family and its `n`.
pub fn random_family<R: Rng>(rng: &mut R, max_k: usize, max_m: usize) -> (BlockFamily, usize) {
    let k = rng.gen_range(2..=max_k.max(2));
    let n = rng.gen_range(1..k);
    let m = rng.gen_range(1..=max_m.max(1));
    let all: Vec<u32> = (0..1u32 << k).collect();
    let sets = (0..m)
        .map(|_| {
            let size = rng.gen_range(1usize << (k - n)..=1usize << k);
            all.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    (BlockFamily { k, sets }, n)
}

/// Counts from one run of [`appendix_suite`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AppendixSummary {
    pub seed: u64,
    pub families: usize,
    pub invariance: usize,
    pub shrink: usize,
    pub downward: usize,
    pub sumset_bound: usize,
    pub product_cases: usize,
    pub product_holds: usize,
    pub hamming_cases: usize,
    pub hamming_holds: usize,
}

impl AppendixSummary {
    pub fn all_hold(&self) -> bool {
        [
            self.invariance,
            self.shrink,
            self.downward,
            self.sumset_bound,
        ]
        .iter()
        .all(|&c| c == self.families)
            && self.product_holds == self.product_cases
            && self.hamming_holds == self.hamming_cases
    }
}

/// Runs every sumset check on `families` random families (`k <= 4`,
/// `M <= 3`), the product bound for `k, M <= 3` and
/// `delta in {1/4, 1/3, 1/2, 1}`, and the Hamming ball count for `k <= 20`.
pub fn appendix_suite(seed: u64, families: usize, budget: &Budget) -> Result<AppendixSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = AppendixSummary {
        seed,
        families,
        ..Default::default()
    };
    for _ in 0..families {
        let (family, n) = random_family(&mut rng, 4, 3);
        out.invariance += check_invariance(&family, family.k) as usize;
        out.shrink += check_sumset_shrink(&family, budget)? as usize;
        out.downward += check_downward_closure(&family, budget)? as usize;
        out.sumset_bound += sumset_size_check(&family, n, budget)?.holds as usize;
    }
    for k in 1..=3 {
        for m in 1..=3 {
            for delta in [0.25, 1.0 / 3.0, 0.5, 1.0] {
                out.product_cases += 1;
                out.product_holds += product_min_bound(k, m, delta, budget)?.holds as usize;
            }
        }
    }
    for k in 1..=20 {
        for step in 1..=10 {
            out.hamming_cases += 1;
            out.hamming_holds += hamming_ball_bound(k, step as f64 * 0.05).2 as usize;
        }
    }
    Ok(out)
}
