//! Uniform random pair partitions of `{0, ..., 2n-1}` and their crossing
//! numbers, plus an exhaustive enumerator for small `n`.

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Exhaustive enumeration is capped here; `(2*8 - 1)!! = 2_027_025` pairings.
pub const MAX_ENUMERATION_PAIRS: u64 = 8;

/// Crossings between stored chords `(a, b)` with `a < b`: a pair of chords
/// crosses when `a_1 < a_2 < b_1 < b_2`.
fn count_crossings(chords: &[(u32, u32)]) -> u64 {
    let mut count = 0u64;
    for (i, &(a1, b1)) in chords.iter().enumerate() {
        for &(a2, b2) in &chords[i + 1..] {
            let (lo, hi) = if a1 < a2 { ((a1, b1), (a2, b2)) } else { ((a2, b2), (a1, b1)) };
            if lo.0 < hi.0 && hi.0 < lo.1 && lo.1 < hi.1 {
                count += 1;
            }
        }
    }
    count
}

/// Draws a uniform pair partition of `{0, ..., 2n-1}` by repeatedly matching
/// one free element with a uniformly chosen free partner. Chords come back as
/// `(min, max)` pairs.
pub fn sample_pair_partition(n: u64, rng: &mut SplitMix64) -> Vec<(u32, u32)> {
    let mut free: Vec<u32> = (0..2 * n as u32).collect();
    let mut chords: Vec<(u32, u32)> = Vec::with_capacity(n as usize);
    while free.len() > 1 {
        let partner_idx = 1 + rng.next_below(free.len() as u64 - 1) as usize;
        let a = free[0];
        let b = free[partner_idx];
        chords.push((a.min(b), a.max(b)));
        free.swap_remove(partner_idx);
        free.swap_remove(0);
    }
    chords
}

/// Number of crossings of a uniform random pair partition.
pub fn sample_pair_partition_crossings(n: u64, rng: &mut SplitMix64) -> u64 {
    if n == 0 {
        return 0;
    }
    count_crossings(&sample_pair_partition(n, rng))
}

fn enumerate_rec(
    free: &mut Vec<u32>,
    chords: &mut Vec<(u32, u32)>,
    crossings_so_far: u64,
    out: &mut BTreeMap<u64, u64>,
) {
    if free.is_empty() {
        *out.entry(crossings_so_far).or_insert(0) += 1;
        return;
    }
    let a = free[0];
    for idx in 1..free.len() {
        let b = free[idx];
        // New chord (a, b) with a < b; count crossings against existing chords.
        let mut added = 0u64;
        for &(c, d) in chords.iter() {
            if (c < a && a < d && d < b) || (a < c && c < b && b < d) {
                added += 1;
            }
        }
        let mut rest: Vec<u32> = Vec::with_capacity(free.len() - 2);
        for (i, &v) in free.iter().enumerate() {
            if i != 0 && i != idx {
                rest.push(v);
            }
        }
        chords.push((a, b));
        enumerate_rec(&mut rest, chords, crossings_so_far + added, out);
        chords.pop();
    }
}

/// Exact crossing-number distribution over all `(2n-1)!!` pair partitions:
/// a map from crossing count to the number of pairings attaining it.
pub fn enumerate_pair_partitions_crossings(n: u64) -> Result<BTreeMap<u64, u64>> {
    if n > MAX_ENUMERATION_PAIRS {
        return Err(Error::InvalidArgument(format!(
            "enumeration is limited to n <= {MAX_ENUMERATION_PAIRS}, got {n}"
        )));
    }
    let mut out = BTreeMap::new();
    if n == 0 {
        out.insert(0, 1);
        return Ok(out);
    }
    let mut free: Vec<u32> = (0..2 * n as u32).collect();
    let mut chords = Vec::with_capacity(n as usize);
    enumerate_rec(&mut free, &mut chords, 0, &mut out);
    Ok(out)
}

/// Mean and variance of a distribution returned by the enumerator.
pub fn distribution_mean_variance(dist: &BTreeMap<u64, u64>) -> (f64, f64) {
    let total: u64 = dist.values().sum();
    let tf = total as f64;
    let mean = dist.iter().map(|(&v, &c)| v as f64 * c as f64).sum::<f64>() / tf;
    let var = dist
        .iter()
        .map(|(&v, &c)| (v as f64 - mean).powi(2) * c as f64)
        .sum::<f64>()
        / tf;
    (mean, var)
}
