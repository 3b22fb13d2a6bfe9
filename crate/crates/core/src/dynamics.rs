//! The Collatz maps and the brute-force quantities derived from them.
//!
//! Everything here is computed by plain iteration. The symbolic modules
//! (residue classes, β-chains, blocks, polylines) are all checked against
//! these functions.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nat::Nat;
use crate::sweep::{check_range, Counterexample, SweepReport};

pub const DEFAULT_STEP_LIMIT: u64 = 100_000;

// Largest memo table the convergence sweep allocates (entries, 4 bytes each).
const CACHE_CAP: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollatzMap {
    /// z/2 for even z, 3z+1 for odd z.
    C,
    /// z/2 for even z, (3z+1)/2 for odd z.
    T,
}

impl CollatzMap {
    pub fn apply(self, z: &Nat) -> Nat {
        match self {
            CollatzMap::C => step_c(z),
            CollatzMap::T => step_t(z),
        }
    }
}

pub fn step_c(z: &Nat) -> Nat {
    let v = z.value();
    if v.is_even() {
        Nat::from_nonzero(v >> 1u32)
    } else {
        Nat::from_nonzero(v * 3u32 + 1u32)
    }
}

pub fn step_t(z: &Nat) -> Nat {
    let v = z.value();
    if v.is_even() {
        Nat::from_nonzero(v >> 1u32)
    } else {
        Nat::from_nonzero((v * 3u32 + 1u32) >> 1u32)
    }
}

/// `C` on machine words; `None` when `3n+1` would overflow.
#[inline]
pub fn step_c_u64(n: u64) -> Option<u64> {
    if n & 1 == 0 {
        Some(n >> 1)
    } else {
        n.checked_mul(3)?.checked_add(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub start: Nat,
    pub map: CollatzMap,
    /// `values[0] == start`; ends at the first 1 when `reached_one`.
    pub values: Vec<Nat>,
    pub reached_one: bool,
    pub steps: u64,
}

/// Iterates `map` from `z` until 1 is reached.
///
/// Fails with [`Error::LimitExceeded`] when more than `step_limit`
/// applications would be needed.
pub fn trajectory(z: &Nat, map: CollatzMap, step_limit: u64) -> Result<Trajectory> {
    let mut values = vec![z.clone()];
    let mut steps = 0;
    while !values[values.len() - 1].is_one() {
        if steps == step_limit {
            return Err(limit_exceeded(z, step_limit));
        }
        let next = map.apply(&values[values.len() - 1]);
        values.push(next);
        steps += 1;
    }
    Ok(Trajectory {
        start: z.clone(),
        map,
        values,
        reached_one: true,
        steps,
    })
}

/// Exactly `steps` applications of `map`, without stopping at 1.
/// The result has `steps + 1` entries.
pub fn orbit(z: &Nat, map: CollatzMap, steps: u64) -> Vec<Nat> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(z.clone());
    for _ in 0..steps {
        let next = map.apply(&out[out.len() - 1]);
        out.push(next);
    }
    out
}

/// Number of `C` steps needed to reach 1.
pub fn delay(z: &Nat, step_limit: u64) -> Result<u64> {
    let found = match z.to_u64() {
        Some(n) => delay_with_lookup(n, step_limit, |_| None),
        None => steps_to_one_big(z.value().clone(), step_limit),
    };
    found.ok_or_else(|| limit_exceeded(z, step_limit))
}

/// Least `j >= 1` with `C^j(z) < z`. Undefined for `z = 1`.
pub fn glide(z: &Nat, step_limit: u64) -> Result<u64> {
    if z.is_one() {
        return Err(Error::Domain(
            "glide is undefined for 1: no value below 1 is reachable".into(),
        ));
    }
    let found = match z.to_u64() {
        Some(n) => glide_u64(n, step_limit),
        None => glide_big(z.value(), z.value().clone(), 0, step_limit),
    };
    found.ok_or_else(|| limit_exceeded(z, step_limit))
}

/// All `p` with `C(p) = z`: always `2z`, plus `(z-1)/3` when that is a positive odd integer.
pub fn preimages_c(z: &Nat) -> Vec<Nat> {
    let v = z.value();
    let mut out = vec![Nat::from_nonzero(v << 1u32)];
    if v > &BigUint::one() {
        let (q, r) = (v - 1u32).div_rem(&BigUint::from(3u32));
        if r == BigUint::ZERO && q.is_odd() {
            out.push(Nat::from_nonzero(q));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub value: Nat,
    pub depth: u64,
    /// `None` only for the root.
    pub parent: Option<Nat>,
}

/// Breadth-first expansion of the preimage relation from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardTree {
    pub root: Nat,
    pub depth: u64,
    /// In breadth-first order; within a level, in the order preimages were generated.
    pub nodes: Vec<TreeNode>,
}

impl BackwardTree {
    pub fn depth_map(&self) -> HashMap<Nat, u64> {
        self.nodes
            .iter()
            .map(|n| (n.value.clone(), n.depth))
            .collect()
    }

    pub fn level(&self, depth: u64) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(move |n| n.depth == depth)
    }
}

/// Builds the tree of every value whose delay is at most `depth`.
///
/// The preimage 1 of 4 is dropped so the 1 → 4 → 2 → 1 loop does not
/// feed back into the tree.
pub fn backward_tree(depth: u64) -> BackwardTree {
    let root = Nat::one();
    let four = Nat::from_nonzero(BigUint::from(4u32));
    let mut nodes = vec![TreeNode {
        value: root.clone(),
        depth: 0,
        parent: None,
    }];
    let mut frontier = vec![root.clone()];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for v in &frontier {
            for p in preimages_c(v) {
                if *v == four && p.is_one() {
                    continue;
                }
                nodes.push(TreeNode {
                    value: p.clone(),
                    depth: d,
                    parent: Some(v.clone()),
                });
                next.push(p);
            }
        }
        frontier = next;
    }
    BackwardTree { root, depth, nodes }
}

/// Delay of `n` if it is at most `bound`, found by forward iteration.
///
/// A value `v` needs at least `log2(v)` halvings to reach 1, so the walk
/// is abandoned once `v > 2^(bound - j)` after `j` steps.
pub fn bounded_delay(n: u64, bound: u64) -> Option<u64> {
    assert!(bound < 64, "bound must be below 64");
    let mut v = n;
    let mut j = 0;
    loop {
        if v == 1 {
            return Some(j);
        }
        if j == bound || v > 1u64 << (bound - j) {
            return None;
        }
        v = step_c_u64(v)?;
        j += 1;
    }
}

/// Every `n <= 2^bound` with `delay(n) <= bound`, as `(n, delay)` pairs in increasing `n`.
///
/// No value above `2^bound` can have delay at most `bound`, so this is the
/// complete set.
pub fn forward_delay_sweep(bound: u64) -> Vec<(u64, u64)> {
    assert!(bound < 63, "bound must be below 63");
    (1..=1u64 << bound)
        .into_par_iter()
        .filter_map(|n| bounded_delay(n, bound).map(|d| (n, d)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecordKind {
    Delay,
    Glide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecordEntry {
    pub n: u64,
    pub value: u64,
}

/// Record holders: each entry beats every smaller starting value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordTable {
    pub kind: RecordKind,
    pub entries: Vec<RecordEntry>,
}

/// Scans `2..=n_max` and keeps each `n` whose delay (or glide) strictly
/// exceeds that of every smaller `n` in the scan.
///
/// Delays are memoised: iteration from `n` stops at the first value below
/// `n`, whose delay is already known.
pub fn records_sweep(n_max: u64, kind: RecordKind, step_limit: u64) -> Result<RecordTable> {
    if n_max < 2 {
        return Err(Error::Domain(format!(
            "records need n_max >= 2, got {n_max}"
        )));
    }
    let mut entries = Vec::new();
    let mut best: Option<u64> = None;
    let mut push = |n: u64, value: u64| {
        if best.is_none_or(|b| value > b) {
            best = Some(value);
            entries.push(RecordEntry { n, value });
        }
    };
    match kind {
        RecordKind::Delay => {
            // table[v] = delay(v) + 1, 0 when unknown
            let len = n_max.min(CACHE_CAP) as usize + 1;
            let mut table = vec![0u32; len];
            table[1] = 1;
            for n in 2..=n_max {
                let d = delay_with_lookup(n, step_limit, |v| {
                    table
                        .get(v as usize)
                        .filter(|&&t| t != 0)
                        .map(|&t| u64::from(t) - 1)
                })
                .ok_or_else(|| limit_exceeded_u64(n, step_limit))?;
                if let Some(slot) = table.get_mut(n as usize) {
                    *slot = u32::try_from(d + 1).unwrap_or(0);
                }
                push(n, d);
            }
        }
        RecordKind::Glide => {
            for n in 2..=n_max {
                let g =
                    glide_u64(n, step_limit).ok_or_else(|| limit_exceeded_u64(n, step_limit))?;
                push(n, g);
            }
        }
    }
    Ok(RecordTable { kind, entries })
}

/// Checks that every `n` in `range` reaches 1 under `C` within `step_limit` steps.
///
/// Workers share a memo of known delays. A value missing from the memo
/// (not yet computed by another worker) is iterated further instead, so
/// the result does not depend on scheduling.
pub fn convergence_sweep(range: RangeInclusive<u64>, step_limit: u64) -> SweepReport {
    let len = if range.is_empty() {
        2
    } else {
        (*range.end()).clamp(1, CACHE_CAP) as usize + 1
    };
    let cache: Vec<AtomicU32> = (0..len).map(|_| AtomicU32::new(0)).collect();
    cache[1].store(1, Ordering::Relaxed);
    let lookup = |v: u64| {
        cache
            .get(v as usize)
            .map(|c| c.load(Ordering::Relaxed))
            .filter(|&t| t != 0)
            .map(|t| u64::from(t) - 1)
    };
    check_range(range, |n| {
        if n == 0 {
            return Some(Counterexample::new(0, "a positive integer", 0));
        }
        match delay_with_lookup(n, step_limit, lookup) {
            Some(d) => {
                if let (Some(slot), Ok(t)) = (cache.get(n as usize), u32::try_from(d + 1)) {
                    slot.store(t, Ordering::Relaxed);
                }
                None
            }
            None => Some(Counterexample::new(
                n,
                format!("reaches 1 within {step_limit} C-steps"),
                format!("no 1 after {step_limit} steps"),
            )),
        }
    })
}

fn limit_exceeded(z: &Nat, limit: u64) -> Error {
    Error::LimitExceeded {
        start: z.value().clone(),
        limit,
    }
}

fn limit_exceeded_u64(n: u64, limit: u64) -> Error {
    Error::LimitExceeded {
        start: BigUint::from(n),
        limit,
    }
}

/// Delay of `n`, consulting `lookup` for already-known delays along the way.
/// `None` if the delay exceeds `limit`.
fn delay_with_lookup(n: u64, limit: u64, lookup: impl Fn(u64) -> Option<u64>) -> Option<u64> {
    let mut v = n;
    let mut j = 0u64;
    loop {
        if v == 1 {
            return Some(j);
        }
        if let Some(d) = lookup(v) {
            let total = j + d;
            return (total <= limit).then_some(total);
        }
        if j == limit {
            return None;
        }
        match step_c_u64(v) {
            Some(w) => v = w,
            None => {
                let big = BigUint::from(v) * 3u32 + 1u32;
                return steps_to_one_big(big, limit - j - 1).map(|r| j + 1 + r);
            }
        }
        j += 1;
    }
}

fn steps_to_one_big(mut v: BigUint, budget: u64) -> Option<u64> {
    let mut j = 0;
    while !v.is_one() {
        if j == budget {
            return None;
        }
        v = if v.is_even() {
            v >> 1u32
        } else {
            v * 3u32 + 1u32
        };
        j += 1;
    }
    Some(j)
}

fn glide_u64(n: u64, limit: u64) -> Option<u64> {
    let mut v = n;
    for j in 1..=limit {
        match step_c_u64(v) {
            Some(w) => v = w,
            None => {
                let big = BigUint::from(v) * 3u32 + 1u32;
                return glide_big(&BigUint::from(n), big, j, limit);
            }
        }
        if v < n {
            return Some(j);
        }
    }
    None
}

// `v` is `C^taken(start)` and is not below `start`.
fn glide_big(start: &BigUint, mut v: BigUint, mut taken: u64, limit: u64) -> Option<u64> {
    while taken < limit {
        v = if v.is_even() {
            v >> 1u32
        } else {
            v * 3u32 + 1u32
        };
        taken += 1;
        if &v < start {
            return Some(taken);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::try_from(v).unwrap()
    }

    fn naive_delay(mut v: u64) -> u64 {
        let mut j = 0;
        while v != 1 {
            v = if v.is_multiple_of(2) {
                v / 2
            } else {
                3 * v + 1
            };
            j += 1;
        }
        j
    }

    #[test]
    fn step_examples() {
        assert_eq!(step_c(&n(1)), n(4));
        assert_eq!(step_c(&n(2)), n(1));
        assert_eq!(step_c(&n(27)), n(82));
        assert_eq!(step_t(&n(1)), n(2));
        assert_eq!(step_t(&n(10)), n(5));
        assert_eq!(step_t(&n(7)), n(11));
    }

    #[test]
    fn trajectory_examples() {
        let t = trajectory(&n(6), CollatzMap::C, 100).unwrap();
        let vals: Vec<u64> = t.values.iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(vals, [6, 3, 10, 5, 16, 8, 4, 2, 1]);
        assert_eq!(t.steps, 8);
        assert!(t.reached_one);

        let t = trajectory(&n(1), CollatzMap::C, 10).unwrap();
        assert_eq!(t.values, [n(1)]);
        assert_eq!(t.steps, 0);

        assert_eq!(
            trajectory(&n(27), CollatzMap::C, 50),
            Err(Error::LimitExceeded {
                start: BigUint::from(27u32),
                limit: 50
            })
        );
    }

    #[test]
    fn t_trajectory_is_shorter() {
        let t = trajectory(&n(7), CollatzMap::T, 100).unwrap();
        let vals: Vec<u64> = t.values.iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(vals, [7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1]);
    }

    #[test]
    fn orbit_passes_through_one() {
        let o = orbit(&n(2), CollatzMap::C, 4);
        assert_eq!(o, [n(2), n(1), n(4), n(2), n(1)]);
    }

    #[test]
    fn delay_examples() {
        assert_eq!(delay(&n(1), 10), Ok(0));
        assert_eq!(delay(&n(2), 10), Ok(1));
        assert_eq!(delay(&n(27), DEFAULT_STEP_LIMIT), Ok(111));
        assert_eq!(naive_delay(27), 111);
        assert!(matches!(
            delay(&n(27), 110),
            Err(Error::LimitExceeded { .. })
        ));
        assert_eq!(delay(&n(27), 111), Ok(111));
    }

    #[test]
    fn delay_survives_u64_overflow() {
        // 2^64 - 1 is odd; 3n+1 overflows on the first step.
        let big = n(u64::MAX);
        let expected = steps_to_one_big(BigUint::from(u64::MAX), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(delay(&big, DEFAULT_STEP_LIMIT), Ok(expected));
        let huge: Nat = "340282366920938463463374607431768211457".parse().unwrap();
        let d = delay(&huge, DEFAULT_STEP_LIMIT).unwrap();
        let t = trajectory(&huge, CollatzMap::C, DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(t.steps, d);
    }

    #[test]
    fn glide_examples() {
        assert_eq!(glide(&n(2), 10), Ok(1));
        // 3 → 10 → 5 → 16 → 8 → 4 → 2
        assert_eq!(glide(&n(3), 10), Ok(6));
        assert!(matches!(glide(&n(1), 10), Err(Error::Domain(_))));
        assert_eq!(glide(&n(27), 1000), Ok(96));
        assert!(matches!(
            glide(&n(27), 95),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn glide_survives_u64_overflow() {
        let big = n(u64::MAX);
        let g = glide(&big, DEFAULT_STEP_LIMIT).unwrap();
        let o = orbit(&big, CollatzMap::C, g);
        assert!(o[g as usize] < big);
        assert!(o[1..g as usize].iter().all(|v| *v >= big));
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(preimages_c(&n(16)), [n(32), n(5)]);
        assert_eq!(preimages_c(&n(1)), [n(2)]);
        assert_eq!(preimages_c(&n(7)), [n(14)]);
        assert_eq!(preimages_c(&n(4)), [n(8), n(1)]);
    }

    #[test]
    fn tree_examples() {
        let t = backward_tree(0);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].value, n(1));

        let t = backward_tree(2);
        let got: Vec<(u64, u64)> = t
            .nodes
            .iter()
            .map(|x| (x.value.to_u64().unwrap(), x.depth))
            .collect();
        assert_eq!(got, [(1, 0), (2, 1), (4, 2)]);

        let t = backward_tree(5);
        let five = t.nodes.iter().find(|x| x.value == n(5)).unwrap();
        assert_eq!(five.depth, 5);
        assert_eq!(five.parent, Some(n(16)));
    }

    #[test]
    fn tree_has_no_duplicates() {
        let t = backward_tree(25);
        assert_eq!(t.depth_map().len(), t.nodes.len());
    }

    #[test]
    fn bounded_delay_agrees_with_delay() {
        for v in 1..5000u64 {
            let d = naive_delay(v);
            for bound in [5u64, 20, 40] {
                let expect = (d <= bound).then_some(d);
                assert_eq!(bounded_delay(v, bound), expect, "n={v} bound={bound}");
            }
        }
    }

    #[test]
    fn forward_sweep_small() {
        let got = forward_delay_sweep(5);
        assert_eq!(
            got,
            [(1, 0), (2, 1), (4, 2), (5, 5), (8, 3), (16, 4), (32, 5)]
        );
    }

    #[test]
    fn record_examples() {
        let r = records_sweep(2, RecordKind::Delay, 100).unwrap();
        assert_eq!(r.entries, [RecordEntry { n: 2, value: 1 }]);

        let r = records_sweep(30, RecordKind::Delay, DEFAULT_STEP_LIMIT).unwrap();
        assert!(r.entries.contains(&RecordEntry { n: 27, value: 111 }));

        let r = records_sweep(10, RecordKind::Glide, 100).unwrap();
        assert_eq!(r.entries[0], RecordEntry { n: 2, value: 1 });

        assert!(records_sweep(1, RecordKind::Delay, 100).is_err());
    }

    #[test]
    fn delay_records_match_naive_scan() {
        let r = records_sweep(5000, RecordKind::Delay, DEFAULT_STEP_LIMIT).unwrap();
        let mut expect = Vec::new();
        let mut best = None;
        for v in 2..=5000u64 {
            let d = naive_delay(v);
            if best.is_none_or(|b| d > b) {
                best = Some(d);
                expect.push(RecordEntry { n: v, value: d });
            }
        }
        assert_eq!(r.entries, expect);
        assert_eq!(
            r.entries.iter().map(|e| e.n).take(9).collect::<Vec<_>>(),
            [2, 3, 6, 7, 9, 18, 25, 27, 54]
        );
    }

    #[test]
    fn records_surface_limit() {
        assert!(matches!(
            records_sweep(30, RecordKind::Delay, 100),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn convergence_small() {
        let r = convergence_sweep(1..=10_000, DEFAULT_STEP_LIMIT);
        assert_eq!(r.checked, 10_000);
        assert!(r.passed());

        let r = convergence_sweep(20..=30, 100);
        let bad: Vec<u64> = r.counterexamples.iter().map(|c| c.input).collect();
        let expect: Vec<u64> = (20..=30).filter(|&v| naive_delay(v) > 100).collect();
        assert_eq!(bad, expect);
        assert!(bad.contains(&27));
    }
}
