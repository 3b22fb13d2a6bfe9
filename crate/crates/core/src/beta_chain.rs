//! The β → (η → β)* → α chain.
//!
//! Starting from β = 4k+2, `C` halves to an odd value. When `k` is odd that
//! value is an η, which climbs back to a β; the alternation continues until
//! the chain lands on an α = 4h+1 after `2m+1` steps. The exponents satisfy
//!
//! ```text
//! (k + 1) · 3^m = (2h + 1) · 2^m
//! ```
//!
//! so `m` is the 2-adic valuation of `k+1` and `2h+1` is the odd part of
//! `k+1` times `3^m`.

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::dynamics::{orbit, CollatzMap};
use crate::nat::{v2, Nat};
use crate::residue::ResidueClass;
use crate::sweep::{check_range, Counterexample, SweepReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaChainSolution {
    /// Index of the starting β = 4k+2.
    pub k: BigUint,
    /// The chain takes `2m+1` steps of `C`.
    pub m: u64,
    /// Index of the landing α = 4h+1.
    pub h: BigUint,
}

impl BetaChainSolution {
    pub fn beta(&self) -> Nat {
        Nat::new((&self.k << 2u32) + 2u32).expect("4k+2 > 0")
    }

    pub fn alpha(&self) -> Nat {
        Nat::new((&self.h << 2u32) + 1u32).expect("4h+1 > 0")
    }

    pub fn chain_steps(&self) -> u64 {
        2 * self.m + 1
    }

    /// `(k+1)·3^m == (2h+1)·2^m` in exact integers.
    pub fn satisfies_chain_equation(&self) -> bool {
        let lhs = (&self.k + 1u32) * BigUint::from(3u32).pow(self.m);
        let rhs = ((&self.h << 1u32) + 1u32) << self.m;
        lhs == rhs
    }
}

pub fn solve_beta_chain(k: &BigUint) -> BetaChainSolution {
    let k_plus_1 = k + 1u32;
    let m = v2(&k_plus_1).expect("k+1 > 0");
    let odd = &k_plus_1 >> m;
    let h = (odd * BigUint::from(3u32).pow(m) - 1u32) >> 1u32;
    BetaChainSolution { k: k.clone(), m, h }
}

/// Same result as [`solve_beta_chain`], reached by the case ladder:
/// `k` even gives `m = 0`; otherwise put `t = (k+1)/2`, and `t` odd gives
/// `m = 1`; otherwise `w = t/2`, and so on.
///
/// On rung `r` the equation reads `q·3^m = (2h+1)·2^(m-r)` with
/// `q = (k+1)/2^r`. Once `q` is odd the right side must be odd as well,
/// which pins `m = r` and `2h+1 = q·3^r`. Each rung halves `q`, so the
/// ladder has at most `bits(k+1)` rungs.
pub fn solve_beta_chain_ladder(k: &BigUint) -> BetaChainSolution {
    let mut q = k + 1u32;
    let rungs = q.bits();
    for rung in 0..=rungs {
        if q.is_odd() {
            let two_h_plus_1 = &q * BigUint::from(3u32).pow(rung);
            return BetaChainSolution {
                k: k.clone(),
                m: rung,
                h: two_h_plus_1 >> 1u32,
            };
        }
        q >>= 1u32;
    }
    unreachable!("k+1 > 0 has an odd part within bits(k+1) halvings")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub solution: BetaChainSolution,
    /// `2m+2` values: the β, the intermediate values, and where iteration landed.
    pub path: Vec<Nat>,
    pub classes: Vec<ResidueClass>,
    pub lands_on_alpha: bool,
    pub alternates: bool,
}

impl ChainCheck {
    pub fn passed(&self) -> bool {
        self.lands_on_alpha && self.alternates
    }
}

/// Iterates `C` from `4k+2` for exactly `2m+1` steps and compares against
/// the solved chain: the last value must be `4h+1` and the classes must read
/// β, η, β, …, β, α.
pub fn verify_beta_chain(k: &BigUint) -> ChainCheck {
    let solution = solve_beta_chain(k);
    let path = orbit(&solution.beta(), CollatzMap::C, solution.chain_steps());
    let classes: Vec<ResidueClass> = path
        .iter()
        .map(|v| ResidueClass::of_mod4(v.mod4()))
        .collect();
    let lands_on_alpha = path.last() == Some(&solution.alpha());
    let last = classes.len() - 1;
    let alternates = classes.iter().enumerate().all(|(i, &c)| {
        c == if i == last {
            ResidueClass::Alpha
        } else if i % 2 == 0 {
            ResidueClass::Beta
        } else {
            ResidueClass::Eta
        }
    });
    ChainCheck {
        solution,
        path,
        classes,
        lands_on_alpha,
        alternates,
    }
}

/// The landing value written as a geometric sum:
/// `(β/2)·(3/2)^m + Σ_{i=1..m} 3^(i-1)/2^i` with β = 4k+2.
pub fn chain_landing_series(k: &BigUint, m: u64) -> BigRational {
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let half_beta = BigRational::from_integer(BigInt::from((k << 1u32) + 1u32));
    let mut total = half_beta * three_halves.clone().pow(m as i32);
    for i in 1..=m {
        total += BigRational::new(BigInt::from(3).pow(i - 1), BigInt::one() << i);
    }
    total
}

/// `(2k+2)·(3/2)^m - 1`, the telescoped form of [`chain_landing_series`].
pub fn chain_landing_closed(k: &BigUint, m: u64) -> BigRational {
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    BigRational::from_integer(BigInt::from((k + 1u32) << 1u32)) * three_halves.pow(m as i32)
        - BigRational::one()
}

/// For each `k` in `range`: both solvers agree, the chain equation holds,
/// and direct iteration confirms the landing point and class alternation.
pub fn verify_beta_chain_range(range: RangeInclusive<u64>) -> SweepReport {
    check_range(range, |k| {
        let kb = BigUint::from(k);
        let fast = solve_beta_chain(&kb);
        let ladder = solve_beta_chain_ladder(&kb);
        if fast != ladder {
            return Some(Counterexample::new(
                k,
                format!("ladder (m={}, h={})", ladder.m, ladder.h),
                format!("valuation (m={}, h={})", fast.m, fast.h),
            ));
        }
        if !fast.satisfies_chain_equation() {
            return Some(Counterexample::new(
                k,
                "(k+1)·3^m = (2h+1)·2^m",
                format!("fails for m={}, h={}", fast.m, fast.h),
            ));
        }
        let check = verify_beta_chain(&kb);
        (!check.passed()).then(|| {
            let pattern: String = check.classes.iter().map(|c| c.symbol()).collect();
            Counterexample::new(
                k,
                format!("lands on {} via β/η alternation", fast.alpha()),
                format!("{} via {pattern}", check.path[check.path.len() - 1]),
            )
        })
    })
}
