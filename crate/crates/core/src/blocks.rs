//! Decomposition of `C`-trajectories into β → α → γ → β blocks.
//!
//! A block starts at β = 4k+2, follows the β-chain to α = 4h+1, climbs
//! once to γ = 3α+1 = 4g+4 (so `g = 3h`), then halves `e >= 1` times to the
//! next β = 4k'+2. Across a block the β index obeys the affine recurrence
//!
//! ```text
//! k' = k·3^(m+1)/2^(e+m+1) + (3^(m+1) - 2^m - 2^(e+m))/2^(e+m+1)
//! ```
//!
//! and `n` blocks compose into a product/sum closed form in `(k⁰, mⁱ, eⁱ)`.

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::beta_chain::{solve_beta_chain, BetaChainSolution};
use crate::dynamics::{orbit, step_c, CollatzMap};
use crate::error::{Error, Result};
use crate::nat::Nat;
use crate::residue::ResidueClass;
use crate::sweep::{check_range, Counterexample, SweepReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub k_in: BigUint,
    pub m: u64,
    pub h: BigUint,
    pub g: BigUint,
    pub e: u64,
    pub k_out: BigUint,
}

impl Block {
    pub fn beta_in(&self) -> Nat {
        beta_of(&self.k_in)
    }

    pub fn beta_out(&self) -> Nat {
        beta_of(&self.k_out)
    }

    /// `C`-steps from `beta_in` to `beta_out`.
    pub fn steps(&self) -> u64 {
        2 * self.m + 2 + self.e
    }

    /// The values visited from `beta_in` up to, not including, `beta_out`,
    /// rebuilt from the block parameters alone.
    ///
    /// Along the chain the j-th β has index `(k+1)·(3/2)^j - 1` and is
    /// followed by the η at half its value.
    pub fn path(&self) -> Vec<Nat> {
        let mut out = Vec::with_capacity(self.steps() as usize);
        let k_plus_1 = &self.k_in + 1u32;
        for j in 0..self.m {
            let idx_plus_1 = (&k_plus_1 * BigUint::from(3u32).pow(j)) >> j;
            let beta = (idx_plus_1 << 2u32) - 2u32;
            let eta = &beta >> 1u32;
            out.push(Nat::from_nonzero(beta));
            out.push(Nat::from_nonzero(eta));
        }
        let alpha = (&self.h << 2u32) + 1u32;
        out.push(Nat::from_nonzero(&alpha << 1u32));
        out.push(Nat::from_nonzero(alpha));
        let gamma = (&self.g << 2u32) + 4u32;
        for i in 0..self.e {
            out.push(Nat::from_nonzero(&gamma >> i));
        }
        out
    }

    /// The defining identities: the chain equation for `(k_in, m, h)`,
    /// `g = 3h`, `4·k_out + 2 = (4g + 4)/2^e` exactly, and `e >= 1`.
    pub fn is_consistent(&self) -> bool {
        let chain = BetaChainSolution {
            k: self.k_in.clone(),
            m: self.m,
            h: self.h.clone(),
        };
        let gamma = (&self.g << 2u32) + 4u32;
        let beta_out = (&self.k_out << 2u32) + 2u32;
        self.e >= 1
            && chain.satisfies_chain_equation()
            && self.g == &self.h * 3u32
            && (beta_out << self.e) == gamma
    }
}

fn beta_of(k: &BigUint) -> Nat {
    Nat::from_nonzero((k << 2u32) + 2u32)
}

/// The block entered at β = 4·k_in + 2.
pub fn next_block(k_in: &BigUint) -> Block {
    let chain = solve_beta_chain(k_in);
    let g = &chain.h * 3u32;
    let mut v = (&g << 2u32) + 4u32;
    let mut e = 0;
    // halve until the value is ≡ 2 (mod 4)
    loop {
        v >>= 1u32;
        e += 1;
        if v.is_even() && !(&v >> 1u32).is_even() {
            break;
        }
    }
    Block {
        k_in: k_in.clone(),
        m: chain.m,
        h: chain.h,
        g,
        e,
        k_out: v >> 2u32,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSequence {
    pub blocks: Vec<Block>,
}

impl BlockSequence {
    /// `k⁰, k¹, …, kⁿ`: one more entry than there are blocks.
    pub fn k_seq(&self) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = self.blocks.iter().map(|b| b.k_in.clone()).collect();
        if let Some(last) = self.blocks.last() {
            out.push(last.k_out.clone());
        }
        out
    }

    pub fn m_seq(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.m).collect()
    }

    pub fn e_seq(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.e).collect()
    }

    /// Concatenated block paths followed by the final β.
    pub fn path(&self) -> Vec<Nat> {
        let mut out: Vec<Nat> = self.blocks.iter().flat_map(Block::path).collect();
        if let Some(last) = self.blocks.last() {
            out.push(last.beta_out());
        }
        out
    }

    pub fn steps(&self) -> u64 {
        self.blocks.iter().map(Block::steps).sum()
    }
}

/// `n_blocks` consecutive blocks from β = 4·k0 + 2. Once the index reaches
/// 0 every further block is the trivial one, `2 → 1 → 4 → 2`.
pub fn decompose(k0: &BigUint, n_blocks: usize) -> Result<BlockSequence> {
    if n_blocks == 0 {
        return Err(Error::Domain("decompose needs at least one block".into()));
    }
    let mut blocks: Vec<Block> = Vec::with_capacity(n_blocks);
    let mut k = k0.clone();
    for _ in 0..n_blocks {
        let b = next_block(&k);
        k = b.k_out.clone();
        blocks.push(b);
    }
    Ok(BlockSequence { blocks })
}

/// Blocks from β = 4·k0 + 2 up to and including the first one that exits at `k = 0`.
///
/// Fails with [`Error::LimitExceeded`] if that takes more than `step_limit` `C`-steps.
pub fn decompose_to_trivial(k0: &BigUint, step_limit: u64) -> Result<BlockSequence> {
    let mut blocks = Vec::new();
    let mut k = k0.clone();
    let mut steps = 0;
    loop {
        let b = next_block(&k);
        steps += b.steps();
        if steps > step_limit {
            return Err(Error::LimitExceeded {
                start: (k0 << 2u32) + 2u32,
                limit: step_limit,
            });
        }
        k = b.k_out.clone();
        blocks.push(b);
        if k.is_zero() {
            return Ok(BlockSequence { blocks });
        }
    }
}

/// Steps from `z` to the first β on its trajectory (0 if `z` is a β), and that β's index.
pub fn first_beta(z: &Nat, step_limit: u64) -> Result<(u64, BigUint)> {
    let mut v = z.clone();
    for steps in 0..=step_limit {
        if ResidueClass::of_mod4(v.mod4()) == ResidueClass::Beta {
            return Ok((steps, v.value() >> 2u32));
        }
        v = step_c(&v);
    }
    Err(Error::LimitExceeded {
        start: z.value().clone(),
        limit: step_limit,
    })
}

/// Decomposes an arbitrary trajectory: iterate to the first β, then take `n_blocks` blocks.
/// Returns the lead-in step count together with the blocks.
pub fn decompose_from(z: &Nat, n_blocks: usize, step_limit: u64) -> Result<(u64, BlockSequence)> {
    let (lead, k0) = first_beta(z, step_limit)?;
    Ok((lead, decompose(&k0, n_blocks)?))
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

fn pow3(e: u64) -> BigInt {
    BigInt::from(3).pow(e)
}

/// `3^(m+1) - 2^m - 2^(e+m)`, the numerator of the affine term.
pub fn affine_numerator(m: u64, e: u64) -> BigInt {
    pow3(m + 1) - pow2(m) - pow2(e + m)
}

/// Slope `3^(m+1)/2^(e+m+1)` of the block recurrence.
pub fn block_slope(m: u64, e: u64) -> BigRational {
    BigRational::new(pow3(m + 1), pow2(e + m + 1))
}

/// Intercept `(3^(m+1) - 2^m - 2^(e+m))/2^(e+m+1)` of the block recurrence.
pub fn block_intercept(m: u64, e: u64) -> BigRational {
    BigRational::new(affine_numerator(m, e), pow2(e + m + 1))
}

/// One block of the index recurrence, in exact rationals.
pub fn recurrence_step(k: &BigRational, m: u64, e: u64) -> BigRational {
    k * block_slope(m, e) + block_intercept(m, e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceViolation {
    pub block: usize,
    pub k_out: BigUint,
    pub formula: BigRational,
}

/// Evaluates the recurrence on every block and reports where it disagrees
/// with the observed `k_out` (including any non-integral value).
pub fn verify_recurrence(bs: &BlockSequence) -> Vec<RecurrenceViolation> {
    bs.blocks
        .iter()
        .enumerate()
        .filter_map(|(i, b)| {
            let k_in = BigRational::from_integer(BigInt::from(b.k_in.clone()));
            let formula = recurrence_step(&k_in, b.m, b.e);
            let observed = BigRational::from_integer(BigInt::from(b.k_out.clone()));
            (!formula.is_integer() || formula != observed).then(|| RecurrenceViolation {
                block: i,
                k_out: b.k_out.clone(),
                formula,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub value: BigRational,
    pub is_integer: bool,
}

/// The closed form as `kⁿ = slope·k⁰ + intercept`, with
/// `slope = Π_{i<n} Aᵢ` and
/// `intercept = Σ_{j=0..n-2} Bⱼ·Π_{i=j+1..n-1} Aᵢ + B_{n-1}`,
/// where `Aᵢ`, `Bᵢ` are the per-block slope and intercept.
pub fn closed_form_terms(m_seq: &[u64], e_seq: &[u64]) -> Result<(BigRational, BigRational)> {
    if m_seq.len() != e_seq.len() || m_seq.is_empty() {
        return Err(Error::Domain(format!(
            "m and e sequences must be nonempty and equally long (got {} and {})",
            m_seq.len(),
            e_seq.len()
        )));
    }
    let n = m_seq.len();
    let a = |i: usize| block_slope(m_seq[i], e_seq[i]);
    let b = |i: usize| block_intercept(m_seq[i], e_seq[i]);
    let product = |from: usize, to: usize| -> BigRational {
        (from..to).map(a).fold(BigRational::one(), |acc, x| acc * x)
    };
    let slope = product(0, n);
    let mut intercept = BigRational::zero();
    for j in 0..n.saturating_sub(1) {
        intercept += b(j) * product(j + 1, n);
    }
    intercept += b(n - 1);
    Ok((slope, intercept))
}

/// `kⁿ` from `k⁰` and the exponent sequences, via the closed form.
/// Hypothetical sequences may give non-integral values; `is_integer` flags them.
pub fn closed_form_k(k0: &BigInt, m_seq: &[u64], e_seq: &[u64]) -> Result<ClosedForm> {
    let (slope, intercept) = closed_form_terms(m_seq, e_seq)?;
    let value = BigRational::from_integer(k0.clone()) * slope + intercept;
    Ok(ClosedForm {
        is_integer: value.is_integer(),
        value,
    })
}

/// For each `k0` in `range`: decompose β = 4·k0 + 2 down to the trivial
/// block, check every block's identities and recurrence, and compare the
/// concatenated block paths with raw `C` iteration.
pub fn verify_blocks_range(range: RangeInclusive<u64>, step_limit: u64) -> SweepReport {
    check_range(range, |k0| {
        let k0b = BigUint::from(k0);
        let bs = match decompose_to_trivial(&k0b, step_limit) {
            Ok(bs) => bs,
            Err(e) => return Some(Counterexample::new(k0, "reaches β = 2", e)),
        };
        if let Some(i) = bs.blocks.iter().position(|b| !b.is_consistent()) {
            return Some(Counterexample::new(
                k0,
                "consistent block identities",
                format!("block {i}: {:?}", bs.blocks[i]),
            ));
        }
        if let Some(v) = verify_recurrence(&bs).first() {
            return Some(Counterexample::new(
                k0,
                format!("block {} k_out = {}", v.block, v.k_out),
                format!("recurrence gives {}", v.formula),
            ));
        }
        let raw = orbit(&beta_of(&k0b), CollatzMap::C, bs.steps());
        let rebuilt = bs.path();
        if raw != rebuilt {
            let at = raw
                .iter()
                .zip(&rebuilt)
                .position(|(a, b)| a != b)
                .unwrap_or(0);
            return Some(Counterexample::new(
                k0,
                format!("value {} at step {at}", raw[at]),
                format!("{}", rebuilt[at]),
            ));
        }
        None
    })
}
