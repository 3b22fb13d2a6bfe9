//! Cycle equations over block exponent sequences.
//!
//! A cycle of `n` blocks returns to its starting β index, so `kⁿ = k⁰` in
//! the closed form. That is linear in `k⁰`:
//!
//! ```text
//! k⁰ · (Π 2^(eⁱ+mⁱ+1) - Π 3^(mⁱ+1)) = Σⱼ Nⱼ · Π_{i<j} 2^(eⁱ+mⁱ+1) · Π_{i>j} 3^(mⁱ+1)
//! Nⱼ = 3^(mʲ+1) - 2^(mʲ) - 2^(eʲ+mʲ)
//! ```
//!
//! Every exponent sequence therefore fixes one rational candidate `k⁰`.
//! Only integral, non-negative candidates that reproduce their own
//! exponents under [`decompose`] are real cycles.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::blocks::{affine_numerator, closed_form_terms, decompose};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleCandidate {
    m_seq: Vec<u64>,
    e_seq: Vec<u64>,
}

impl CycleCandidate {
    pub fn new(m_seq: Vec<u64>, e_seq: Vec<u64>) -> Result<Self> {
        if m_seq.is_empty() || m_seq.len() != e_seq.len() {
            return Err(Error::Domain(format!(
                "a candidate needs equally long nonempty m and e sequences (got {} and {})",
                m_seq.len(),
                e_seq.len()
            )));
        }
        if e_seq.contains(&0) {
            return Err(Error::Domain("every e must be at least 1".into()));
        }
        Ok(CycleCandidate { m_seq, e_seq })
    }

    pub fn m_seq(&self) -> &[u64] {
        &self.m_seq
    }

    pub fn e_seq(&self) -> &[u64] {
        &self.e_seq
    }

    /// Number of blocks.
    pub fn n(&self) -> usize {
        self.m_seq.len()
    }

    /// All `m = 0` and all `e = 1`: the trivial block repeated.
    pub fn is_trivial(&self) -> bool {
        self.m_seq.iter().all(|&m| m == 0) && self.e_seq.iter().all(|&e| e == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSolution {
    pub candidate: CycleCandidate,
    pub k0: BigRational,
    pub is_integer: bool,
    pub is_nonneg: bool,
    /// Decomposing from `k0` reproduces the candidate's exponents and returns to `k0`.
    pub simulated_ok: bool,
}

impl CycleSolution {
    fn from_k0(candidate: CycleCandidate, k0: BigRational) -> Self {
        let is_integer = k0.is_integer();
        let is_nonneg = !k0.is_negative();
        let simulated_ok = is_integer
            && is_nonneg
            && k0
                .to_integer()
                .to_biguint()
                .is_some_and(|k| simulate(&k, &candidate));
        CycleSolution {
            candidate,
            k0,
            is_integer,
            is_nonneg,
            simulated_ok,
        }
    }

    /// The 2 → 1 → 4 → 2 cycle, traversed `n` times.
    pub fn is_trivial_cycle(&self) -> bool {
        self.candidate.is_trivial() && self.k0.is_zero()
    }

    pub fn is_admissible(&self) -> bool {
        self.is_integer && self.is_nonneg
    }
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

fn pow3(e: u64) -> BigInt {
    BigInt::from(3).pow(e)
}

fn simulate(k0: &BigUint, c: &CycleCandidate) -> bool {
    let Ok(bs) = decompose(k0, c.n()) else {
        return false;
    };
    bs.m_seq() == c.m_seq
        && bs.e_seq() == c.e_seq
        && bs.blocks.last().is_some_and(|b| &b.k_out == k0)
}

/// Single-block cycle index: `(3^(m+1) - 2^m - 2^(e+m)) / (2^(e+m+1) - 3^(m+1))`.
pub fn cycle_k_n1(m: u64, e: u64) -> Result<BigRational> {
    if e == 0 {
        return Err(Error::Domain("e must be at least 1".into()));
    }
    let den = pow2(e + m + 1) - pow3(m + 1);
    if den.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(BigRational::new(affine_numerator(m, e), den))
}

/// Every `(m, e)` with `0 <= m <= m_max`, `1 <= e <= e_max` whose single-block
/// index is a non-negative integer, each simulated.
pub fn search_cycles_n1(m_max: u64, e_max: u64) -> Result<Vec<CycleSolution>> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        for e in 1..=e_max {
            let k0 = cycle_k_n1(m, e)?;
            if k0.is_integer() && !k0.is_negative() {
                let c = CycleCandidate::new(vec![m], vec![e])?;
                out.push(CycleSolution::from_k0(c, k0));
            }
        }
    }
    Ok(out)
}

/// Solves `kⁿ = k⁰` for `k⁰`, using the closed form `kⁿ = slope·k⁰ + intercept`.
pub fn cycle_equation_general(c: &CycleCandidate) -> Result<CycleSolution> {
    let (slope, intercept) = closed_form_terms(&c.m_seq, &c.e_seq)?;
    let gap = BigRational::one() - slope;
    if gap.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(CycleSolution::from_k0(c.clone(), intercept / gap))
}

/// The closure equation with denominators cleared: `(coefficient, rhs)` with
/// `k⁰ · coefficient = rhs`, `coefficient = Π 2^(eⁱ+mⁱ+1) - Π 3^(mⁱ+1)`.
///
/// Derived by multiplying the closed-form intercept by `Π 2^(eⁱ+mⁱ+1)`; the
/// product is asserted to be an integer.
pub fn cleared_cycle_equation(c: &CycleCandidate) -> Result<(BigInt, BigInt)> {
    let (_, intercept) = closed_form_terms(&c.m_seq, &c.e_seq)?;
    let twos = c
        .m_seq
        .iter()
        .zip(&c.e_seq)
        .fold(BigInt::one(), |acc, (&m, &e)| acc * pow2(e + m + 1));
    let threes = c
        .m_seq
        .iter()
        .fold(BigInt::one(), |acc, &m| acc * pow3(m + 1));
    let rhs = intercept * BigRational::from_integer(twos.clone());
    assert!(rhs.is_integer(), "cleared intercept must be integral");
    Ok((twos - threes, rhs.to_integer()))
}

/// The right-hand side of the multi-block closure split into separate
/// terms for the last block, the middle blocks `j = 1..n-2`, and the first.
///
/// For `n = 1` the first and last terms are the same block and would be
/// counted twice, so `None` is returned; use [`cycle_k_n1`] instead.
pub fn split_cycle_rhs(c: &CycleCandidate) -> Option<BigInt> {
    let n = c.n();
    if n < 2 {
        return None;
    }
    let m = &c.m_seq;
    let e = &c.e_seq;
    let two = |i: usize| pow2(e[i] + m[i] + 1);
    let three = |i: usize| pow3(m[i] + 1);
    let num = |j: usize| affine_numerator(m[j], e[j]);
    let prod = |f: &dyn Fn(usize) -> BigInt, from: usize, to: usize| -> BigInt {
        (from..to).fold(BigInt::one(), |acc, i| acc * f(i))
    };

    let last = prod(&two, 0, n - 1) * num(n - 1);
    let middle = (1..n - 1).fold(BigInt::zero(), |acc, j| {
        acc + num(j) * prod(&three, j + 1, n) * prod(&two, 0, j)
    });
    let first = num(0) * prod(&three, 1, n);
    Some(last + middle + first)
}

/// Calls `visit` with every exponent sequence of length `n` (lexicographic in
/// `(m⁰, e⁰, m¹, e¹, …)`) with `mⁱ >= 0`, `eⁱ >= 1` and `Σ (mⁱ + eⁱ) <= budget`.
pub fn for_each_candidate(n: usize, budget: u64, mut visit: impl FnMut(&CycleCandidate)) {
    fn go(
        n: usize,
        left: u64,
        m: &mut Vec<u64>,
        e: &mut Vec<u64>,
        visit: &mut dyn FnMut(&CycleCandidate),
    ) {
        if m.len() == n {
            visit(&CycleCandidate {
                m_seq: m.clone(),
                e_seq: e.clone(),
            });
            return;
        }
        // the remaining blocks each need e >= 1
        let reserve = (n - m.len() - 1) as u64;
        if left < reserve + 1 {
            return;
        }
        for mi in 0..=left - reserve - 1 {
            for ei in 1..=left - reserve - mi {
                m.push(mi);
                e.push(ei);
                go(n, left - mi - ei, m, e, visit);
                m.pop();
                e.pop();
            }
        }
    }
    if n == 0 {
        return;
    }
    go(n, budget, &mut Vec::new(), &mut Vec::new(), &mut visit);
}

/// All admissible (integral, non-negative) solutions over every candidate
/// with `1 <= n <= n_max` blocks and `Σ (mⁱ + eⁱ) <= budget`, in enumeration order.
pub fn search_cycles(n_max: usize, budget: u64) -> Result<Vec<CycleSolution>> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut failure = None;
    for n in 1..=n_max {
        for_each_candidate(n, budget, |c| {
            if failure.is_some() {
                return;
            }
            match cycle_equation_general(c) {
                Ok(s) if s.is_admissible() => out.push(s),
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        });
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Sign of a rational, for reporting.
pub fn sign(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cand(m: &[u64], e: &[u64]) -> CycleCandidate {
        CycleCandidate::new(m.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn n1_examples() {
        assert_eq!(cycle_k_n1(0, 1).unwrap(), rat(0, 1));
        assert_eq!(cycle_k_n1(1, 2).unwrap(), rat(-1, 7));
        assert_eq!(cycle_k_n1(0, 2).unwrap(), rat(-2, 5));
        assert!(cycle_k_n1(0, 0).is_err());
    }

    #[test]
    fn n1_searches() {
        for (mm, em) in [(1, 1), (5, 5), (60, 60)] {
            let s = search_cycles_n1(mm, em).unwrap();
            assert_eq!(s.len(), 1, "box ({mm}, {em})");
            assert_eq!(s[0].candidate, cand(&[0], &[1]));
            assert_eq!(s[0].k0, rat(0, 1));
            assert!(s[0].simulated_ok);
        }
    }

    #[test]
    fn zero_m_numerator_is_negative() {
        for e in 2..=60u64 {
            assert_eq!(
                sign(&BigRational::from_integer(affine_numerator(0, e))),
                Sign::Minus
            );
            assert!(pow2(e + 1) - pow3(1) > BigInt::zero());
            assert!(cycle_k_n1(0, e).unwrap().is_negative());
        }
    }

    #[test]
    fn general_examples() {
        let s = cycle_equation_general(&cand(&[0, 0], &[1, 1])).unwrap();
        assert_eq!(s.k0, rat(0, 1));
        assert!(s.simulated_ok);
        assert!(s.is_trivial_cycle());

        let s = cycle_equation_general(&cand(&[1], &[3])).unwrap();
        assert_eq!(s.k0, rat(-9, 23));
        assert!(!s.is_admissible() && !s.simulated_ok);

        // denominators: 2^2·2^3 - 3·9 = 5; numerator from the cleared sum
        let s = cycle_equation_general(&cand(&[0, 1], &[1, 1])).unwrap();
        let (coef, rhs) = cleared_cycle_equation(&cand(&[0, 1], &[1, 1])).unwrap();
        assert_eq!(coef, BigInt::from(5));
        assert_eq!(s.k0, BigRational::new(rhs, coef));
        assert!(!s.is_admissible());
    }

    #[test]
    fn candidate_validation() {
        assert!(CycleCandidate::new(vec![], vec![]).is_err());
        assert!(CycleCandidate::new(vec![0], vec![0]).is_err());
        assert!(CycleCandidate::new(vec![0, 1], vec![1]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // n = 1: pairs (m, e) with e >= 1 and m + e <= 4 → 4 + 3 + 2 + 1
        let mut count = 0;
        for_each_candidate(1, 4, |_| count += 1);
        assert_eq!(count, 10);
        let mut seen = Vec::new();
        for_each_candidate(2, 2, |c| seen.push(c.clone()));
        assert_eq!(seen, [cand(&[0, 0], &[1, 1])]);
        let mut count = 0;
        for_each_candidate(3, 2, |_| count += 1);
        assert_eq!(count, 0);
    }

    #[test]
    fn searches_find_only_trivial_cycles() {
        let s = search_cycles(1, 12).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].candidate, cand(&[0], &[1]));

        // n ranges over 1..=n_max, so the single trivial block comes first
        let s = search_cycles(2, 2).unwrap();
        let found: Vec<&CycleCandidate> = s.iter().map(|x| &x.candidate).collect();
        assert_eq!(found, [&cand(&[0], &[1]), &cand(&[0, 0], &[1, 1])]);

        let s = search_cycles(3, 12).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|x| x.is_trivial_cycle() && x.simulated_ok));
    }

    #[test]
    fn single_block_equations_agree() {
        for m in 0..20 {
            for e in 1..20 {
                let general = cycle_equation_general(&cand(&[m], &[e])).unwrap();
                assert_eq!(general.k0, cycle_k_n1(m, e).unwrap());
            }
        }
    }

    #[test]
    fn split_rhs_rejects_single_block() {
        assert_eq!(split_cycle_rhs(&cand(&[1], &[3])), None);
    }

    proptest! {
        #[test]
        fn split_rhs_matches_cleared_form(seq in proptest::collection::vec((0u64..8, 1u64..8), 2..7)) {
            let (m, e): (Vec<u64>, Vec<u64>) = seq.into_iter().unzip();
            let c = cand(&m, &e);
            let (_, rhs) = cleared_cycle_equation(&c).unwrap();
            prop_assert_eq!(split_cycle_rhs(&c), Some(rhs));
        }

        #[test]
        fn never_degenerate(seq in proptest::collection::vec((0u64..30, 1u64..30), 1..8)) {
            let (m, e): (Vec<u64>, Vec<u64>) = seq.into_iter().unzip();
            let c = cand(&m, &e);
            prop_assert!(cycle_equation_general(&c).is_ok());
            let (coef, _) = cleared_cycle_equation(&c).unwrap();
            prop_assert!(!coef.is_zero());
        }
    }
}
