//! Vertex-count coordinates.
//!
//! A positive integer `z` is drawn as a polyline with `x` lower and `s`
//! upper vertices, `z = x + s - 1`. Odd `z` has `x = s`; even `z` has
//! `x = s + 1`. The parities of `(s, x)` recover the mod-4 class, and one
//! step of `T` becomes the law
//!
//! ```text
//! x₁ + s₁ = (x₀ + s₀) + x₀ - x₀² + s₀²
//! ```
//!
//! Summing the law around a closed `T`-orbit gives the cycle residual
//! `Σ xⱼ + Σ (sⱼ + xⱼ)(sⱼ - xⱼ)`, which must vanish.

use std::fmt;
use std::ops::{Range, RangeInclusive};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dynamics::step_t;
use crate::error::{Error, Result};
use crate::nat::Nat;
use crate::residue::{classify, ResidueClass};
use crate::sweep::{check_range, Counterexample, SweepReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyline {
    x: BigUint,
    s: BigUint,
}

impl Polyline {
    pub fn new(x: impl Into<BigUint>, s: impl Into<BigUint>) -> Result<Self> {
        let (x, s) = (x.into(), s.into());
        if s.is_zero() || (x != s && x != &s + 1u32) {
            return Err(Error::InvalidPolyline { x, s });
        }
        Ok(Polyline { x, s })
    }

    /// Lower vertex count.
    pub fn x(&self) -> &BigUint {
        &self.x
    }

    /// Upper vertex count.
    pub fn s(&self) -> &BigUint {
        &self.s
    }

    fn xi(&self) -> BigInt {
        BigInt::from(self.x.clone())
    }

    fn si(&self) -> BigInt {
        BigInt::from(self.s.clone())
    }
}

impl fmt::Display for Polyline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, s={})", self.x, self.s)
    }
}

pub fn to_polyline(z: &Nat) -> Polyline {
    let v = z.value();
    if v.is_odd() {
        let half = (v + 1u32) >> 1u32;
        Polyline {
            x: half.clone(),
            s: half,
        }
    } else {
        let s = v >> 1u32;
        Polyline { x: &s + 1u32, s }
    }
}

pub fn from_polyline(p: &Polyline) -> Nat {
    Nat::new(&p.x + &p.s - 1u32).expect("x + s >= 2 for a valid polyline")
}

pub fn class_from_polyline(p: &Polyline) -> ResidueClass {
    match (p.s.is_odd(), p.x.is_odd()) {
        (true, true) => ResidueClass::Alpha,
        (true, false) => ResidueClass::Beta,
        (false, true) => ResidueClass::Gamma,
        (false, false) => ResidueClass::Eta,
    }
}

/// `x₁ + s₁ == (x₀ + s₀) + x₀ - x₀² + s₀²`.
pub fn step_law_holds(before: &Polyline, after: &Polyline) -> bool {
    let (x0, s0) = (before.xi(), before.si());
    let lhs = after.xi() + after.si();
    let rhs = &x0 + &s0 + &x0 - &x0 * &x0 + &s0 * &s0;
    lhs == rhs
}

/// One step of `T` in coordinates.
///
/// # Panics
///
/// If the step law fails, which would mean the coordinate map is broken.
pub fn step_t_polyline(p: &Polyline) -> Polyline {
    let next = to_polyline(&step_t(&from_polyline(p)));
    assert!(step_law_holds(p, &next), "step law violated at {p}");
    next
}

/// `T` written directly in the coordinates:
/// `((2(1 - x + s) + 1)(x + s - 1) + 1 - (x - s)) / 2`.
pub fn transform_closed_form(p: &Polyline) -> BigInt {
    let (x, s) = (p.xi(), p.si());
    let one = BigInt::one();
    let twice = (BigInt::from(2) * (&one - &x + &s) + &one) * (&x + &s - &one) + &one - (&x - &s);
    debug_assert!(twice.is_even());
    twice / 2
}

fn residual_term(p: &Polyline) -> BigInt {
    let (x, s) = (p.xi(), p.si());
    &x + (&s + &x) * (&s - &x)
}

/// `Σ xⱼ + Σ (sⱼ + xⱼ)(sⱼ - xⱼ)` over the sequence. Zero on a closed `T`-orbit.
pub fn cycle_residual(seq: &[Polyline]) -> Result<BigInt> {
    if seq.is_empty() {
        return Err(Error::Domain(
            "cycle residual needs a nonempty sequence".into(),
        ));
    }
    Ok(seq.iter().map(residual_term).sum())
}

/// Which boundary shape a cycle segment is assumed to have. Index `n-1`
/// is the last element; the sequence is read cyclically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapePattern {
    /// `z₀ = α`, `z₁ = β`, only α and β throughout.
    PureAlphaBeta,
    /// `z_{n-1} = γ`, `z₀ = β`, `z₁ = α`.
    WithGamma,
    /// `z_{n-1} = β`, `z₀ = η`, `z₁ = α`.
    WithEta,
}

impl ShapePattern {
    pub const ALL: [ShapePattern; 3] = [
        ShapePattern::PureAlphaBeta,
        ShapePattern::WithGamma,
        ShapePattern::WithEta,
    ];

    /// Default summation indices for the tail sum of a length-`len` sequence.
    pub fn default_tail(self, len: usize) -> Range<usize> {
        match self {
            ShapePattern::PureAlphaBeta => 2..len.max(2),
            ShapePattern::WithGamma | ShapePattern::WithEta => 2..len.saturating_sub(1).max(2),
        }
    }

    fn min_len(self) -> usize {
        match self {
            ShapePattern::PureAlphaBeta => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for ShapePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapePattern::PureAlphaBeta => "pure_ab",
            ShapePattern::WithGamma => "with_gamma",
            ShapePattern::WithEta => "with_eta",
        })
    }
}

impl FromStr for ShapePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure_ab" => Ok(ShapePattern::PureAlphaBeta),
            "with_gamma" => Ok(ShapePattern::WithGamma),
            "with_eta" => Ok(ShapePattern::WithEta),
            _ => Err(Error::Domain(format!("unknown shape pattern {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCheck {
    pub identity: &'static str,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl BoundaryCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Boundary identities and residual for one shape. No sign is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub pattern: ShapePattern,
    pub boundary: Vec<BoundaryCheck>,
    pub tail: Range<usize>,
    pub residual: BigRational,
}

impl ShapeReport {
    pub fn boundary_holds(&self) -> bool {
        self.boundary.iter().all(BoundaryCheck::holds)
    }
}

pub fn shape_residual(seq: &[Polyline], pattern: ShapePattern) -> Result<ShapeReport> {
    shape_residual_with_tail(seq, pattern, pattern.default_tail(seq.len()))
}

/// Evaluates a shape's boundary identities and its residual
/// `head + Σ_{j in tail} (xⱼ + (sⱼ + xⱼ)(sⱼ - xⱼ))`, where the head is
/// `-(x₀ - 1)/2` for [`ShapePattern::PureAlphaBeta`], `-5x₁ + 6` for
/// [`ShapePattern::WithGamma`] and `x₁/3 + 1` for [`ShapePattern::WithEta`].
pub fn shape_residual_with_tail(
    seq: &[Polyline],
    pattern: ShapePattern,
    tail: Range<usize>,
) -> Result<ShapeReport> {
    let mismatch = |reason: String| Error::PatternMismatch { pattern, reason };
    if seq.len() < pattern.min_len() {
        return Err(mismatch(format!(
            "needs at least {} values, got {}",
            pattern.min_len(),
            seq.len()
        )));
    }
    if tail.start > tail.end || tail.end > seq.len() {
        return Err(Error::Domain(format!(
            "tail {tail:?} out of bounds for {} values",
            seq.len()
        )));
    }
    let classes: Vec<ResidueClass> = seq.iter().map(class_from_polyline).collect();
    let last = seq.len() - 1;
    let expect = |i: usize, c: ResidueClass| -> Result<()> {
        if classes[i] == c {
            Ok(())
        } else {
            Err(mismatch(format!(
                "value {i} is {} but must be {c}",
                classes[i]
            )))
        }
    };

    let r = |v: BigInt| BigRational::from_integer(v);
    let x = |i: usize| r(seq[i].xi());
    let s = |i: usize| r(seq[i].si());
    let int = |v: i64| r(BigInt::from(v));
    let check = |identity, lhs, rhs| BoundaryCheck { identity, lhs, rhs };

    let (boundary, head) = match pattern {
        ShapePattern::PureAlphaBeta => {
            expect(0, ResidueClass::Alpha)?;
            expect(1, ResidueClass::Beta)?;
            if let Some(i) = classes
                .iter()
                .position(|c| !matches!(c, ResidueClass::Alpha | ResidueClass::Beta))
            {
                return Err(mismatch(format!("value {i} is {}", classes[i])));
            }
            (
                vec![
                    check("s[0] = x[0]", s(0), x(0)),
                    check("x[0] = (s[1] + x[1])/3", x(0), (s(1) + x(1)) / int(3)),
                ],
                -(x(0) - int(1)) / int(2),
            )
        }
        ShapePattern::WithGamma => {
            expect(last, ResidueClass::Gamma)?;
            expect(0, ResidueClass::Beta)?;
            expect(1, ResidueClass::Alpha)?;
            (
                vec![
                    check("s[n-1] + 1 = x[n-1]", s(last) + int(1), x(last)),
                    check("x[n-1] = s[0] + x[0]", x(last), s(0) + x(0)),
                    check("s[n-1] = 2 s[0]", s(last), int(2) * s(0)),
                    check("s[0] + 1 = x[0]", s(0) + int(1), x(0)),
                    check("x[0] = s[1] + x[1]", x(0), s(1) + x(1)),
                    check("s[1] = x[1]", s(1), x(1)),
                    check("s[0] = 2 x[1] - 2", s(0), int(2) * x(1) - int(2)),
                ],
                int(-5) * x(1) + int(6),
            )
        }
        ShapePattern::WithEta => {
            expect(last, ResidueClass::Beta)?;
            expect(0, ResidueClass::Eta)?;
            expect(1, ResidueClass::Alpha)?;
            (
                vec![
                    check("s[n-1] + 1 = x[n-1]", s(last) + int(1), x(last)),
                    check("x[n-1] = s[0] + x[0]", x(last), s(0) + x(0)),
                    check("x[n-1] = 2 x[0]", x(last), int(2) * x(0)),
                    check("s[0] = x[0]", s(0), x(0)),
                    check("x[0] = (2/3) s[1]", x(0), int(2) * s(1) / int(3)),
                    check("s[1] = x[1]", s(1), x(1)),
                ],
                x(1) / int(3) + int(1),
            )
        }
    };
    let tail_sum: BigInt = seq[tail.clone()].iter().map(residual_term).sum();
    Ok(ShapeReport {
        pattern,
        boundary,
        tail,
        residual: head + r(tail_sum),
    })
}

/// For each `z` in `range`: coordinate roundtrip, class agreement with the
/// mod-4 classification, the closed form of `T`, and the step law.
pub fn verify_polyline_range(range: RangeInclusive<u64>) -> SweepReport {
    check_range(range, |n| {
        let z = Nat::try_from(n).ok()?;
        let p = to_polyline(&z);
        let back = from_polyline(&p);
        if back != z {
            return Some(Counterexample::new(n, format!("roundtrip to {z}"), back));
        }
        let by_parity = class_from_polyline(&p);
        let by_residue = classify(&z).class;
        if by_parity != by_residue {
            return Some(Counterexample::new(n, by_residue, by_parity));
        }
        let t = step_t(&z);
        let closed = transform_closed_form(&p);
        if closed != BigInt::from(t.value().clone()) {
            return Some(Counterexample::new(
                n,
                format!("T = {t}"),
                format!("closed form {closed}"),
            ));
        }
        let next = to_polyline(&t);
        (!step_law_holds(&p, &next)).then(|| {
            Counterexample::new(
                n,
                "x₁ + s₁ = (x₀ + s₀) + x₀ - x₀² + s₀²",
                format!("{p} → {next}"),
            )
        })
    })
}
