//! The four residue classes mod 4 and the class-level transition automaton.
//!
//! Every positive integer is written `z = 4k + c` with `c` in `{1, 2, 3, 4}`:
//! α = 4k+1, β = 4k+2, η = 4k+3, γ = 4k+4. One application of `C` moves a
//! class to another class, and which one depends only on the class and
//! the parity of `k`.
//!
//! The α row of the table for even `k` maps to index `6l`
//! (`C(8l+1) = 24l+4 = 4·6l + 4`). A variant with an extra factor of 3
//! (`18l`) is wrong; the exhaustive sweep confirms `6l`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::dynamics::{orbit, step_c, CollatzMap};
use crate::error::Result;
use crate::nat::Nat;
use crate::sweep::{check_range, Counterexample, SweepReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueClass {
    Alpha,
    Beta,
    Eta,
    Gamma,
}

impl ResidueClass {
    pub const ALL: [ResidueClass; 4] = [
        ResidueClass::Alpha,
        ResidueClass::Beta,
        ResidueClass::Eta,
        ResidueClass::Gamma,
    ];

    /// The `c` in `z = 4k + c`.
    pub fn offset(self) -> u32 {
        match self {
            ResidueClass::Alpha => 1,
            ResidueClass::Beta => 2,
            ResidueClass::Eta => 3,
            ResidueClass::Gamma => 4,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ResidueClass::Alpha => 'α',
            ResidueClass::Beta => 'β',
            ResidueClass::Eta => 'η',
            ResidueClass::Gamma => 'γ',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidueClass::Alpha => "alpha",
            ResidueClass::Beta => "beta",
            ResidueClass::Eta => "eta",
            ResidueClass::Gamma => "gamma",
        }
    }

    pub fn of_mod4(r: u8) -> ResidueClass {
        match r & 3 {
            1 => ResidueClass::Alpha,
            2 => ResidueClass::Beta,
            3 => ResidueClass::Eta,
            _ => ResidueClass::Gamma,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// `z = 4k + class.offset()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassifiedInt {
    pub class: ResidueClass,
    pub k: BigUint,
}

impl ClassifiedInt {
    pub fn new(class: ResidueClass, k: impl Into<BigUint>) -> Self {
        ClassifiedInt { class, k: k.into() }
    }
}

impl fmt::Display for ClassifiedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (k={})", self.class, self.k)
    }
}

pub fn classify(z: &Nat) -> ClassifiedInt {
    let class = ResidueClass::of_mod4(z.mod4());
    let k = (z.value() - class.offset()) >> 2u32;
    ClassifiedInt { class, k }
}

pub fn declassify(c: &ClassifiedInt) -> Nat {
    Nat::new((&c.k << 2u32) + c.class.offset()).expect("4k + c is positive")
}

/// The class of `C(z)` read off the case table from `(class, k)` alone.
/// `C` itself is never evaluated.
pub fn transition_symbolic(c: &ClassifiedInt) -> ClassifiedInt {
    use ResidueClass::*;
    let (l, odd) = (&c.k >> 1u32, c.k.is_odd());
    let six_l = &l * 6u32;
    match (c.class, odd) {
        (Alpha, true) => ClassifiedInt::new(Gamma, six_l + 3u32),
        (Alpha, false) => ClassifiedInt::new(Gamma, six_l),
        (Beta, true) => ClassifiedInt::new(Eta, l),
        (Beta, false) => ClassifiedInt::new(Alpha, l),
        (Eta, true) => ClassifiedInt::new(Beta, six_l + 5u32),
        (Eta, false) => ClassifiedInt::new(Beta, six_l + 2u32),
        (Gamma, true) => ClassifiedInt::new(Gamma, l),
        (Gamma, false) => ClassifiedInt::new(Beta, l),
    }
}

/// Checks the symbolic table against `C` for every `z` in `1..=z_max`.
pub fn verify_transition_sweep(z_max: u64) -> SweepReport {
    verify_transitions_with(1..=z_max, transition_symbolic)
}

/// Like [`verify_transition_sweep`] for an arbitrary range and table.
pub fn verify_transitions_with<F>(range: RangeInclusive<u64>, table: F) -> SweepReport
where
    F: Fn(&ClassifiedInt) -> ClassifiedInt + Sync + Send,
{
    check_range(range, |n| {
        let z = Nat::try_from(n).ok()?;
        let expected = step_c(&z);
        let actual = declassify(&table(&classify(&z)));
        (expected != actual).then(|| Counterexample::new(n, expected, actual))
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts([u64; 4]);

impl ClassCounts {
    pub fn get(&self, class: ResidueClass) -> u64 {
        self.0[class.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    fn bump(&mut self, class: ResidueClass) {
        self.0[class.index()] += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSequence {
    pub start: Nat,
    pub classes: Vec<ResidueClass>,
    pub counts: ClassCounts,
}

/// Classes along the `C`-trajectory of `z`. The start is included and the
/// terminal 1 is not, unless the start is itself 1.
pub fn class_sequence(z: &Nat, step_limit: u64) -> Result<ClassSequence> {
    let t = crate::dynamics::trajectory(z, CollatzMap::C, step_limit)?;
    let keep = if t.values.len() > 1 {
        t.values.len() - 1
    } else {
        1
    };
    let mut counts = ClassCounts::default();
    let classes = t.values[..keep]
        .iter()
        .map(|v| {
            let c = ResidueClass::of_mod4(v.mod4());
            counts.bump(c);
            c
        })
        .collect();
    Ok(ClassSequence {
        start: z.clone(),
        classes,
        counts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KParity {
    Any,
    Odd,
    Even,
}

impl KParity {
    pub fn admits(self, k_odd: bool) -> bool {
        match self {
            KParity::Any => true,
            KParity::Odd => k_odd,
            KParity::Even => !k_odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: ResidueClass,
    pub to: ResidueClass,
    pub condition: KParity,
}

/// The class cycle graph: main cycle α → γ → β → α, self-loop γ → γ and
/// the two-cycle β → η → β.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    pub edges: Vec<Edge>,
}

impl TransitionGraph {
    /// The edge a value of class `from` with index parity `k_odd` may take to `to`.
    pub fn edge_for(&self, from: ResidueClass, to: ResidueClass, k_odd: bool) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to && e.condition.admits(k_odd))
    }

    pub fn has_edge(&self, from: ResidueClass, to: ResidueClass) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }
}

pub fn transition_graph() -> TransitionGraph {
    use ResidueClass::*;
    let e = |from, to, condition| Edge {
        from,
        to,
        condition,
    };
    TransitionGraph {
        edges: vec![
            e(Alpha, Gamma, KParity::Any),
            e(Beta, Eta, KParity::Odd),
            e(Beta, Alpha, KParity::Even),
            e(Eta, Beta, KParity::Any),
            e(Gamma, Gamma, KParity::Odd),
            e(Gamma, Beta, KParity::Even),
        ],
    }
}

/// Checks that every `C` step from `z` in `range` follows an edge of the graph
/// with a matching parity condition.
pub fn verify_graph_closure(range: RangeInclusive<u64>) -> SweepReport {
    let graph = transition_graph();
    check_range(range, |n| {
        let z = Nat::try_from(n).ok()?;
        let from = classify(&z);
        let to = classify(&step_c(&z)).class;
        let k_odd = from.k.is_odd();
        graph.edge_for(from.class, to, k_odd).is_none().then(|| {
            Counterexample::new(
                n,
                "an edge of the class graph",
                format!(
                    "{}→{} with k {}",
                    from.class,
                    to,
                    if k_odd { "odd" } else { "even" }
                ),
            )
        })
    })
}

/// First `z` (searching upward from 1, up to `z_max`) whose `C` step uses `edge`.
pub fn witness(edge: &Edge, z_max: u64) -> Option<u64> {
    (1..=z_max).find(|&n| {
        let z = Nat::try_from(n).expect("n >= 1");
        let from = classify(&z);
        from.class == edge.from
            && edge.condition.admits(from.k.is_odd())
            && classify(&step_c(&z)).class == edge.to
    })
}

/// Classes of the first `steps + 1` values of the `C`-orbit of `z`.
pub fn classes_of_orbit(z: &Nat, steps: u64) -> Vec<ResidueClass> {
    orbit(z, CollatzMap::C, steps)
        .iter()
        .map(|v| ResidueClass::of_mod4(v.mod4()))
        .collect()
}
