//! Mod-4 residue-class analysis of the 3x+1 map.
//!
//! Integers are sorted into four classes, α = 4k+1, β = 4k+2, η = 4k+3 and
//! γ = 4k+4, and the Collatz map `C` is studied as an automaton on those
//! classes. Trajectories then split into β-chains and β → α → γ → β blocks,
//! whose exponents obey exact recurrences and rational cycle equations.
//!
//! Every symbolic statement in this crate has a brute-force counterpart in
//! [`dynamics`], and the `verify_*` functions sweep integer ranges checking
//! one against the other.
//!
//! ```
//! use collatz_lab::{classify, step_c, transition_symbolic, declassify, Nat};
//!
//! let z: Nat = "27".parse().unwrap();
//! let next = declassify(&transition_symbolic(&classify(&z)));
//! assert_eq!(next, step_c(&z));
//! ```

pub mod beta_chain;
pub mod blocks;
pub mod cycles;
pub mod dynamics;
mod error;
mod nat;
pub mod polyline;
pub mod residue;
pub mod sweep;

pub use beta_chain::{
    solve_beta_chain, solve_beta_chain_ladder, verify_beta_chain, BetaChainSolution, ChainCheck,
};
pub use blocks::{closed_form_k, decompose, verify_recurrence, Block, BlockSequence, ClosedForm};
pub use cycles::{
    cycle_equation_general, cycle_k_n1, search_cycles, search_cycles_n1, CycleCandidate,
    CycleSolution,
};
pub use dynamics::{
    backward_tree, delay, glide, preimages_c, records_sweep, step_c, step_t, trajectory,
    BackwardTree, CollatzMap, RecordKind, RecordTable, Trajectory, DEFAULT_STEP_LIMIT,
};
pub use error::{Error, Result};
pub use nat::{v2, Nat};
pub use polyline::{
    class_from_polyline, cycle_residual, from_polyline, shape_residual, step_t_polyline,
    to_polyline, Polyline, ShapePattern, ShapeReport,
};
pub use residue::{
    class_sequence, classify, declassify, transition_graph, transition_symbolic,
    verify_transition_sweep, ClassSequence, ClassifiedInt, ResidueClass, TransitionGraph,
};
pub use sweep::{Counterexample, SweepReport};
