//! Range sweeps that check a predicate on every integer of an interval.
//!
//! Work is spread over the current rayon pool. Results come back in input
//! order regardless of how many threads ran, so a report depends only on
//! the range and the check.

use std::ops::RangeInclusive;

use rayon::prelude::*;

/// One failed check: the input, what the oracle expected, and what was observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub input: u64,
    pub expected: String,
    pub actual: String,
}

impl Counterexample {
    pub fn new(input: u64, expected: impl ToString, actual: impl ToString) -> Self {
        Counterexample {
            input,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn range_len(range: &RangeInclusive<u64>) -> u64 {
    if range.is_empty() {
        0
    } else {
        range.end() - range.start() + 1
    }
}

/// Runs `check` on every input in `range`, collecting counterexamples sorted by input.
pub fn check_range<F>(range: RangeInclusive<u64>, check: F) -> SweepReport
where
    F: Fn(u64) -> Option<Counterexample> + Sync + Send,
{
    let checked = range_len(&range);
    let mut counterexamples: Vec<Counterexample> =
        range.into_par_iter().filter_map(check).collect();
    counterexamples.sort_by_key(|c| c.input);
    SweepReport {
        checked,
        counterexamples,
    }
}
