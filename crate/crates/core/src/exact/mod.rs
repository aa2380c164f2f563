//! Exact expected cost of the greedy closest-pair matching on an alternating
//! red/blue configuration, averaged over orderings of its gaps.
//!
//! A gap sequence `x = (x_1, ..., x_n)` (n even) describes `n + 1` points
//! on a line, red and blue alternating and red at both ends. The greedy
//! matching repeatedly pairs the closest adjacent red/blue pair; `D(x)` is its
//! total length and `E(x)` the average of `D` over all `n!` orderings of
//! `x`. `E` also has a closed form as a weighted sum, over odd partitions
//! `o` of even `k <= n`, of the average minimum group sum over ways to split
//! `k` of the gaps into groups of sizes `o`.

mod bounds;
mod expectation;
mod gaps;
mod greedy;
mod partitions;
mod scalar;
mod splits;

pub use bounds::{log_bound, uniform_bound_check, BoundReport, LOG_BOUND_GUARD};
pub use expectation::{
    estimate_expected_greedy_cost, expected_greedy_cost, ExpectationEstimate, EXPECTATION_CAP,
};
pub use gaps::{parse_rational, random_gaps, GapSequence};
pub use greedy::{greedy_cost, permutation_oracle, TiePolicy, MEMO_LIMIT, ORACLE_CAP};
pub use partitions::{odd_partitions, partition_weight, OddPartition};
pub use splits::{count_splits, f_value, SPLIT_CAP};

use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("gap sequence is empty")]
    Empty,
    #[error("gap sequence must have even length, got {0}")]
    OddLength(usize),
    #[error("gap {index} is not positive")]
    NonPositive { index: usize },
    #[error("cannot parse {token:?} as a rational number")]
    Parse { token: String },
    #[error("{op} is limited to n <= {cap}, got n = {n}")]
    TooLarge {
        op: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("partition sums to {k}, more than the {n} available gaps")]
    PartitionTooLarge { k: usize, n: usize },
    #[error("{count} splits exceed the enumeration limit of {cap}")]
    TooManySplits { count: String, cap: u64 },
    #[error("tie-branch memo exceeded {0} states")]
    MemoLimit(usize),
    #[error("partition part {0} is not a positive odd integer")]
    BadPart(u32),
}
