use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use super::splits::scaled_split_sum;
use super::{odd_partitions, partition_weight, ExactError, GapSequence, OddPartition, Rational};

/// Largest `n` for the exact closed form.
pub const EXPECTATION_CAP: usize = 12;

fn partitions_up_to(n: usize) -> Vec<OddPartition> {
    (2..=n).step_by(2).flat_map(odd_partitions).collect()
}

/// Exact `E(x)` from the odd-partition expansion.
pub fn expected_greedy_cost(x: &GapSequence) -> Result<Rational, ExactError> {
    let n = x.len();
    if n > EXPECTATION_CAP {
        return Err(ExactError::TooLarge {
            op: "expected_greedy_cost",
            n,
            cap: EXPECTATION_CAP,
        });
    }
    let scaled = x.scaled();
    let terms = partitions_up_to(n)
        .par_iter()
        .map(|o| {
            let (total, count) = scaled_split_sum(o, &scaled)?;
            Ok(partition_weight(o) * Rational::new(total, count))
        })
        .collect::<Result<Vec<Rational>, ExactError>>()?;
    let sum = terms.into_iter().fold(Rational::zero(), |a, b| a + b);
    Ok(sum / Rational::from_integer(scaled.denominator))
}

/// Monte Carlo estimate of `E(x)` for sequences beyond the exact cap: each
/// `f(o, x)` is replaced by the mean over uniformly sampled splits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples_per_partition: usize,
    pub partitions: usize,
}

pub fn estimate_expected_greedy_cost<R: Rng>(
    x: &GapSequence,
    samples_per_partition: usize,
    rng: &mut R,
) -> ExpectationEstimate {
    let values = x.to_f64();
    let n = values.len();
    let parts = partitions_up_to(n);
    let s = samples_per_partition.max(2);
    let mut value = 0.0;
    let mut var = 0.0;
    for o in &parts {
        let w = partition_weight(o).to_f64().unwrap_or(0.0);
        let (mut acc, mut acc2) = (0.0, 0.0);
        for _ in 0..s {
            let picked = sample(rng, n, o.k());
            let mut it = picked.iter();
            let mut min = f64::INFINITY;
            for &size in o.parts() {
                let g: f64 = it.by_ref().take(size as usize).map(|i| values[i]).sum();
                min = min.min(g);
            }
            acc += min;
            acc2 += min * min;
        }
        let mean = acc / s as f64;
        let sample_var = ((acc2 - s as f64 * mean * mean) / (s - 1) as f64).max(0.0);
        value += w * mean;
        var += w * w * sample_var / s as f64;
    }
    ExpectationEstimate {
        value,
        std_error: var.sqrt(),
        samples_per_partition: s,
        partitions: parts.len(),
    }
}
