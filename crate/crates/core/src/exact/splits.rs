use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::gaps::Scaled;
use super::scalar::{fits_i128, Scalar};
use super::{ExactError, GapSequence, OddPartition, Rational};

/// Largest number of splits `f_value` will enumerate.
pub const SPLIT_CAP: u64 = 200_000_000;

struct Splitter<'a, T> {
    values: &'a [T],
    size: Vec<usize>,
    // Previous group of the same size, if any. A group may only be opened
    // after that one, so unordered groups are produced once.
    prev_same: Vec<Option<usize>>,
    filled: Vec<usize>,
    sums: Vec<T>,
    slots_left: usize,
    total: T,
    leaves: u64,
}

impl<T: Scalar> Splitter<'_, T> {
    fn run(&mut self, e: usize) {
        if self.slots_left == 0 {
            let min = self.sums.iter().min().expect("at least one group");
            self.total += min;
            self.leaves += 1;
            return;
        }
        let left = self.values.len() - e;
        if left < self.slots_left {
            return;
        }
        if left > self.slots_left {
            self.run(e + 1);
        }
        for g in 0..self.size.len() {
            if self.filled[g] == self.size[g] {
                continue;
            }
            if self.filled[g] == 0 {
                if let Some(p) = self.prev_same[g] {
                    if self.filled[p] == 0 {
                        continue;
                    }
                }
            }
            let saved = self.sums[g].clone();
            self.sums[g] += &self.values[e];
            self.filled[g] += 1;
            self.slots_left -= 1;
            self.run(e + 1);
            self.slots_left += 1;
            self.filled[g] -= 1;
            self.sums[g] = saved;
        }
    }
}

fn split_total<T: Scalar>(o: &OddPartition, values: &[T]) -> (T, u64) {
    let size: Vec<usize> = o.parts().iter().map(|&p| p as usize).collect();
    let prev_same = (0..size.len())
        .map(|g| (g > 0 && size[g - 1] == size[g]).then(|| g - 1))
        .collect();
    let mut s = Splitter {
        values,
        filled: vec![0; size.len()],
        sums: vec![T::zero(); size.len()],
        slots_left: o.k(),
        size,
        prev_same,
        total: T::zero(),
        leaves: 0,
    };
    s.run(0);
    (s.total, s.leaves)
}

/// Number of splits of `n` labelled items into groups of sizes `o`, counted
/// by explicit enumeration.
pub fn count_splits(o: &OddPartition, n: usize) -> u64 {
    let zeros = vec![0i128; n];
    split_total(o, &zeros).1
}

/// Sum over all splits of the minimum group sum, in scaled units.
pub(crate) fn scaled_split_sum(
    o: &OddPartition,
    scaled: &Scaled,
) -> Result<(BigInt, BigInt), ExactError> {
    let n = scaled.values.len();
    let count = o.split_count(n)?;
    if count.to_u64().is_none_or(|c| c > SPLIT_CAP) {
        return Err(ExactError::TooManySplits {
            count: count.to_string(),
            cap: SPLIT_CAP,
        });
    }
    let sum: BigInt = scaled.values.iter().sum();
    let total = if fits_i128(&(&sum * &count)) {
        let v: Vec<i128> = scaled.values.iter().map(i128::from_big).collect();
        split_total(o, &v).0.to_big()
    } else {
        split_total(o, &scaled.values).0
    };
    Ok((total, count))
}

/// Average, over all ways of splitting `k` of the gaps into groups of sizes
/// `o`, of the smallest group sum.
pub fn f_value(o: &OddPartition, x: &GapSequence) -> Result<Rational, ExactError> {
    if o.r() == 0 {
        return Ok(Rational::zero());
    }
    let scaled = x.scaled();
    let (total, count) = scaled_split_sum(o, &scaled)?;
    Ok(Rational::new(total, count * scaled.denominator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::odd_partitions;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn pair_on_two_gaps_is_min() {
        let o = OddPartition::new(vec![1, 1]).unwrap();
        let x = GapSequence::from_integers(&[7, 3]).unwrap();
        assert_eq!(f_value(&o, &x).unwrap(), int(3));
    }

    #[test]
    fn pair_on_four_gaps_averages_six_mins() {
        let o = OddPartition::new(vec![1, 1]).unwrap();
        let x = GapSequence::from_integers(&[1, 2, 3, 4]).unwrap();
        // mins: 1,1,1,2,2,3
        assert_eq!(f_value(&o, &x).unwrap(), Rational::new(10.into(), 6.into()));
    }

    #[test]
    fn single_group_of_three() {
        let o = OddPartition::new(vec![3]).unwrap();
        let x = GapSequence::from_integers(&[1, 1, 1, 5]).unwrap();
        // 3-subsets sum to 3 once and to 7 three times.
        assert_eq!(f_value(&o, &x).unwrap(), int(6));
    }

    #[test]
    fn enumeration_matches_closed_form_count() {
        for k in (2..=8).step_by(2) {
            for o in odd_partitions(k) {
                for n in k..=10 {
                    assert_eq!(
                        BigInt::from(count_splits(&o, n)),
                        o.split_count(n).unwrap(),
                        "{o} n={n}"
                    );
                }
            }
        }
    }
}
