use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{fits_i128, Scalar};
use super::{ExactError, GapSequence, Rational};

/// Largest `n` accepted by [`permutation_oracle`].
pub const ORACLE_CAP: usize = 8;
/// Largest number of memoised gap states before giving up.
pub const MEMO_LIMIT: usize = 4_000_000;

/// How the greedy matcher resolves several closest pairs at equal distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TiePolicy {
    /// Expectation over a uniform choice among the tied pairs.
    Average,
    /// Always take the leftmost tied pair.
    Leftmost,
}

/// Remove the pair across gap `i`; its neighbours merge into one gap.
pub(crate) fn contract<T: Scalar>(gaps: &[T], i: usize) -> Vec<T> {
    let m = gaps.len();
    if i == 0 {
        return gaps[2..].to_vec();
    }
    if i == m - 1 {
        return gaps[..m - 2].to_vec();
    }
    let mut out = Vec::with_capacity(m - 2);
    out.extend_from_slice(&gaps[..i - 1]);
    let mut merged = gaps[i - 1].clone();
    merged += &gaps[i];
    merged += &gaps[i + 1];
    out.push(merged);
    out.extend_from_slice(&gaps[i + 2..]);
    out
}

/// `scale[m]` makes the tie-averaged cost of any `m`-gap state integral:
/// `scale[m] = lcm(1..=m) * scale[m-2]`.
fn scale_table(n: usize, policy: TiePolicy) -> Vec<BigInt> {
    let mut scale = vec![BigInt::one(); n + 1];
    if policy == TiePolicy::Average {
        let mut lcm = BigInt::one();
        for m in 1..=n {
            lcm = lcm.lcm(&BigInt::from(m));
            scale[m] = if m >= 2 {
                &lcm * &scale[m - 2]
            } else {
                lcm.clone()
            };
        }
    }
    scale
}

pub(crate) struct Greedy<T> {
    policy: TiePolicy,
    scale: Vec<T>,
    memo: HashMap<Vec<T>, T>,
}

impl<T: Scalar> Greedy<T> {
    fn new(n: usize, policy: TiePolicy) -> Self {
        let scale = scale_table(n, policy).iter().map(T::from_big).collect();
        Greedy {
            policy,
            scale,
            memo: HashMap::new(),
        }
    }

    /// Cost of `gaps` times `scale[gaps.len()]`.
    fn cost(&mut self, gaps: &[T]) -> Result<T, ExactError> {
        let m = gaps.len();
        if m == 0 {
            return Ok(T::zero());
        }
        let min = gaps.iter().min().expect("non-empty").clone();
        if m == 2 {
            return Ok(min * self.scale[2].clone());
        }
        // The cost is invariant under reversing the line.
        let rev: Vec<T> = gaps.iter().rev().cloned().collect();
        let key = if rev.as_slice() < gaps {
            rev
        } else {
            gaps.to_vec()
        };
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let ties: Vec<usize> = (0..m).filter(|&i| gaps[i] == min).collect();
        let chosen = match self.policy {
            TiePolicy::Average => &ties[..],
            TiePolicy::Leftmost => &ties[..1],
        };
        let mut branch_sum = T::zero();
        for &i in chosen {
            let sub = contract(gaps, i);
            branch_sum += &self.cost(&sub)?;
        }
        let factor = self.scale[m].clone()
            / (T::from_big(&BigInt::from(chosen.len())) * self.scale[m - 2].clone());
        let mut value = min * self.scale[m].clone();
        value += &(factor * branch_sum);
        if self.memo.len() >= MEMO_LIMIT {
            return Err(ExactError::MemoLimit(MEMO_LIMIT));
        }
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

fn to_rational(total: BigInt, scale: &BigInt, denominator: &BigInt) -> Rational {
    Rational::new(total, scale * denominator)
}

fn overflow_bound(x: &GapSequence, values: &[BigInt], extra: &BigInt) -> BigInt {
    let n = x.len();
    let sum: BigInt = values.iter().sum();
    sum * BigInt::from(n * n) * extra
}

/// Total length of the greedy closest-pair matching on the alternating
/// configuration with gaps `x`.
pub fn greedy_cost(x: &GapSequence, policy: TiePolicy) -> Result<Rational, ExactError> {
    let scaled = x.scaled();
    let n = x.len();
    let scale = scale_table(n, policy);
    if fits_i128(&overflow_bound(x, &scaled.values, &scale[n])) {
        let v: Vec<i128> = scaled.values.iter().map(i128::from_big).collect();
        let total = Greedy::<i128>::new(n, policy).cost(&v)?.to_big();
        Ok(to_rational(total, &scale[n], &scaled.denominator))
    } else {
        let total = Greedy::<BigInt>::new(n, policy).cost(&scaled.values)?;
        Ok(to_rational(total, &scale[n], &scaled.denominator))
    }
}

fn heap_permutations<T: Scalar>(
    values: &[T],
    greedy: &mut Greedy<T>,
) -> Result<BigInt, ExactError> {
    // Heap's algorithm, iterative form.
    let n = values.len();
    let mut a = values.to_vec();
    let mut c = vec![0usize; n];
    let mut total = greedy.cost(&a)?.to_big();
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            total += greedy.cost(&a)?.to_big();
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Average greedy cost over all `n!` orderings of the gaps, ties averaged.
pub fn permutation_oracle(x: &GapSequence) -> Result<Rational, ExactError> {
    let n = x.len();
    if n > ORACLE_CAP {
        return Err(ExactError::TooLarge {
            op: "permutation_oracle",
            n,
            cap: ORACLE_CAP,
        });
    }
    let scaled = x.scaled();
    let scale = scale_table(n, TiePolicy::Average);
    let total = if fits_i128(&overflow_bound(x, &scaled.values, &scale[n])) {
        let v: Vec<i128> = scaled.values.iter().map(i128::from_big).collect();
        heap_permutations(&v, &mut Greedy::new(n, TiePolicy::Average))?
    } else {
        heap_permutations(&scaled.values, &mut Greedy::new(n, TiePolicy::Average))?
    };
    let perms: BigInt = (1..=n).fold(BigInt::one(), |acc, i| acc * i);
    if total.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(total, perms * &scale[n] * scaled.denominator))
}
