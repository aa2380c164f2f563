use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{ExactError, Rational};

/// Multiset of odd positive integers, stored largest part first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPartition {
    parts: Vec<u32>,
}

impl OddPartition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, ExactError> {
        if let Some(&bad) = parts.iter().find(|&&p| p % 2 == 0) {
            return Err(ExactError::BadPart(bad));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(OddPartition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn k(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of parts.
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Closed-form number of ways to pick disjoint groups of these sizes out
    /// of `n` labelled items, groups of equal size unordered.
    pub fn split_count(&self, n: usize) -> Result<BigInt, ExactError> {
        let k = self.k();
        if k > n {
            return Err(ExactError::PartitionTooLarge { k, n });
        }
        let mut den = factorial(n - k);
        for &p in &self.parts {
            den *= factorial(p as usize);
        }
        for (_, c) in self.multiplicities() {
            den *= factorial(c);
        }
        Ok(factorial(n) / den)
    }
}

impl fmt::Display for OddPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// All odd partitions of `k`, in reverse lexicographic order of their
/// descending part lists.
pub fn odd_partitions(k: usize) -> Vec<OddPartition> {
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<OddPartition>) {
        if remaining == 0 {
            out.push(OddPartition {
                parts: current.clone(),
            });
            return;
        }
        let mut p = max_part.min(remaining);
        if p.is_multiple_of(2) {
            p -= 1;
        }
        while p >= 1 {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
            if p < 2 {
                break;
            }
            p -= 2;
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k as u32, k as u32, &mut Vec::new(), &mut out);
    }
    out
}

/// `2^(r-1) / prod_i (i^c_i * c_i!)`, with `c_i` the multiplicity of part `i`.
pub fn partition_weight(o: &OddPartition) -> Rational {
    let mut den = BigInt::one();
    for (p, c) in o.multiplicities() {
        den *= BigInt::from(p).pow(c as u32) * factorial(c);
    }
    let num = BigInt::one() << (o.r().saturating_sub(1));
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn six_has_four_partitions() {
        let got: Vec<Vec<u32>> = odd_partitions(6)
            .iter()
            .map(|o| o.parts().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![vec![5, 1], vec![3, 3], vec![3, 1, 1, 1], vec![1; 6]]
        );
        assert_eq!(odd_partitions(2).len(), 1);
        assert!(odd_partitions(0).is_empty());
    }

    #[test]
    fn weights_for_six() {
        let w: Vec<Rational> = odd_partitions(6).iter().map(partition_weight).collect();
        assert_eq!(w, vec![r(2, 5), r(1, 9), r(4, 9), r(2, 45)]);
    }

    #[test]
    fn split_count_examples() {
        let pair = OddPartition::new(vec![1, 1]).unwrap();
        assert_eq!(pair.split_count(4).unwrap(), BigInt::from(6));
        let three = OddPartition::new(vec![3]).unwrap();
        assert_eq!(three.split_count(4).unwrap(), BigInt::from(4));
        assert!(three.split_count(2).is_err());
        assert!(OddPartition::new(vec![2]).is_err());
        assert_eq!(OddPartition::new(vec![1, 5]).unwrap().to_string(), "{5,1}");
    }
}
