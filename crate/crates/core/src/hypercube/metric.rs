use std::cmp::Ordering;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::profile::{Profile, Words};
use super::HypercubeError;

/// Exact weighted Hamming value `numerator / 2^k`, the numerator being the
/// XOR mask read as a binary number with question 1 most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicDistance {
    mask: Words,
    k: usize,
}

impl DyadicDistance {
    pub fn scale(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    /// Numerator over `2^k`, when it fits.
    pub fn numerator(&self) -> Option<u128> {
        if self.k > 128 {
            return None;
        }
        let spare = self.mask.len() * 64 - self.k;
        let mut v: u128 = 0;
        for &w in &self.mask {
            v = (v << 64) | w as u128;
        }
        Some(v >> spare)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = 0.0;
        let mut scale = 0.5f64.powi(64);
        for &w in &self.mask {
            v += w as f64 * scale;
            scale *= 0.5f64.powi(64);
        }
        v
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mask.cmp(&other.mask)
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.numerator() {
            Some(n) => write!(f, "{n}/2^{}", self.k),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

/// Distance values; comparisons are only meaningful within one variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Hamming(u32),
    Dyadic(DyadicDistance),
    Weighted(u128),
}

impl Distance {
    pub fn to_f64(&self) -> f64 {
        match self {
            Distance::Hamming(d) => *d as f64,
            Distance::Dyadic(d) => d.to_f64(),
            Distance::Weighted(d) => d.to_f64().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Hamming,
    /// Question `i` weighs `2^-i`.
    Weighted,
    /// Integer weights per question, strictly decreasing. With
    /// `prefix_dominant`, each weight must exceed the sum of those after it.
    Custom {
        weights: Vec<u64>,
        prefix_dominant: bool,
    },
}

impl MetricKind {
    pub fn custom(weights: Vec<u64>, prefix_dominant: bool) -> Result<Self, HypercubeError> {
        if weights.contains(&0) {
            return Err(HypercubeError::BadWeights(
                "weights must be positive".into(),
            ));
        }
        if weights.windows(2).any(|w| w[0] <= w[1]) {
            return Err(HypercubeError::BadWeights(
                "weights must strictly decrease".into(),
            ));
        }
        if prefix_dominant {
            let mut tail: u128 = 0;
            for &w in weights.iter().rev() {
                if (w as u128) <= tail {
                    return Err(HypercubeError::BadWeights(format!(
                        "weight {w} does not exceed the sum {tail} of later weights"
                    )));
                }
                tail += w as u128;
            }
        }
        Ok(MetricKind::Custom {
            weights,
            prefix_dominant,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Hamming => "hamming",
            MetricKind::Weighted => "weighted",
            MetricKind::Custom { .. } => "custom",
        }
    }

    pub fn distance(&self, a: &Profile, b: &Profile) -> Result<Distance, HypercubeError> {
        match self {
            MetricKind::Hamming => hamming_distance(a, b).map(Distance::Hamming),
            MetricKind::Weighted => weighted_hamming_distance(a, b).map(Distance::Dyadic),
            MetricKind::Custom { weights, .. } => {
                if weights.len() != a.len() {
                    return Err(HypercubeError::WeightLength {
                        weights: weights.len(),
                        k: a.len(),
                    });
                }
                let mask = a.xor(b)?;
                let mut total: u128 = 0;
                for (i, &w) in weights.iter().enumerate() {
                    if mask[i / 64] >> (63 - i % 64) & 1 == 1 {
                        total += w as u128;
                    }
                }
                Ok(Distance::Weighted(total))
            }
        }
    }
}

/// Distance as a plain integer when it fits in 32 bits, without building a
/// [`Distance`]. Orders the same way as [`MetricKind::distance`].
pub(crate) fn small_distance(metric: &MetricKind, a: &Profile, b: &Profile) -> Option<u32> {
    let (wa, wb) = (a.words(), b.words());
    match metric {
        MetricKind::Hamming => Some(wa.iter().zip(wb).map(|(x, y)| (x ^ y).count_ones()).sum()),
        MetricKind::Weighted if a.len() <= 32 && wa.len() == wb.len() => match a.len() {
            0 => Some(0),
            k => Some(((wa[0] ^ wb[0]) >> (64 - k)) as u32),
        },
        _ => None,
    }
}

/// Number of questions answered differently.
pub fn hamming_distance(a: &Profile, b: &Profile) -> Result<u32, HypercubeError> {
    Ok(a.xor(b)?.iter().map(|w| w.count_ones()).sum())
}

/// `sum_i 2^-i [a_i != b_i]`, exactly.
pub fn weighted_hamming_distance(
    a: &Profile,
    b: &Profile,
) -> Result<DyadicDistance, HypercubeError> {
    Ok(DyadicDistance {
        mask: a.xor(b)?,
        k: a.len(),
    })
}
