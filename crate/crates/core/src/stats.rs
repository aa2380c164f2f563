//! Summary statistics and goodness-of-fit tests used by the experiment
//! harness.

use statrs::function::gamma::gamma_ur;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

pub fn mean_estimate(samples: &[f64]) -> MeanEstimate {
    let count = samples.len();
    if count == 0 {
        return MeanEstimate {
            mean: f64::NAN,
            std_error: f64::NAN,
            count,
        };
    }
    let mean = samples.iter().sum::<f64>() / count as f64;
    let std_error = if count > 1 {
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        (var / count as f64).sqrt()
    } else {
        f64::INFINITY
    };
    MeanEstimate {
        mean,
        std_error,
        count,
    }
}

/// Pooled mean `sum(sums) / sum(counts)` over independent batches, with a
/// batch-means standard error. Batches with no observations are skipped.
pub fn ratio_estimate(batches: &[(f64, usize)]) -> MeanEstimate {
    let used: Vec<(f64, f64)> = batches
        .iter()
        .filter(|b| b.1 > 0)
        .map(|&(s, c)| (s, c as f64))
        .collect();
    let total: f64 = used.iter().map(|b| b.1).sum();
    let count = total as usize;
    if used.is_empty() {
        return MeanEstimate {
            mean: f64::NAN,
            std_error: f64::NAN,
            count,
        };
    }
    let mean = used.iter().map(|b| b.0).sum::<f64>() / total;
    let k = used.len() as f64;
    let std_error = if used.len() > 1 {
        let cbar = total / k;
        let ss: f64 = used.iter().map(|&(s, c)| (s - mean * c).powi(2)).sum();
        (ss / (k * (k - 1.0))).sqrt() / cbar
    } else {
        f64::INFINITY
    };
    MeanEstimate {
        mean,
        std_error,
        count,
    }
}

/// Standard deviation of a binomial proportion with success probability `p`
/// over `trials` draws.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Wald interval half-width at `z` standard errors.
pub fn proportion_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / trials as f64;
    let half = z * binomial_sigma(p, trials);
    ((p - half).max(0.0), (p + half).min(1.0))
}

pub fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Asymptotic Kolmogorov survival function with the Stephens small-sample
/// correction, evaluated at statistic `d` for effective size `n`.
pub fn kolmogorov_p_value(d: f64, n: f64) -> f64 {
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample KS test. `sorted` must be ascending and `cdf_at_sorted[i]` the
/// model CDF evaluated at `sorted[i]`.
pub fn ks_one_sample(sorted: &[f64], cdf_at_sorted: &[f64]) -> KsOutcome {
    assert_eq!(sorted.len(), cdf_at_sorted.len());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &f) in cdf_at_sorted.iter().enumerate() {
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    KsOutcome {
        statistic: d,
        p_value: kolmogorov_p_value(d, n),
    }
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsOutcome {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let effective = (n * m) as f64 / (n + m) as f64;
    KsOutcome {
        statistic: d,
        p_value: kolmogorov_p_value(d, effective),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit. Adjacent bins are merged from the right until
/// every expected count is at least `min_expected`.
pub fn chi_square_gof(observed: &[u64], expected: &[f64], min_expected: f64) -> ChiSquareOutcome {
    assert_eq!(observed.len(), expected.len());
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        acc.0 += o as f64;
        acc.1 += e;
        if acc.1 >= min_expected {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let statistic: f64 = bins.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let degrees_of_freedom = bins.len().saturating_sub(1).max(1);
    let p_value = if statistic > 0.0 {
        gamma_ur(degrees_of_freedom as f64 / 2.0, statistic / 2.0)
    } else {
        1.0
    };
    ChiSquareOutcome {
        statistic,
        degrees_of_freedom,
        p_value,
    }
}
