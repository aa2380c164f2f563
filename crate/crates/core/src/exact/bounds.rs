use num_traits::ToPrimitive;
use rand::Rng;

use super::{expected_greedy_cost, random_gaps, ExactError, GapSequence, Rational};

/// Slack allowed when comparing an exact value against `m(1 + ln m)`,
/// which is irrational for `m > 1`.
pub const LOG_BOUND_GUARD: f64 = 1e-12;

/// `m (1 + ln m)`.
pub fn log_bound(m: usize) -> f64 {
    let m = m as f64;
    m * (1.0 + m.ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub instances: usize,
    /// Instances with `E(x) > E(ones) * mean(x)`.
    pub mean_bound_violations: usize,
    /// Instances where `E` at the midpoint of `x` and `y` falls below the
    /// mean of `E(x)` and `E(y)`.
    pub concavity_violations: usize,
    /// `E(ones(n))`, exact.
    pub e_ones: Rational,
    pub log_bound: f64,
    pub log_bound_holds: bool,
}

/// Check `E(x) <= E(ones) * mean(x)`, midpoint concavity and
/// `E(ones) <= m(1 + ln m)` with `m = n/2`, on `instances` random sequences.
pub fn uniform_bound_check<R: Rng>(
    n: usize,
    instances: usize,
    rng: &mut R,
) -> Result<BoundReport, ExactError> {
    let ones = GapSequence::ones(n)?;
    let e_ones = expected_greedy_cost(&ones)?;
    let half = Rational::new(1.into(), 2.into());
    let mut mean_bound_violations = 0;
    let mut concavity_violations = 0;
    for _ in 0..instances {
        let x = random_gaps(n, rng);
        let y = random_gaps(n, rng);
        let ex = expected_greedy_cost(&x)?;
        let ey = expected_greedy_cost(&y)?;
        if ex > &e_ones * x.mean() {
            mean_bound_violations += 1;
        }
        let mid = expected_greedy_cost(&x.interpolate(&y, &half)?)?;
        if mid < (ex + ey) * &half {
            concavity_violations += 1;
        }
    }
    let bound = log_bound(n / 2);
    let value = e_ones.to_f64().unwrap_or(f64::INFINITY);
    Ok(BoundReport {
        n,
        instances,
        mean_bound_violations,
        concavity_violations,
        log_bound_holds: value <= bound + LOG_BOUND_GUARD,
        e_ones,
        log_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use num_traits::One;

    #[test]
    fn small_n_report_is_clean() {
        let rep = uniform_bound_check(4, 20, &mut substream(3, "bounds", 0)).unwrap();
        assert_eq!(rep.mean_bound_violations, 0);
        assert_eq!(rep.concavity_violations, 0);
        assert!(rep.log_bound_holds);
        assert_eq!(rep.e_ones, Rational::from_integer(2.into()));
    }

    #[test]
    fn one_pair_is_tight() {
        assert_eq!(log_bound(1), 1.0);
        let ones = GapSequence::ones(2).unwrap();
        assert_eq!(expected_greedy_cost(&ones).unwrap(), Rational::one());
    }
}
