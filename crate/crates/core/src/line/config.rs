use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use super::LineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    /// Passenger.
    Blue,
    /// Cab.
    Red,
}

/// A point of the merged configuration: colour and index within that colour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub coord: f64,
    pub color: Color,
    pub index: usize,
}

/// Sorted blue and red coordinates inside the window `[0, window]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineConfiguration {
    blues: Vec<f64>,
    reds: Vec<f64>,
    window: f64,
}

fn check(coords: &[f64], color: Color, window: f64) -> Result<(), LineError> {
    let in_window = coords.iter().all(|&c| (0.0..=window).contains(&c));
    let increasing = coords.windows(2).all(|w| w[0] < w[1]);
    if in_window && increasing {
        Ok(())
    } else {
        Err(LineError::BadCoordinates { color, window })
    }
}

impl LineConfiguration {
    pub fn new(blues: Vec<f64>, reds: Vec<f64>, window: f64) -> Result<Self, LineError> {
        if !(window > 0.0 && window.is_finite()) {
            return Err(LineError::BadWindow(window));
        }
        check(&blues, Color::Blue, window)?;
        check(&reds, Color::Red, window)?;
        Ok(LineConfiguration {
            blues,
            reds,
            window,
        })
    }

    /// Configuration from points anywhere on the line; the window is shifted
    /// to start at the leftmost point.
    pub fn from_points(blues: &[f64], reds: &[f64]) -> Result<Self, LineError> {
        let lo = blues
            .iter()
            .chain(reds)
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = blues
            .iter()
            .chain(reds)
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
        let shift = |v: &[f64]| v.iter().map(|c| c - lo).collect::<Vec<_>>();
        let window = (hi - lo).max(f64::MIN_POSITIVE);
        Self::new(shift(blues), shift(reds), window)
    }

    pub fn blues(&self) -> &[f64] {
        &self.blues
    }

    pub fn reds(&self) -> &[f64] {
        &self.reds
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn coord(&self, color: Color, index: usize) -> f64 {
        match color {
            Color::Blue => self.blues[index],
            Color::Red => self.reds[index],
        }
    }

    /// All points in coordinate order. A blue and a red at the same
    /// coordinate are ordered blue first.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.blues.len() + self.reds.len());
        let (mut i, mut j) = (0, 0);
        while i < self.blues.len() || j < self.reds.len() {
            let take_blue =
                j == self.reds.len() || (i < self.blues.len() && self.blues[i] <= self.reds[j]);
            if take_blue {
                out.push(Point {
                    coord: self.blues[i],
                    color: Color::Blue,
                    index: i,
                });
                i += 1;
            } else {
                out.push(Point {
                    coord: self.reds[j],
                    color: Color::Red,
                    index: j,
                });
                j += 1;
            }
        }
        out
    }

    /// Mirror image `x -> window - x`.
    pub fn reflected(&self) -> LineConfiguration {
        let flip = |v: &[f64]| v.iter().rev().map(|c| self.window - c).collect::<Vec<_>>();
        LineConfiguration {
            blues: flip(&self.blues),
            reds: flip(&self.reds),
            window: self.window,
        }
    }
}

fn uniform_sorted<R: Rng>(rate: f64, window: f64, rng: &mut R) -> Vec<f64> {
    if rate == 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(rate * window)
        .expect("positive mean")
        .sample(rng) as usize;
    let mut v: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * window).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Independent Poisson processes on `[0, window]`: blues at rate `lambda`,
/// reds at rate `mu`.
pub fn sample_configuration<R: Rng>(
    lambda: f64,
    mu: f64,
    window: f64,
    rng: &mut R,
) -> Result<LineConfiguration, LineError> {
    if !(lambda >= 0.0 && mu > 0.0 && lambda.is_finite() && mu.is_finite()) {
        return Err(LineError::BadRates { lambda, mu });
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(LineError::BadWindow(window));
    }
    let blues = uniform_sorted(lambda, window, rng);
    let reds = uniform_sorted(mu, window, rng);
    LineConfiguration::new(blues, reds, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn validation() {
        assert!(LineConfiguration::new(vec![1.0, 0.5], vec![], 2.0).is_err());
        assert!(LineConfiguration::new(vec![3.0], vec![], 2.0).is_err());
        assert!(LineConfiguration::new(vec![], vec![], 0.0).is_err());
        assert!(sample_configuration(-1.0, 1.0, 1.0, &mut substream(0, "t", 0)).is_err());
    }

    #[test]
    fn zero_lambda_has_no_blues_and_seed_repeats() {
        let c = sample_configuration(0.0, 2.0, 10.0, &mut substream(5, "t", 0)).unwrap();
        assert!(c.blues().is_empty());
        let a = sample_configuration(1.0, 2.0, 10.0, &mut substream(5, "t", 1)).unwrap();
        let b = sample_configuration(1.0, 2.0, 10.0, &mut substream(5, "t", 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merged_order_and_reflection() {
        let c = LineConfiguration::new(vec![1.0, 2.0], vec![0.0, 1.5], 3.0).unwrap();
        let colors: Vec<Color> = c.points().iter().map(|p| p.color).collect();
        assert_eq!(
            colors,
            vec![Color::Red, Color::Blue, Color::Red, Color::Blue]
        );
        let r = c.reflected();
        assert_eq!(r.blues(), &[1.0, 2.0]);
        assert_eq!(r.reds(), &[1.5, 3.0]);
        assert_eq!(r.reflected(), c);
    }
}
