use std::collections::BTreeMap;

use super::config::{Color, LineConfiguration};

/// Reds minus blues strictly between coordinates `x` and `y`.
pub fn discrepancy(config: &LineConfiguration, x: f64, y: f64) -> i64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let count = |v: &[f64]| {
        let a = v.partition_point(|&c| c <= lo);
        let b = v.partition_point(|&c| c < hi);
        b.saturating_sub(a) as i64
    };
    count(config.reds()) - count(config.blues())
}

/// Reds and blues sharing one walk level, in coordinate order.
///
/// Walking left to right, the height rises by one at each red and falls by
/// one at each blue. A red's level is its height after the step, a blue's
/// the height before. A blue and a red have zero discrepancy exactly when
/// their levels agree, so each level is one wave: red, blue, red, ..., red
/// when the window holds it entirely.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialWave {
    pub id: usize,
    pub level: i64,
    /// Red indices, left to right.
    pub reds: Vec<usize>,
    /// Blue indices, left to right.
    pub blues: Vec<usize>,
    pub starts_red: bool,
    pub ends_red: bool,
    /// Starts and ends with a red inside the window.
    pub complete: bool,
    /// Complete and every point within the boundary margin.
    pub interior: bool,
}

impl PotentialWave {
    /// Number of blues in the class.
    pub fn n(&self) -> usize {
        self.blues.len()
    }

    /// `(N+, N-)` for the blue at position `j`: reds of the wave seen to
    /// its right and to its left inside the window.
    pub fn sides(&self, j: usize) -> (usize, usize) {
        let left = j + usize::from(self.starts_red);
        (self.reds.len() - left, left)
    }

    /// Coordinates in wave order.
    pub fn coords(&self, config: &LineConfiguration) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.reds.len() + self.blues.len());
        let (mut r, mut b) = (self.reds.iter(), self.blues.iter());
        let mut red_turn = self.starts_red;
        loop {
            let next = if red_turn {
                r.next().map(|&i| config.reds()[i])
            } else {
                b.next().map(|&i| config.blues()[i])
            };
            match next {
                Some(c) => out.push(c),
                None => break,
            }
            red_turn = !red_turn;
        }
        out
    }

    /// Consecutive differences of [`coords`](Self::coords).
    pub fn gaps(&self, config: &LineConfiguration) -> Vec<f64> {
        self.coords(config)
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveDecomposition {
    pub waves: Vec<PotentialWave>,
    /// `(wave id, position within its wave)` per blue.
    pub blue_wave: Vec<(usize, usize)>,
    pub red_wave: Vec<(usize, usize)>,
}

impl WaveDecomposition {
    pub fn interior(&self) -> impl Iterator<Item = &PotentialWave> {
        self.waves.iter().filter(|w| w.interior)
    }
}

/// Split the configuration into waves; `margin` sets the interior band
/// `[margin, window - margin]`.
pub fn potential_waves(config: &LineConfiguration, margin: f64) -> WaveDecomposition {
    let mut by_level: BTreeMap<i64, (Vec<(f64, Color, usize)>, bool)> = BTreeMap::new();
    let mut h: i64 = 0;
    for p in config.points() {
        let level = match p.color {
            Color::Red => {
                h += 1;
                h
            }
            Color::Blue => {
                h -= 1;
                h + 1
            }
        };
        by_level
            .entry(level)
            .or_default()
            .0
            .push((p.coord, p.color, p.index));
    }
    let lo = margin;
    let hi = config.window() - margin;
    let mut waves = Vec::with_capacity(by_level.len());
    let mut blue_wave = vec![(usize::MAX, 0); config.blues().len()];
    let mut red_wave = vec![(usize::MAX, 0); config.reds().len()];
    for (level, (members, _)) in by_level {
        let id = waves.len();
        let starts_red = members.first().is_some_and(|m| m.1 == Color::Red);
        let ends_red = members.last().is_some_and(|m| m.1 == Color::Red);
        let complete = starts_red && ends_red;
        let interior = complete
            && members.first().is_some_and(|m| m.0 >= lo)
            && members.last().is_some_and(|m| m.0 <= hi);
        let mut reds = Vec::new();
        let mut blues = Vec::new();
        for &(_, color, index) in &members {
            match color {
                Color::Red => {
                    red_wave[index] = (id, reds.len());
                    reds.push(index);
                }
                Color::Blue => {
                    blue_wave[index] = (id, blues.len());
                    blues.push(index);
                }
            }
        }
        waves.push(PotentialWave {
            id,
            level,
            reds,
            blues,
            starts_red,
            ends_red,
            complete,
            interior,
        });
    }
    WaveDecomposition {
        waves,
        blue_wave,
        red_wave,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrepancy_counts_open_interval() {
        let c = LineConfiguration::new(vec![1.0, 5.0], vec![0.0, 2.0, 3.0, 6.0], 6.0).unwrap();
        assert_eq!(discrepancy(&c, 1.0, 2.0), 0);
        assert_eq!(discrepancy(&c, 0.0, 6.0), 0);
        assert_eq!(discrepancy(&c, 1.0, 6.0), 1);
        assert_eq!(discrepancy(&c, 6.0, 1.0), 1);
    }

    #[test]
    fn single_wave() {
        let c = LineConfiguration::new(vec![1.0], vec![0.0, 2.0], 2.0).unwrap();
        let d = potential_waves(&c, 0.0);
        let complete: Vec<_> = d.waves.iter().filter(|w| w.complete).collect();
        assert_eq!(complete.len(), 1);
        assert_eq!(complete[0].n(), 1);
        assert_eq!(complete[0].reds.len(), 2);
        assert_eq!(complete[0].sides(0), (1, 1));
        assert_eq!(complete[0].gaps(&c), vec![1.0, 1.0]);
    }

    #[test]
    fn separated_patterns_give_separate_waves() {
        let c = LineConfiguration::new(vec![1.0, 11.0], vec![0.0, 2.0, 10.0, 12.0], 12.0).unwrap();
        let d = potential_waves(&c, 0.0);
        let complete: Vec<_> = d.waves.iter().filter(|w| w.complete && w.n() > 0).collect();
        assert_eq!(complete.len(), 2);
        assert_ne!(d.blue_wave[0].0, d.blue_wave[1].0);
    }
}
