use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::config::{Color, LineConfiguration};

/// Partial blue/red pairing; `None` marks an unmatched point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineMatching {
    pub blue_partner: Vec<Option<usize>>,
    pub red_partner: Vec<Option<usize>>,
}

impl LineMatching {
    pub fn empty(config: &LineConfiguration) -> Self {
        LineMatching {
            blue_partner: vec![None; config.blues().len()],
            red_partner: vec![None; config.reds().len()],
        }
    }

    fn pair(&mut self, blue: usize, red: usize) {
        self.blue_partner[blue] = Some(red);
        self.red_partner[red] = Some(blue);
    }

    /// Matching distance of `blue`, or `None` if unmatched.
    pub fn distance(&self, config: &LineConfiguration, blue: usize) -> Option<f64> {
        self.blue_partner[blue].map(|r| (config.blues()[blue] - config.reds()[r]).abs())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blue_partner
            .iter()
            .enumerate()
            .filter_map(|(b, r)| r.map(|r| (b, r)))
    }

    pub fn unmatched_blues(&self) -> impl Iterator<Item = usize> + '_ {
        self.blue_partner
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_none())
            .map(|(b, _)| b)
    }
}

#[derive(PartialEq)]
struct Candidate {
    dist: f64,
    blue: usize,
    red: usize,
    left: usize,
    right: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.blue.cmp(&other.blue))
            .then(self.red.cmp(&other.red))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Stable matching: repeatedly pair the closest unmatched blue/red pair.
///
/// The closest pair is always adjacent among the still-unmatched points, so
/// only adjacent bicoloured pairs are kept as candidates. Equal distances go
/// to the leftmost blue, then the leftmost red.
pub fn stable_match_line(config: &LineConfiguration) -> LineMatching {
    let pts = config.points();
    let n = pts.len();
    let mut out = LineMatching::empty(config);
    if n < 2 {
        return out;
    }
    let mut prev: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1)).collect();
    let mut next: Vec<Option<usize>> = (0..n).map(|i| (i + 1 < n).then_some(i + 1)).collect();
    let mut alive = vec![true; n];
    let candidate = |l: usize, r: usize| -> Option<Candidate> {
        let (a, b) = (pts[l], pts[r]);
        if a.color == b.color {
            return None;
        }
        let (blue, red) = if a.color == Color::Blue {
            (a.index, b.index)
        } else {
            (b.index, a.index)
        };
        Some(Candidate {
            dist: b.coord - a.coord,
            blue,
            red,
            left: l,
            right: r,
        })
    };
    let mut heap: BinaryHeap<Reverse<Candidate>> = (0..n - 1)
        .filter_map(|i| candidate(i, i + 1))
        .map(Reverse)
        .collect();
    while let Some(Reverse(c)) = heap.pop() {
        if !alive[c.left] || !alive[c.right] || next[c.left] != Some(c.right) {
            continue;
        }
        out.pair(c.blue, c.red);
        alive[c.left] = false;
        alive[c.right] = false;
        let before = prev[c.left];
        let after = next[c.right];
        if let Some(p) = before {
            next[p] = after;
        }
        if let Some(q) = after {
            prev[q] = before;
        }
        if let (Some(p), Some(q)) = (before, after) {
            if let Some(nc) = candidate(p, q) {
                heap.push(Reverse(nc));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Blues are served by reds to their right.
    Forward,
    /// Blues are served by reds to their left.
    Backward,
}

/// Last-come-first-served matching: sweep in `direction`, stacking blues,
/// and let each red take the most recent waiting blue. Blues still waiting
/// when the window ends stay unmatched.
pub fn queue_match(config: &LineConfiguration, direction: Direction) -> LineMatching {
    let mut pts = config.points();
    if direction == Direction::Backward {
        pts.reverse();
    }
    let mut out = LineMatching::empty(config);
    let mut stack: Vec<usize> = Vec::new();
    for p in pts {
        match p.color {
            Color::Blue => stack.push(p.index),
            Color::Red => {
                if let Some(b) = stack.pop() {
                    out.pair(b, p.index);
                }
            }
        }
    }
    out
}

/// Segments are pairwise either disjoint or nested, and no segment contains
/// an unmatched point.
pub fn is_nested(config: &LineConfiguration, matching: &LineMatching) -> bool {
    let pts = config.points();
    let mut pos_blue = vec![0; config.blues().len()];
    let mut pos_red = vec![0; config.reds().len()];
    for (i, p) in pts.iter().enumerate() {
        match p.color {
            Color::Blue => pos_blue[p.index] = i,
            Color::Red => pos_red[p.index] = i,
        }
    }
    let mut stack: Vec<usize> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let partner = match p.color {
            Color::Blue => matching.blue_partner[p.index].map(|r| pos_red[r]),
            Color::Red => matching.red_partner[p.index].map(|b| pos_blue[b]),
        };
        match partner {
            None if !stack.is_empty() => return false,
            None => {}
            Some(j) if j > i => stack.push(j),
            Some(_) => {
                if stack.pop() != Some(i) {
                    return false;
                }
            }
        }
    }
    stack.is_empty()
}

/// Pairs `(blue, red)` that are closer to each other than to their
/// partners (unmatched counts as infinitely far). Quadratic scan.
pub fn line_blocking_pairs(config: &LineConfiguration, m: &LineMatching) -> Vec<(usize, usize)> {
    let blues = config.blues();
    let reds = config.reds();
    let d_blue: Vec<f64> = (0..blues.len())
        .map(|b| m.distance(config, b).unwrap_or(f64::INFINITY))
        .collect();
    let d_red: Vec<f64> = (0..reds.len())
        .map(|r| m.red_partner[r].map_or(f64::INFINITY, |b| (blues[b] - reds[r]).abs()))
        .collect();
    let mut out = Vec::new();
    for (b, &x) in blues.iter().enumerate() {
        for (r, &y) in reds.iter().enumerate() {
            let d = (x - y).abs();
            if d < d_blue[b] && d < d_red[r] {
                out.push((b, r));
            }
        }
    }
    out
}
