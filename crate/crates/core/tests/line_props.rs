use num_traits::ToPrimitive;
use proptest::prelude::*;
use proxmatch::exact::{expected_greedy_cost, greedy_cost, GapSequence, Rational, TiePolicy};
use proxmatch::line::*;
use proxmatch::numeric::integrate;
use proxmatch::rng::substream;
use proxmatch::stats::{ks_one_sample, ks_two_sample, mean_estimate};

/// Up to 10 points at distinct half-integer coordinates with random colours.
fn small_config() -> impl Strategy<Value = LineConfiguration> {
    prop::sample::subsequence((0..60).collect::<Vec<i32>>(), 0..=10)
        .prop_flat_map(|pos| {
            let n = pos.len();
            (Just(pos), prop::collection::vec(any::<bool>(), n))
        })
        .prop_map(|(pos, colors)| {
            let mut blues = Vec::new();
            let mut reds = Vec::new();
            for (p, is_blue) in pos.into_iter().zip(colors) {
                let c = p as f64 / 2.0;
                if is_blue {
                    blues.push(c);
                } else {
                    reds.push(c);
                }
            }
            LineConfiguration::new(blues, reds, 30.0).unwrap()
        })
}

fn poisson_config() -> impl Strategy<Value = LineConfiguration> {
    (any::<u64>(), 0.2f64..1.8).prop_map(|(seed, lambda)| {
        sample_configuration(lambda, 2.0, 30.0, &mut substream(seed, "line-props", 0)).unwrap()
    })
}

/// Closest pair first, leftmost blue then leftmost red on ties. Cubic.
fn naive_stable(c: &LineConfiguration) -> Vec<Option<usize>> {
    let (blues, reds) = (c.blues(), c.reds());
    let mut bp = vec![None; blues.len()];
    let mut rp = vec![None; reds.len()];
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for b in 0..blues.len() {
            for r in 0..reds.len() {
                if bp[b].is_some() || rp[r].is_some() {
                    continue;
                }
                let d = (blues[b] - reds[r]).abs();
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, b, r));
                }
            }
        }
        match best {
            Some((_, b, r)) => {
                bp[b] = Some(r);
                rp[r] = Some(b);
            }
            None => return bp,
        }
    }
}

/// Every `(blue, red)` pair that some nested partial matching contains.
fn nested_pairs_by_enumeration(c: &LineConfiguration) -> Vec<(usize, usize)> {
    let mut found = vec![vec![false; c.reds().len()]; c.blues().len()];
    let mut assign = vec![None; c.blues().len()];
    fn nested(c: &LineConfiguration, assign: &[Option<usize>]) -> bool {
        let segs: Vec<(f64, f64)> = assign
            .iter()
            .enumerate()
            .filter_map(|(b, r)| r.map(|r| (c.blues()[b], c.reds()[r])))
            .map(|(x, y)| (x.min(y), x.max(y)))
            .collect();
        for (i, a) in segs.iter().enumerate() {
            for b in &segs[i + 1..] {
                let disjoint = a.1 < b.0 || b.1 < a.0;
                let inside = (a.0 < b.0 && b.1 < a.1) || (b.0 < a.0 && a.1 < b.1);
                if !disjoint && !inside {
                    return false;
                }
            }
        }
        let matched_red = |r: usize| assign.contains(&Some(r));
        let uncovered = |x: f64| segs.iter().all(|s| !(s.0 < x && x < s.1));
        let blue_ok = (0..c.blues().len()).all(|b| assign[b].is_some() || uncovered(c.blues()[b]));
        let red_ok = (0..c.reds().len()).all(|r| matched_red(r) || uncovered(c.reds()[r]));
        blue_ok && red_ok
    }
    fn go(
        c: &LineConfiguration,
        b: usize,
        assign: &mut Vec<Option<usize>>,
        found: &mut Vec<Vec<bool>>,
    ) {
        if b == assign.len() {
            if nested(c, assign) {
                for (bb, r) in assign.iter().enumerate() {
                    if let Some(r) = r {
                        found[bb][*r] = true;
                    }
                }
            }
            return;
        }
        go(c, b + 1, assign, found);
        for r in 0..c.reds().len() {
            if !assign.contains(&Some(r)) {
                assign[b] = Some(r);
                go(c, b + 1, assign, found);
                assign[b] = None;
            }
        }
    }
    go(c, 0, &mut assign, &mut found);
    let mut out = Vec::new();
    for (b, row) in found.iter().enumerate() {
        for (r, &f) in row.iter().enumerate() {
            if f {
                out.push((b, r));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn stable_matches_closest_pair_oracle(c in small_config()) {
        let m = stable_match_line(&c);
        prop_assert_eq!(&m.blue_partner, &naive_stable(&c));
        prop_assert!(line_blocking_pairs(&c, &m).is_empty());
        prop_assert!(is_nested(&c, &m));
    }

    #[test]
    fn sampled_stable_is_nested_and_unblocked(c in poisson_config()) {
        let m = stable_match_line(&c);
        prop_assert!(line_blocking_pairs(&c, &m).is_empty());
        prop_assert!(is_nested(&c, &m));
        let short = c.blues().len().min(c.reds().len());
        prop_assert_eq!(m.pairs().count(), short);
    }

    #[test]
    fn queue_matchings_are_nested_and_directed(c in poisson_config()) {
        let (blues, reds) = (c.blues(), c.reds());
        let f = queue_match(&c, Direction::Forward);
        let b = queue_match(&c, Direction::Backward);
        prop_assert!(is_nested(&c, &f));
        prop_assert!(is_nested(&c, &b));
        for (x, y) in f.pairs() {
            prop_assert!(reds[y] > blues[x]);
        }
        for (x, y) in b.pairs() {
            prop_assert!(reds[y] < blues[x]);
        }
        let fr = queue_match(&c.reflected(), Direction::Forward);
        let (nb, nr) = (blues.len(), reds.len());
        for x in 0..nb {
            prop_assert_eq!(b.blue_partner[x], fr.blue_partner[nb - 1 - x].map(|y| nr - 1 - y));
        }
    }

    #[test]
    fn zero_discrepancy_is_shared_level_and_nested_pair(c in small_config()) {
        prop_assume!(c.blues().len() + c.reds().len() <= 8);
        let d = potential_waves(&c, 0.0);
        let nested = nested_pairs_by_enumeration(&c);
        for b in 0..c.blues().len() {
            for r in 0..c.reds().len() {
                let zero = discrepancy(&c, c.blues()[b], c.reds()[r]) == 0;
                prop_assert_eq!(zero, d.blue_wave[b].0 == d.red_wave[r].0);
                prop_assert_eq!(zero, nested.contains(&(b, r)));
            }
        }
    }

    #[test]
    fn waves_alternate_and_hold_stable_pairs(c in poisson_config()) {
        let d = potential_waves(&c, 0.0);
        for w in d.waves.iter().filter(|w| w.complete) {
            prop_assert_eq!(w.reds.len(), w.blues.len() + 1);
            let mut members: Vec<(f64, bool)> = w
                .reds
                .iter()
                .map(|&r| (c.reds()[r], false))
                .chain(w.blues.iter().map(|&b| (c.blues()[b], true)))
                .collect();
            members.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (i, m) in members.iter().enumerate() {
                prop_assert_eq!(m.1, i % 2 == 1);
            }
            for &b in &w.blues {
                for &r in &w.reds {
                    prop_assert_eq!(discrepancy(&c, c.blues()[b], c.reds()[r]), 0);
                }
            }
            for pair in w.blues.windows(2) {
                prop_assert_eq!(discrepancy(&c, c.blues()[pair[0]], c.blues()[pair[1]]), 1);
            }
        }
        let m = stable_match_line(&c);
        for (b, r) in m.pairs() {
            prop_assert_eq!(d.blue_wave[b].0, d.red_wave[r].0);
        }
    }
}

fn interior_trials(seed: u64, trials: u64, window: f64) -> Vec<LineTrial> {
    let cfg = LineExperimentConfig {
        lambda: 1.0,
        mu: 2.0,
        window,
        trials: trials as usize,
        seed,
        tail_grid: vec![],
        keep_records: false,
    };
    (0..trials).map(|t| run_trial(&cfg, t).unwrap()).collect()
}

#[test]
fn wave_gaps_follow_busy_cycle_law() {
    let params = BusyCycleParams::new(1.0, 2.0).unwrap();
    let mut gaps = Vec::new();
    let mut seed = 0;
    while gaps.len() < 100_000 {
        for t in interior_trials(71 + seed, 4, 20_000.0) {
            for w in t.waves.interior().filter(|w| w.n() > 0) {
                gaps.push(w.gaps(&t.config)[0]);
            }
        }
        seed += 1;
    }
    gaps.truncate(100_000);
    gaps.sort_by(f64::total_cmp);
    let cdf = busy_cycle_cdf_sorted(|t| busy_cycle_pdf(&params, t).unwrap_or(2.0), &gaps, 1e-10);
    let ks = ks_one_sample(&gaps, &cdf);
    assert!(ks.p_value > 1e-3, "{ks:?}");
    let total = integrate(|t| busy_cycle_pdf(&params, t).unwrap_or(2.0), 0.0, 60.0, 1e-12);
    assert!((total - 1.0).abs() < 1e-6, "{total}");
}

#[test]
fn forward_and_backward_distances_share_a_law() {
    let cfg = |seed| LineExperimentConfig {
        lambda: 1.0,
        mu: 2.0,
        window: 20_000.0,
        trials: 20,
        seed,
        tail_grid: vec![],
        keep_records: false,
    };
    let (_, a) = line_experiment_with_references(&cfg(5)).unwrap();
    let (_, b) = line_experiment_with_references(&cfg(6)).unwrap();
    assert!(a.forward.len() > 10_000 && b.backward.len() > 10_000);
    let ks = ks_two_sample(&a.forward, &b.backward);
    assert!(ks.p_value > 1e-3, "{ks:?}");
}

#[test]
fn stable_cost_in_a_wave_is_the_greedy_cost_of_its_gaps() {
    // Gaps are snapped to 2^-20 so the exact and floating costs agree.
    let q = |g: f64| (g * 1_048_576.0).round().max(1.0) / 1_048_576.0;
    let mut diffs = Vec::new();
    for t in interior_trials(90, 2, 20_000.0) {
        let quantized = {
            let snap = |v: &[f64]| v.iter().map(|&c| q(c)).collect::<Vec<_>>();
            let mut blues = snap(t.config.blues());
            let mut reds = snap(t.config.reds());
            blues.dedup();
            reds.dedup();
            LineConfiguration::new(blues, reds, t.config.window()).unwrap()
        };
        if quantized.blues().len() != t.config.blues().len()
            || quantized.reds().len() != t.config.reds().len()
        {
            continue;
        }
        let stable = stable_match_line(&quantized);
        let d = potential_waves(&quantized, t.margin);
        for w in d.interior().filter(|w| (1..=3).contains(&w.n())) {
            let direct: f64 = w
                .blues
                .iter()
                .map(|&b| stable.distance(&quantized, b).unwrap())
                .sum();
            let x = GapSequence::from_f64(&w.gaps(&quantized)).unwrap();
            let greedy = greedy_cost(&x, TiePolicy::Leftmost).unwrap().to_f64().unwrap();
            assert!((greedy - direct).abs() < 1e-9, "{greedy} vs {direct}");
            let e: Rational = expected_greedy_cost(&x).unwrap();
            diffs.push(e.to_f64().unwrap() - direct);
        }
    }
    assert!(diffs.len() > 2000, "{}", diffs.len());
    let m = mean_estimate(&diffs);
    assert!(m.mean.abs() < 3.0 * m.std_error, "{m:?}");
}

#[test]
fn blue_counts_have_poisson_mean() {
    let trials = 4000;
    let counts: Vec<f64> = (0..trials)
        .map(|t| {
            let c = sample_configuration(1.0, 2.0, 20.0, &mut substream(8, "counts", t)).unwrap();
            c.blues().len() as f64
        })
        .collect();
    let m = mean_estimate(&counts);
    let sigma = (20.0f64 / trials as f64).sqrt();
    assert!((m.mean - 20.0).abs() < 3.0 * sigma, "{m:?}");
}
