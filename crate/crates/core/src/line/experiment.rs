use rayon::prelude::*;
use serde::Serialize;

use super::busy::BusyCycleParams;
use super::config::{sample_configuration, LineConfiguration};
use super::matching::{is_nested, queue_match, stable_match_line, Direction, LineMatching};
use super::waves::{potential_waves, WaveDecomposition};
use super::LineError;
use crate::rng::substream;
use crate::stats::{ratio_estimate, MeanEstimate};

pub const SUITE: &str = "line";

/// Width of the band at each end of the window whose waves are discarded:
/// twenty mean busy cycles.
pub fn boundary_margin(lambda: f64, mu: f64) -> f64 {
    20.0 / (mu - lambda)
}

/// `(1 + ln((mu+lambda)/(mu-lambda))) / (mu-lambda)`.
pub fn mean_distance_bound(lambda: f64, mu: f64) -> f64 {
    (1.0 + ((mu + lambda) / (mu - lambda)).ln()) / (mu - lambda)
}

/// `(1 + (mu+lambda)/(mu-lambda)) / (mu-lambda)`.
pub fn corollary_bound(lambda: f64, mu: f64) -> f64 {
    (1.0 + (mu + lambda) / (mu - lambda)) / (mu - lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineExperimentConfig {
    pub lambda: f64,
    pub mu: f64,
    pub window: f64,
    pub trials: usize,
    pub seed: u64,
    pub tail_grid: Vec<f64>,
    /// Keep one record per interior blue and matcher.
    pub keep_records: bool,
}

impl LineExperimentConfig {
    pub fn params(&self) -> Result<BusyCycleParams, LineError> {
        let p = BusyCycleParams::new(self.lambda, self.mu)?;
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(LineError::BadWindow(self.window));
        }
        let margin = boundary_margin(self.lambda, self.mu);
        if self.window <= 2.0 * margin {
            return Err(LineError::NoInterior {
                window: self.window,
                margin,
            });
        }
        Ok(p)
    }
}

/// One sampled configuration with its three matchings and waves.
#[derive(Clone, Debug)]
pub struct LineTrial {
    pub index: u64,
    pub config: LineConfiguration,
    pub stable: LineMatching,
    pub forward: LineMatching,
    pub backward: LineMatching,
    pub waves: WaveDecomposition,
    pub margin: f64,
}

pub fn run_trial(cfg: &LineExperimentConfig, trial: u64) -> Result<LineTrial, LineError> {
    cfg.params()?;
    let mut rng = substream(cfg.seed, SUITE, trial);
    let config = sample_configuration(cfg.lambda, cfg.mu, cfg.window, &mut rng)?;
    let margin = boundary_margin(cfg.lambda, cfg.mu);
    Ok(LineTrial {
        index: trial,
        stable: stable_match_line(&config),
        forward: queue_match(&config, Direction::Forward),
        backward: queue_match(&config, Direction::Backward),
        waves: potential_waves(&config, margin),
        config,
        margin,
    })
}

/// Samples taken once per reference point `margin, 2*margin, ...`, so that
/// distinct samples depend on essentially disjoint stretches of the line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceSamples {
    /// `N+` of the first blue right of each reference.
    pub n_plus: Vec<usize>,
    /// Forward-queue distance of that blue.
    pub forward: Vec<f64>,
    /// Backward-queue distance of the last blue left of each reference.
    pub backward: Vec<f64>,
}

pub fn reference_samples(trial: &LineTrial) -> ReferenceSamples {
    let blues = trial.config.blues();
    let reds = trial.config.reds();
    let window = trial.config.window();
    let mut out = ReferenceSamples::default();
    let mut t = trial.margin;
    while t <= window - trial.margin {
        let after = blues.partition_point(|&c| c <= t);
        if after < blues.len() {
            let (w, pos) = trial.waves.blue_wave[after];
            let wave = &trial.waves.waves[w];
            if wave.ends_red {
                out.n_plus.push(wave.sides(pos).0);
            }
            if let Some(r) = trial.forward.blue_partner[after] {
                out.forward.push(reds[r] - blues[after]);
            }
        }
        if after > 0 {
            let b = after - 1;
            if let Some(r) = trial.backward.blue_partner[b] {
                out.backward.push(blues[b] - reds[r]);
            }
        }
        t += trial.margin;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Matcher {
    Stable,
    Fq,
    Bq,
}

impl Matcher {
    pub fn as_str(self) -> &'static str {
        match self {
            Matcher::Stable => "stable",
            Matcher::Fq => "fq",
            Matcher::Bq => "bq",
        }
    }
}

/// One interior blue under one matcher.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlueRecord {
    pub trial: u64,
    pub wave_id: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub blue_coord: f64,
    pub x: Option<f64>,
    pub matched_red_coord: Option<f64>,
    pub matcher: Matcher,
}

#[derive(Clone, Debug, Default)]
struct TrialSummary {
    waves: usize,
    blues: usize,
    sum_x: [f64; 3],
    count_x: [usize; 3],
    tail: Vec<usize>,
    wave_count_violations: usize,
    cross_wave_pairs: usize,
    sandwich_violations: usize,
    nesting_failures: usize,
    refs: ReferenceSamples,
    records: Vec<BlueRecord>,
}

fn summarize(cfg: &LineExperimentConfig, trial: &LineTrial) -> TrialSummary {
    let c = &trial.config;
    let mut s = TrialSummary {
        tail: vec![0; cfg.tail_grid.len()],
        ..Default::default()
    };
    let matchers = [
        (Matcher::Stable, &trial.stable),
        (Matcher::Fq, &trial.forward),
        (Matcher::Bq, &trial.backward),
    ];
    for (_, m) in &matchers {
        if !is_nested(c, m) {
            s.nesting_failures += 1;
        }
    }
    // A level holding a single red belongs to no blue.
    for wave in trial.waves.interior().filter(|w| w.n() > 0) {
        s.waves += 1;
        if wave.reds.len() != wave.blues.len() + 1 {
            s.wave_count_violations += 1;
        }
        let coords = wave.coords(c);
        for (j, &b) in wave.blues.iter().enumerate() {
            s.blues += 1;
            let (n_plus, n_minus) = wave.sides(j);
            let here = coords[2 * j + 1];
            let nearest = (coords[2 * j + 2] - here).min(here - coords[2 * j]);
            let widest = (coords[coords.len() - 1] - here).max(here - coords[0]);
            for (k, (matcher, m)) in matchers.iter().enumerate() {
                let partner = m.blue_partner[b];
                let x = partner.map(|r| (c.reds()[r] - here).abs());
                if let Some(r) = partner {
                    if trial.waves.red_wave[r].0 != wave.id {
                        s.cross_wave_pairs += 1;
                    }
                }
                if let Some(x) = x {
                    s.sum_x[k] += x;
                    s.count_x[k] += 1;
                    if *matcher == Matcher::Stable {
                        if x < nearest || x > widest {
                            s.sandwich_violations += 1;
                        }
                        for (g, &r) in cfg.tail_grid.iter().enumerate() {
                            if x > r {
                                s.tail[g] += 1;
                            }
                        }
                    }
                }
                if cfg.keep_records {
                    s.records.push(BlueRecord {
                        trial: trial.index,
                        wave_id: wave.id,
                        n_plus,
                        n_minus,
                        blue_coord: here,
                        x,
                        matched_red_coord: partner.map(|r| c.reds()[r]),
                        matcher: *matcher,
                    });
                }
            }
        }
    }
    s.refs = reference_samples(trial);
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LineStats {
    pub lambda: f64,
    pub mu: f64,
    pub window: f64,
    pub margin: f64,
    pub trials: usize,
    /// Interior waves with at least one blue.
    pub interior_waves: usize,
    pub interior_blues: usize,
    /// Stable-matching distance over interior blues.
    pub mean_x: MeanStat,
    pub mean_forward: MeanStat,
    pub mean_backward: MeanStat,
    /// `(r, P(X > r))` for the stable matching.
    pub tail: Vec<(f64, f64)>,
    /// Counts of `N+ = j` at index `j`, from reference blues.
    pub n_plus_histogram: Vec<u64>,
    /// Forward-queue distances from reference blues.
    pub reference_forward_mean: MeanStat,
    pub wave_count_violations: usize,
    pub cross_wave_pairs: usize,
    pub sandwich_violations: usize,
    pub nesting_failures: usize,
    pub mean_distance_bound: f64,
    pub corollary_bound: f64,
    pub busy_cycle_mean: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MeanStat {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl From<MeanEstimate> for MeanStat {
    fn from(m: MeanEstimate) -> Self {
        MeanStat {
            mean: m.mean,
            std_error: m.std_error,
            count: m.count,
        }
    }
}

/// Run `cfg.trials` independent windows and aggregate in trial order.
pub fn line_experiment(
    cfg: &LineExperimentConfig,
) -> Result<(LineStats, Vec<BlueRecord>), LineError> {
    run(cfg).map(|(stats, records, _)| (stats, records))
}

/// As [`line_experiment`], also returning the pooled reference samples.
pub fn line_experiment_with_references(
    cfg: &LineExperimentConfig,
) -> Result<(LineStats, ReferenceSamples), LineError> {
    run(cfg).map(|(stats, _, refs)| (stats, refs))
}

fn run(
    cfg: &LineExperimentConfig,
) -> Result<(LineStats, Vec<BlueRecord>, ReferenceSamples), LineError> {
    let params = cfg.params()?;
    let summaries = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, t).map(|trial| summarize(cfg, &trial)))
        .collect::<Result<Vec<_>, _>>()?;

    let batches = |k: usize| -> Vec<(f64, usize)> {
        summaries
            .iter()
            .map(|s| (s.sum_x[k], s.count_x[k]))
            .collect()
    };
    let stable_count: usize = summaries.iter().map(|s| s.count_x[0]).sum();
    let tail = cfg
        .tail_grid
        .iter()
        .enumerate()
        .map(|(g, &r)| {
            let hits: usize = summaries.iter().map(|s| s.tail[g]).sum();
            (r, hits as f64 / stable_count.max(1) as f64)
        })
        .collect();
    let mut n_plus_histogram: Vec<u64> = Vec::new();
    for s in &summaries {
        for &n in &s.refs.n_plus {
            if n_plus_histogram.len() <= n {
                n_plus_histogram.resize(n + 1, 0);
            }
            n_plus_histogram[n] += 1;
        }
    }
    let ref_batches: Vec<(f64, usize)> = summaries
        .iter()
        .map(|s| (s.refs.forward.iter().sum(), s.refs.forward.len()))
        .collect();
    let sum = |f: fn(&TrialSummary) -> usize| summaries.iter().map(f).sum::<usize>();
    let stats = LineStats {
        lambda: cfg.lambda,
        mu: cfg.mu,
        window: cfg.window,
        margin: boundary_margin(cfg.lambda, cfg.mu),
        trials: cfg.trials,
        interior_waves: sum(|s| s.waves),
        interior_blues: sum(|s| s.blues),
        mean_x: ratio_estimate(&batches(0)).into(),
        mean_forward: ratio_estimate(&batches(1)).into(),
        mean_backward: ratio_estimate(&batches(2)).into(),
        tail,
        n_plus_histogram,
        reference_forward_mean: ratio_estimate(&ref_batches).into(),
        wave_count_violations: sum(|s| s.wave_count_violations),
        cross_wave_pairs: sum(|s| s.cross_wave_pairs),
        sandwich_violations: sum(|s| s.sandwich_violations),
        nesting_failures: sum(|s| s.nesting_failures),
        mean_distance_bound: mean_distance_bound(cfg.lambda, cfg.mu),
        corollary_bound: corollary_bound(cfg.lambda, cfg.mu),
        busy_cycle_mean: params.mean(),
    };
    let mut refs = ReferenceSamples::default();
    let mut records = Vec::new();
    for s in summaries {
        refs.n_plus.extend(s.refs.n_plus);
        refs.forward.extend(s.refs.forward);
        refs.backward.extend(s.refs.backward);
        records.extend(s.records);
    }
    Ok((stats, records, refs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LineExperimentConfig {
        LineExperimentConfig {
            lambda: 1.0,
            mu: 2.0,
            window: 400.0,
            trials: 4,
            seed: 11,
            tail_grid: vec![0.5, 1.0, 2.0],
            keep_records: true,
        }
    }

    #[test]
    fn refuses_heavy_tail_regime() {
        let mut c = cfg();
        c.lambda = 2.0;
        assert!(matches!(
            line_experiment(&c),
            Err(LineError::NotSubcritical { .. })
        ));
        c.lambda = 1.0;
        c.window = 10.0;
        assert!(matches!(
            line_experiment(&c),
            Err(LineError::NoInterior { .. })
        ));
    }

    #[test]
    fn deterministic_and_structurally_clean() {
        let (a, ra) = line_experiment(&cfg()).unwrap();
        let (b, rb) = line_experiment(&cfg()).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra, rb);
        assert_eq!(a.wave_count_violations, 0);
        assert_eq!(a.cross_wave_pairs, 0);
        assert_eq!(a.sandwich_violations, 0);
        assert_eq!(a.nesting_failures, 0);
        assert!(a.interior_blues > 0);
        assert_eq!(ra.len(), 3 * a.interior_blues);
        assert!(a.tail.windows(2).all(|w| w[0].1 >= w[1].1));
    }

    #[test]
    fn bound_formulas() {
        assert!((mean_distance_bound(1.0, 2.0) - (1.0 + 3f64.ln())).abs() < 1e-15);
        assert_eq!(corollary_bound(1.0, 2.0), 4.0);
        assert_eq!(boundary_margin(1.0, 3.0), 10.0);
    }
}
