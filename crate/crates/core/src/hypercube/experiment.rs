use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::metric::MetricKind;
use super::population::{
    build_instance, matching_distance, profile_groups, uniqueness_certificate, Population,
    ProfileGroup,
};
use super::HypercubeError;
use crate::matching::{
    deferred_acceptance, enumerate_stable_matchings, stable_partners_all, AgentId, Matching, Side,
    StablePartners,
};
use crate::rng::substream;
use crate::stats::{binomial_sigma, mean_estimate, median};

pub const SUITE: &str = "rpmp";

/// How agents with several stable partners are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartnerCounting {
    /// Brute-force enumeration; small markets only.
    Exhaustive,
    /// Full stable-partner sets by breaking each marriage in turn.
    AlgorithmI,
    /// Compare the men-optimal and women-optimal partner of each agent.
    Extremal,
}

impl PartnerCounting {
    pub fn as_str(self) -> &'static str {
        match self {
            PartnerCounting::Exhaustive => "exhaustive",
            PartnerCounting::AlgorithmI => "algorithm-i",
            PartnerCounting::Extremal => "extremal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RpmpConfig {
    /// Number of men; the market has `n + unbalanced_r` women.
    pub n: usize,
    pub k: usize,
    pub metric: MetricKind,
    pub trials: usize,
    pub seed: u64,
    /// Matched agents whose `X` is recorded per trial.
    pub sample_size: usize,
    pub unbalanced_r: usize,
    pub counting: PartnerCounting,
    /// Record `X` for every man as well.
    pub full_x: bool,
    pub groups: bool,
    /// Tail level for `P(X < k/2 - sqrt(beta k log2 n))`.
    pub beta: Option<f64>,
}

impl RpmpConfig {
    pub fn new(n: usize, k: usize, metric: MetricKind, trials: usize, seed: u64) -> Self {
        RpmpConfig {
            n,
            k,
            metric,
            trials,
            seed,
            sample_size: 1,
            unbalanced_r: 0,
            counting: PartnerCounting::AlgorithmI,
            full_x: false,
            groups: false,
            beta: None,
        }
    }

    pub fn n_women(&self) -> usize {
        self.n + self.unbalanced_r
    }

    pub fn validate(&self) -> Result<(), HypercubeError> {
        let bad = |m: String| Err(HypercubeError::Config(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sample_size > self.n {
            return bad(format!(
                "sample size {} exceeds the {} matched pairs",
                self.sample_size, self.n
            ));
        }
        if self.counting == PartnerCounting::Exhaustive
            && self.n_women() > crate::matching::ENUMERATION_CAP
        {
            return bad(format!(
                "exhaustive counting needs at most {} agents per side",
                crate::matching::ENUMERATION_CAP
            ));
        }
        if let MetricKind::Custom { weights, .. } = &self.metric {
            if weights.len() != self.k {
                return Err(HypercubeError::WeightLength {
                    weights: weights.len(),
                    k: self.k,
                });
            }
        }
        if let Some(beta) = self.beta {
            if !(beta > 0.0 && beta.is_finite()) {
                return bad(format!("beta must be positive, got {beta}"));
            }
        }
        Ok(())
    }

    /// `k/2 - sqrt(beta k log2 n)`.
    pub fn tail_threshold(&self) -> Option<f64> {
        let k = self.k as f64;
        self.beta
            .map(|b| k / 2.0 - (b * k * (self.n as f64).log2()).sqrt())
    }
}

/// Outcome of one market.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RpmpTrial {
    pub trial: u64,
    /// Agents, on both sides, with more than one stable partner.
    pub multiple_partner_count: usize,
    pub multiple_partner_men: usize,
    /// Men-optimal and women-optimal matchings differ.
    pub non_unique: bool,
    /// Certificate on the women's side.
    pub unique_certificate: bool,
    pub sampled_agents: Vec<AgentId>,
    pub sampled_x: Vec<f64>,
    pub full_x: Option<Vec<f64>>,
    pub groups: Option<Vec<ProfileGroup>>,
}

pub fn rpmp_trial(cfg: &RpmpConfig, trial: u64) -> Result<RpmpTrial, HypercubeError> {
    let mut rng = substream(cfg.seed, SUITE, trial);
    let mut pop = Population::sample(cfg.n, cfg.n_women(), cfg.k, &mut rng);
    pop.seed = cfg.seed;
    pop.trial = trial;
    let inst = build_instance(&pop, &cfg.metric)?;
    let men_opt = deferred_acceptance(&inst, Side::Man);
    let women_opt = deferred_acceptance(&inst, Side::Woman);

    let (men_multi, women_multi) = match cfg.counting {
        PartnerCounting::Extremal => (
            (0..inst.n_men())
                .filter(|&m| men_opt.wife_of(m) != women_opt.wife_of(m))
                .count(),
            (0..inst.n_women())
                .filter(|&w| men_opt.husband_of(w) != women_opt.husband_of(w))
                .count(),
        ),
        PartnerCounting::AlgorithmI => counts(&stable_partners_all(&inst)),
        PartnerCounting::Exhaustive => {
            let all = enumerate_stable_matchings(&inst)?;
            counts(&StablePartners::from_matchings(
                inst.n_men(),
                inst.n_women(),
                &all,
            ))
        }
    };

    // Every man is matched (complete lists, at least as many women).
    let picks = sample(&mut rng, cfg.n, cfg.sample_size);
    let mut sampled_agents = Vec::with_capacity(cfg.sample_size);
    let mut sampled_x = Vec::with_capacity(cfg.sample_size);
    for i in picks.iter() {
        let agent = pick_agent(&men_opt, i, &mut rng);
        sampled_x.push(matching_distance(&pop, &cfg.metric, &men_opt, agent)?.to_f64());
        sampled_agents.push(agent);
    }
    let full_x = if cfg.full_x {
        Some(
            (0..cfg.n)
                .map(|m| {
                    matching_distance(&pop, &cfg.metric, &men_opt, AgentId::man(m))
                        .map(|d| d.to_f64())
                })
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    Ok(RpmpTrial {
        trial,
        multiple_partner_count: men_multi + women_multi,
        multiple_partner_men: men_multi,
        non_unique: men_opt != women_opt,
        unique_certificate: uniqueness_certificate(&pop, &cfg.metric, Side::Woman)?,
        sampled_agents,
        sampled_x,
        full_x,
        groups: cfg.groups.then(|| profile_groups(&pop, &men_opt)),
    })
}

/// Pair `i` of the men-optimal matching, then one of its two sides at
/// random: a uniform draw among the matched agents.
fn pick_agent<R: rand::Rng>(mu: &Matching, i: usize, rng: &mut R) -> AgentId {
    if rng.random::<bool>() {
        AgentId::man(i)
    } else {
        AgentId::woman(mu.wife_of(i).expect("men are always matched"))
    }
}

fn counts(p: &StablePartners) -> (usize, usize) {
    (p.multiple_count(Side::Man), p.multiple_count(Side::Woman))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RpmpStats {
    pub n: usize,
    pub n_women: usize,
    pub k: usize,
    pub metric: String,
    pub counting: String,
    pub trials: usize,
    /// Multiple-partner agents over all agents and trials.
    pub fraction_multiple_stable_partners: f64,
    /// Standard error across trials.
    pub fraction_multiple_sigma: f64,
    pub fraction_multiple_men: f64,
    pub fraction_non_unique_matching: f64,
    pub fraction_certificate_false: f64,
    pub certificate_false_sigma: f64,
    pub matching_distance_samples: Vec<f64>,
    pub mean_x: f64,
    pub median_x: f64,
    /// Median of `log2 X / log2 n` over samples with `X > 0`.
    pub median_log_ratio: Option<f64>,
    pub zero_x_samples: usize,
    pub tail_threshold: Option<f64>,
    pub tail_probability: Option<f64>,
}

pub fn rpmp_experiment(cfg: &RpmpConfig) -> Result<(RpmpStats, Vec<RpmpTrial>), HypercubeError> {
    cfg.validate()?;
    let trials = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| rpmp_trial(cfg, t))
        .collect::<Result<Vec<_>, _>>()?;

    let agents = (cfg.n + cfg.n_women()) * cfg.trials;
    let multi: usize = trials.iter().map(|t| t.multiple_partner_count).sum();
    let multi_men: usize = trials.iter().map(|t| t.multiple_partner_men).sum();
    let frac = multi as f64 / agents as f64;
    // Agents of one market are far from independent, so the error comes from
    // the spread of per-market fractions.
    let per_trial: Vec<f64> = trials
        .iter()
        .map(|t| t.multiple_partner_count as f64 / (cfg.n + cfg.n_women()) as f64)
        .collect();
    let non_unique = trials.iter().filter(|t| t.non_unique).count();
    let cert_false =
        trials.iter().filter(|t| !t.unique_certificate).count() as f64 / cfg.trials as f64;
    let samples: Vec<f64> = trials
        .iter()
        .flat_map(|t| t.sampled_x.iter().copied())
        .collect();
    let zero_x_samples = samples.iter().filter(|&&x| x == 0.0).count();
    let log_n = (cfg.n as f64).log2();
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|x| x.log2() / log_n)
        .collect();
    let threshold = cfg.tail_threshold();
    let tail_probability = threshold
        .map(|th| samples.iter().filter(|&&x| x < th).count() as f64 / samples.len().max(1) as f64);
    let stats = RpmpStats {
        n: cfg.n,
        n_women: cfg.n_women(),
        k: cfg.k,
        metric: cfg.metric.name().to_string(),
        counting: cfg.counting.as_str().to_string(),
        trials: cfg.trials,
        fraction_multiple_stable_partners: frac,
        fraction_multiple_sigma: mean_estimate(&per_trial).std_error,
        fraction_multiple_men: multi_men as f64 / (cfg.n * cfg.trials) as f64,
        fraction_non_unique_matching: non_unique as f64 / cfg.trials as f64,
        fraction_certificate_false: cert_false,
        certificate_false_sigma: binomial_sigma(cert_false, cfg.trials),
        mean_x: samples.iter().sum::<f64>() / samples.len().max(1) as f64,
        median_x: median(&samples),
        median_log_ratio: (cfg.n > 1 && !ratios.is_empty()).then(|| median(&ratios)),
        zero_x_samples,
        tail_threshold: threshold,
        tail_probability,
        matching_distance_samples: samples,
    };
    Ok((stats, trials))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = RpmpConfig::new(6, 2, MetricKind::Hamming, 20, 5);
        assert_eq!(
            rpmp_experiment(&cfg).unwrap(),
            rpmp_experiment(&cfg).unwrap()
        );
    }

    #[test]
    fn counting_modes_agree() {
        let mut cfg = RpmpConfig::new(4, 1, MetricKind::Hamming, 50, 11);
        cfg.counting = PartnerCounting::Exhaustive;
        let (_, ex) = rpmp_experiment(&cfg).unwrap();
        for mode in [PartnerCounting::AlgorithmI, PartnerCounting::Extremal] {
            cfg.counting = mode;
            let (_, other) = rpmp_experiment(&cfg).unwrap();
            for (a, b) in ex.iter().zip(&other) {
                assert_eq!(a.multiple_partner_count, b.multiple_partner_count);
            }
        }
    }

    #[test]
    fn random_preferences_have_multiple_partners() {
        let mut cfg = RpmpConfig::new(8, 0, MetricKind::Hamming, 40, 3);
        cfg.counting = PartnerCounting::Exhaustive;
        let (stats, _) = rpmp_experiment(&cfg).unwrap();
        assert!(stats.fraction_multiple_stable_partners > 0.0);
    }

    #[test]
    fn config_errors() {
        let mut cfg = RpmpConfig::new(10, 1, MetricKind::Hamming, 1, 0);
        cfg.counting = PartnerCounting::Exhaustive;
        assert!(cfg.validate().is_err());
        cfg.counting = PartnerCounting::AlgorithmI;
        cfg.sample_size = 11;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn groups_balance() {
        let mut cfg = RpmpConfig::new(30, 2, MetricKind::Hamming, 5, 8);
        cfg.groups = true;
        let (_, trials) = rpmp_experiment(&cfg).unwrap();
        for t in trials {
            for g in t.groups.unwrap() {
                assert_eq!(g.cross, g.men.abs_diff(g.women));
                assert_eq!(g.within, g.men.min(g.women));
            }
        }
    }
}
