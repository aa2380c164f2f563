use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::metric::{small_distance, Distance, MetricKind};
use super::profile::Profile;
use super::HypercubeError;
use crate::matching::{AgentId, Matching, MatchingInstance, Side};
use crate::rng::substream;

/// Profiles and tie-break lists for one RPMP-k market.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    pub k: usize,
    pub men: Vec<Profile>,
    pub women: Vec<Profile>,
    /// `men_ties[m]` is a permutation of women; earlier entries win ties.
    pub men_ties: Vec<Vec<usize>>,
    pub women_ties: Vec<Vec<usize>>,
    pub seed: u64,
    pub trial: u64,
}

impl Population {
    /// Draws profiles with i.i.d. fair bits and uniform tie-break lists.
    pub fn sample<R: Rng>(n_men: usize, n_women: usize, k: usize, rng: &mut R) -> Self {
        let men = (0..n_men).map(|_| Profile::random(k, rng)).collect();
        let women = (0..n_women).map(|_| Profile::random(k, rng)).collect();
        let perm = |len: usize, rng: &mut R| {
            let mut p: Vec<usize> = (0..len).collect();
            p.shuffle(rng);
            p
        };
        let men_ties = (0..n_men).map(|_| perm(n_women, rng)).collect();
        let women_ties = (0..n_women).map(|_| perm(n_men, rng)).collect();
        Population {
            k,
            men,
            women,
            men_ties,
            women_ties,
            seed: 0,
            trial: 0,
        }
    }

    pub fn n_men(&self) -> usize {
        self.men.len()
    }

    pub fn n_women(&self) -> usize {
        self.women.len()
    }

    pub fn profile(&self, agent: AgentId) -> &Profile {
        match agent.side {
            Side::Man => &self.men[agent.index],
            Side::Woman => &self.women[agent.index],
        }
    }

    fn opposite_profiles(&self, side: Side) -> &[Profile] {
        match side {
            Side::Man => &self.women,
            Side::Woman => &self.men,
        }
    }

    fn ties(&self, agent: AgentId) -> &[usize] {
        match agent.side {
            Side::Man => &self.men_ties[agent.index],
            Side::Woman => &self.women_ties[agent.index],
        }
    }
}

/// Population for trial `trial` of a run seeded with `seed`.
pub fn sample_population(
    n_men: usize,
    n_women: usize,
    k: usize,
    seed: u64,
    trial: u64,
) -> Population {
    let mut rng = substream(seed, "rpmp", trial);
    let mut pop = Population::sample(n_men, n_women, k, &mut rng);
    pop.seed = seed;
    pop.trial = trial;
    pop
}

fn ranked_list(
    pop: &Population,
    metric: &MetricKind,
    agent: AgentId,
) -> Result<Vec<usize>, HypercubeError> {
    let me = pop.profile(agent);
    let others = pop.opposite_profiles(agent.side);
    let same_len = others.first().is_none_or(|o| o.len() == me.len());
    let mut tie_rank = vec![0usize; others.len()];
    for (r, &o) in pop.ties(agent).iter().enumerate() {
        tie_rank[o] = r;
    }
    if others.len() < 1 << 32 && same_len {
        // Pack (distance, tie rank) into one word when the distance is small.
        let small: Option<Vec<u64>> = others
            .iter()
            .zip(&tie_rank)
            .map(|(p, &r)| small_distance(metric, me, p).map(|d| (d as u64) << 32 | r as u64))
            .collect();
        if let Some(mut small) = small {
            small.sort_unstable();
            let ties = pop.ties(agent);
            return Ok(small
                .into_iter()
                .map(|key| ties[(key & 0xffff_ffff) as usize])
                .collect());
        }
    }
    let mut keyed: Vec<(Distance, usize, usize)> = Vec::with_capacity(others.len());
    for (j, p) in others.iter().enumerate() {
        keyed.push((metric.distance(me, p)?, tie_rank[j], j));
    }
    keyed.sort_unstable();
    Ok(keyed.into_iter().map(|t| t.2).collect())
}

/// Hamming order for profiles held in one word: counting sort on the
/// distance, visiting candidates in tie order.
fn one_word_hamming_list(me: u64, others: &[u64], ties: &[usize], k: usize) -> Vec<usize> {
    let mut start = vec![0usize; k + 2];
    let dist: Vec<u8> = ties.iter().map(|&j| (me ^ others[j]).count_ones() as u8).collect();
    for &d in &dist {
        start[d as usize + 1] += 1;
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut out = vec![0usize; ties.len()];
    for (&j, &d) in ties.iter().zip(&dist) {
        out[start[d as usize]] = j;
        start[d as usize] += 1;
    }
    out
}

/// Complete preference lists ordered by distance, ties broken by each
/// agent's tie-break list.
pub fn build_instance(
    pop: &Population,
    metric: &MetricKind,
) -> Result<MatchingInstance, HypercubeError> {
    let one_word = matches!(metric, MetricKind::Hamming)
        && pop.k <= 64
        && pop.men.iter().chain(&pop.women).all(|p| p.len() == pop.k);
    let first_words = |ps: &[Profile]| -> Vec<u64> {
        ps.iter().map(|p| p.words().first().copied().unwrap_or(0)).collect()
    };
    let (men_words, women_words) = if one_word {
        (first_words(&pop.men), first_words(&pop.women))
    } else {
        (Vec::new(), Vec::new())
    };
    let side_lists = |side: Side, n: usize| {
        (0..n)
            .map(|i| {
                let agent = AgentId { side, index: i };
                if !one_word {
                    return ranked_list(pop, metric, agent);
                }
                let (mine, theirs) = match side {
                    Side::Man => (&men_words, &women_words),
                    Side::Woman => (&women_words, &men_words),
                };
                Ok(one_word_hamming_list(mine[i], theirs, pop.ties(agent), pop.k))
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let men = side_lists(Side::Man, pop.n_men())?;
    let women = side_lists(Side::Woman, pop.n_women())?;
    Ok(
        MatchingInstance::new(pop.n_men(), pop.n_women(), men, women)
            .expect("ranked lists are permutations"),
    )
}

/// Distance between `agent` and its partner in `matching`.
pub fn matching_distance(
    pop: &Population,
    metric: &MetricKind,
    matching: &Matching,
    agent: AgentId,
) -> Result<Distance, HypercubeError> {
    let partner = matching
        .partner(agent)
        .ok_or(HypercubeError::Unmatched(agent))?;
    metric.distance(pop.profile(agent), pop.profile(partner))
}

/// True when every agent on `side` sees pairwise distinct distances to the
/// opposite side.
pub fn uniqueness_certificate(
    pop: &Population,
    metric: &MetricKind,
    side: Side,
) -> Result<bool, HypercubeError> {
    let (own, others) = match side {
        Side::Man => (&pop.men, &pop.women),
        Side::Woman => (&pop.women, &pop.men),
    };
    match metric {
        MetricKind::Hamming if others.len() > pop.k + 1 => return Ok(false),
        // XOR with a fixed profile is injective, so distinct distances from
        // any one agent means distinct profiles opposite.
        MetricKind::Weighted if !own.is_empty() && own.iter().all(|p| p.len() == pop.k) => {
            let mut sorted: Vec<&Profile> = others.iter().collect();
            sorted.sort_unstable();
            return match sorted.iter().find(|p| p.len() != pop.k) {
                Some(p) => Err(HypercubeError::LengthMismatch(pop.k, p.len())),
                None => Ok(sorted.windows(2).all(|w| w[0] != w[1])),
            };
        }
        _ => {}
    }
    for me in own {
        let mut d = others
            .iter()
            .map(|o| metric.distance(me, o))
            .collect::<Result<Vec<_>, _>>()?;
        d.sort_unstable();
        if d.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Agents sharing one profile: `men` is |M_a|, `women` is |W_a|, and
/// `cross` counts those matched to a different profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileGroup {
    pub profile: String,
    pub men: usize,
    pub women: usize,
    pub cross: usize,
    /// Pairs matched inside the group.
    pub within: usize,
}

fn entry<'a, 'p>(
    groups: &'a mut BTreeMap<&'p Profile, ProfileGroup>,
    p: &'p Profile,
) -> &'a mut ProfileGroup {
    groups.entry(p).or_insert_with(|| ProfileGroup {
        profile: p.to_string(),
        men: 0,
        women: 0,
        cross: 0,
        within: 0,
    })
}

pub fn profile_groups(pop: &Population, matching: &Matching) -> Vec<ProfileGroup> {
    let mut groups: BTreeMap<&Profile, ProfileGroup> = BTreeMap::new();
    for (m, p) in pop.men.iter().enumerate() {
        let g = entry(&mut groups, p);
        g.men += 1;
        match matching.wife_of(m) {
            Some(w) if &pop.women[w] == p => g.within += 1,
            Some(_) => g.cross += 1,
            None => {}
        }
    }
    for (w, p) in pop.women.iter().enumerate() {
        let g = entry(&mut groups, p);
        g.women += 1;
        if let Some(m) = matching.husband_of(w) {
            if &pop.men[m] != p {
                g.cross += 1;
            }
        }
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{deferred_acceptance, enumerate_stable_matchings};

    fn pop(men: &[&str], women: &[&str]) -> Population {
        let parse = |v: &[&str]| {
            v.iter()
                .map(|s| s.parse().unwrap())
                .collect::<Vec<Profile>>()
        };
        let k = men[0].len();
        Population {
            k,
            men: parse(men),
            women: parse(women),
            men_ties: vec![(0..women.len()).collect(); men.len()],
            women_ties: vec![(0..men.len()).collect(); women.len()],
            seed: 0,
            trial: 0,
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(
            sample_population(5, 6, 3, 9, 2),
            sample_population(5, 6, 3, 9, 2)
        );
        assert_ne!(
            sample_population(5, 6, 3, 9, 2),
            sample_population(5, 6, 3, 9, 3)
        );
    }

    #[test]
    fn distance_then_tie_order() {
        let mut p = pop(&["00", "11"], &["00"]);
        let inst = build_instance(&p, &MetricKind::Hamming).unwrap();
        assert_eq!(inst.prefs(Side::Woman)[0], vec![0, 1]);
        p.men = vec!["01".parse().unwrap(), "10".parse().unwrap()];
        p.women_ties = vec![vec![1, 0]];
        let inst = build_instance(&p, &MetricKind::Hamming).unwrap();
        assert_eq!(inst.prefs(Side::Woman)[0], vec![1, 0]);
    }

    #[test]
    fn one_bit_market_is_assortative() {
        let p = pop(&["0", "1"], &["0", "1"]);
        let inst = build_instance(&p, &MetricKind::Hamming).unwrap();
        let all = enumerate_stable_matchings(&inst).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        let d = matching_distance(&p, &MetricKind::Hamming, &all[0], AgentId::man(0)).unwrap();
        assert_eq!(d, Distance::Hamming(0));
    }

    #[test]
    fn unmatched_agent_has_no_distance() {
        let p = pop(&["0"], &["0", "1"]);
        let inst = build_instance(&p, &MetricKind::Hamming).unwrap();
        let mu = deferred_acceptance(&inst, Side::Man);
        assert!(matches!(
            matching_distance(&p, &MetricKind::Hamming, &mu, AgentId::woman(1)),
            Err(HypercubeError::Unmatched(_))
        ));
        let groups = profile_groups(&p, &mu);
        assert_eq!(groups.len(), 2);
        assert_eq!(
            (groups[0].men, groups[0].women, groups[0].within),
            (1, 1, 1)
        );
    }

    #[test]
    fn certificates() {
        let w = MetricKind::Weighted;
        assert!(uniqueness_certificate(&pop(&["00", "01"], &["10"]), &w, Side::Woman).unwrap());
        assert!(!uniqueness_certificate(&pop(&["01", "01"], &["10"]), &w, Side::Woman).unwrap());
        let h = MetricKind::Hamming;
        assert!(!uniqueness_certificate(&pop(&["00", "11"], &["01"]), &h, Side::Woman).unwrap());
    }
}
