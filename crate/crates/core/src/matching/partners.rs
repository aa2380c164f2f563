use std::collections::BTreeSet;

use super::instance::UNRANKED;
use super::{deferred_acceptance, AgentId, MatchingInstance, Side};

/// Stable partner sets for every agent, as opposite-side indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePartners {
    pub men: Vec<BTreeSet<usize>>,
    pub women: Vec<BTreeSet<usize>>,
}

impl StablePartners {
    pub fn of(&self, agent: AgentId) -> &BTreeSet<usize> {
        match agent.side {
            Side::Man => &self.men[agent.index],
            Side::Woman => &self.women[agent.index],
        }
    }

    /// Number of agents on `side` with two or more stable partners.
    pub fn multiple_count(&self, side: Side) -> usize {
        let sets = match side {
            Side::Man => &self.men,
            Side::Woman => &self.women,
        };
        sets.iter().filter(|s| s.len() > 1).count()
    }

    /// Aggregate partner sets from a list of stable matchings.
    pub fn from_matchings(
        n_men: usize,
        n_women: usize,
        matchings: &[super::Matching],
    ) -> StablePartners {
        let mut out = StablePartners {
            men: vec![BTreeSet::new(); n_men],
            women: vec![BTreeSet::new(); n_women],
        };
        for mu in matchings {
            for (m, w) in mu.pairs() {
                out.men[m].insert(w);
                out.women[w].insert(m);
            }
        }
        out
    }
}

/// Stable partners of every agent by repeated marriage breaking.
///
/// For each woman w, start from the men-optimal matching and let w reject her
/// partner. The rejected man continues down his list; a woman holding a
/// proposal keeps the better one and releases the other, who continues in
/// turn. The chain stops when some man runs out of women, or when a woman left
/// single by the men-optimal matching accepts. Whenever w herself accepts, the
/// current matching is stable and her new partner is recorded; she then
/// rejects him and the chain resumes.
pub fn stable_partners_all(inst: &MatchingInstance) -> StablePartners {
    let man_opt = deferred_acceptance(inst, Side::Man);
    let women_rank = inst.rank_table(Side::Woman);
    let prefs = inst.prefs(Side::Man);
    let men_rank = inst.rank_table(Side::Man);
    let n_women = inst.n_women();

    let mut women: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_women];
    for w in 0..n_women {
        let Some(first) = man_opt.husband_of(w) else {
            continue;
        };
        women[w].insert(first);

        let mut holder: Vec<Option<usize>> = (0..n_women).map(|x| man_opt.husband_of(x)).collect();
        let mut next: Vec<usize> = (0..inst.n_men())
            .map(|m| {
                man_opt
                    .wife_of(m)
                    .map_or(prefs[m].len(), |x| men_rank[m][x] as usize + 1)
            })
            .collect();
        // w refuses anyone not better than the man she just gave up.
        let mut threshold = women_rank[w][first];
        holder[w] = None;
        let mut u = first;
        'chain: loop {
            loop {
                if next[u] >= prefs[u].len() {
                    break 'chain;
                }
                let x = prefs[u][next[u]];
                next[u] += 1;
                let r = women_rank[x][u];
                if r == UNRANKED {
                    continue;
                }
                if man_opt.husband_of(x).is_none() {
                    break 'chain;
                }
                if x == w {
                    if r < threshold {
                        // Stable again; record him, then reject him too.
                        women[w].insert(u);
                        threshold = r;
                    }
                    continue;
                }
                let h = holder[x].expect("women matched in the men-optimal matching stay held");
                if r < women_rank[x][h] {
                    holder[x] = Some(u);
                    u = h;
                    continue 'chain;
                }
            }
        }
    }

    let mut men: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); inst.n_men()];
    for (w, set) in women.iter().enumerate() {
        for &m in set {
            men[m].insert(w);
        }
    }
    StablePartners { men, women }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_everyone_has_two() {
        let inst = MatchingInstance::new(
            2,
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let sp = stable_partners_all(&inst);
        assert!(sp.men.iter().chain(&sp.women).all(|s| s.len() == 2));
        assert_eq!(sp.multiple_count(Side::Man), 2);
    }

    #[test]
    fn aligned_and_single() {
        let l = vec![vec![0, 1, 2]; 3];
        let inst = MatchingInstance::new(3, 3, l.clone(), l).unwrap();
        let sp = stable_partners_all(&inst);
        for i in 0..3 {
            assert_eq!(sp.men[i], BTreeSet::from([i]));
            assert_eq!(sp.women[i], BTreeSet::from([i]));
        }
        let one = MatchingInstance::new(1, 1, vec![vec![0]], vec![vec![0]]).unwrap();
        let sp = stable_partners_all(&one);
        assert_eq!(sp.of(AgentId::man(0)), &BTreeSet::from([0]));
        assert_eq!(sp.of(AgentId::woman(0)), &BTreeSet::from([0]));
    }
}
