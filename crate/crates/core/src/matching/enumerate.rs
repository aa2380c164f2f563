use thiserror::Error;

use super::blocking::blocks;
use super::{AgentId, Matching, MatchingInstance};

/// Largest side size accepted by the exhaustive search.
pub const ENUMERATION_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("exhaustive enumeration is limited to {cap} agents per side, got {n_men} men and {n_women} women")]
    TooLarge {
        n_men: usize,
        n_women: usize,
        cap: usize,
    },
}

struct Search<'a> {
    inst: &'a MatchingInstance,
    mu: Matching,
    found: Vec<Matching>,
}

impl Search<'_> {
    // A pair (m', w) is decided once both partners are fixed: m' < m has been
    // placed, and w is already matched to a placed man.
    fn consistent_after(&self, m: usize) -> bool {
        let inst = self.inst;
        for w in 0..inst.n_women() {
            if self.mu.husband_of(w).is_none() {
                continue;
            }
            if blocks(inst, &self.mu, m, w) {
                return false;
            }
        }
        if let Some(w) = self.mu.wife_of(m) {
            for earlier in 0..m {
                if blocks(inst, &self.mu, earlier, w) {
                    return false;
                }
            }
        }
        true
    }

    fn leaf_stable(&self) -> bool {
        let inst = self.inst;
        (0..inst.n_men()).all(|m| (0..inst.n_women()).all(|w| !blocks(inst, &self.mu, m, w)))
    }

    fn place(&mut self, m: usize) {
        if m == self.inst.n_men() {
            if self.leaf_stable() {
                self.found.push(self.mu.clone());
            }
            return;
        }
        if self.consistent_after(m) {
            self.place(m + 1);
        }
        for &w in self.inst.list(AgentId::man(m)) {
            if self.mu.husband_of(w).is_some() || !self.inst.acceptable(AgentId::woman(w), m) {
                continue;
            }
            self.mu.set(m, w);
            if self.consistent_after(m) {
                self.place(m + 1);
            }
            self.mu.unset_man(m);
        }
    }
}

/// All stable matchings, found by exhaustive search over partial matchings.
///
/// Output is sorted by the men's partner vectors (man index, then woman
/// index; unmatched sorts first).
pub fn enumerate_stable_matchings(
    inst: &MatchingInstance,
) -> Result<Vec<Matching>, EnumerationError> {
    if inst.n_men() > ENUMERATION_CAP || inst.n_women() > ENUMERATION_CAP {
        return Err(EnumerationError::TooLarge {
            n_men: inst.n_men(),
            n_women: inst.n_women(),
            cap: ENUMERATION_CAP,
        });
    }
    let mut search = Search {
        inst,
        mu: Matching::empty(inst.n_men(), inst.n_women()),
        found: Vec::new(),
    };
    search.place(0);
    let mut found = search.found;
    found.sort_by(|a, b| {
        let ka: Vec<_> = (0..a.n_men()).map(|m| a.wife_of(m)).collect();
        let kb: Vec<_> = (0..b.n_men()).map(|m| b.wife_of(m)).collect();
        ka.cmp(&kb)
    });
    found.dedup();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_has_two() {
        let inst = MatchingInstance::new(
            2,
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let all = enumerate_stable_matchings(&inst).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert_eq!(all[1].pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn aligned_three_by_three_is_unique() {
        let l = vec![vec![0, 1, 2]; 3];
        let inst = MatchingInstance::new(3, 3, l.clone(), l).unwrap();
        let all = enumerate_stable_matchings(&inst).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0].pairs().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
    }

    #[test]
    fn single_and_cap() {
        let inst = MatchingInstance::new(1, 1, vec![vec![0]], vec![vec![0]]).unwrap();
        assert_eq!(enumerate_stable_matchings(&inst).unwrap().len(), 1);
        let big = MatchingInstance::new(9, 1, vec![vec![]; 9], vec![vec![]]).unwrap();
        assert!(matches!(
            enumerate_stable_matchings(&big),
            Err(EnumerationError::TooLarge { .. })
        ));
    }

    #[test]
    fn empty_lists_give_empty_matching() {
        let inst =
            MatchingInstance::new(2, 2, vec![vec![0], vec![1]], vec![vec![], vec![]]).unwrap();
        let all = enumerate_stable_matchings(&inst).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_empty());
    }
}
