use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }
}

/// A participant, addressed by side and 0-based index within that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub fn man(index: usize) -> Self {
        AgentId {
            side: Side::Man,
            index,
        }
    }

    pub fn woman(index: usize) -> Self {
        AgentId {
            side: Side::Woman,
            index,
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Man => write!(f, "m{}", self.index),
            Side::Woman => write!(f, "w{}", self.index),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{side:?} side must have at least one agent")]
    EmptySide { side: Side },
    #[error("expected {expected} preference lists for {side:?} side, found {found}")]
    ListCount {
        side: Side,
        expected: usize,
        found: usize,
    },
    #[error("{agent} lists {listed}, outside the opposite side of size {size}")]
    OutOfRange {
        agent: AgentId,
        listed: usize,
        size: usize,
    },
    #[error("{agent} lists {listed} more than once")]
    Duplicate { agent: AgentId, listed: usize },
}

pub(crate) const UNRANKED: u32 = u32::MAX;

/// Two-sided market with strict, possibly truncated, preference lists.
///
/// An agent prefers staying unmatched to anyone missing from its list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingInstance {
    men_prefs: Vec<Vec<usize>>,
    women_prefs: Vec<Vec<usize>>,
    men_rank: Vec<Vec<u32>>,
    women_rank: Vec<Vec<u32>>,
}

fn rank_table(
    side: Side,
    prefs: &[Vec<usize>],
    opposite: usize,
) -> Result<Vec<Vec<u32>>, InstanceError> {
    prefs
        .iter()
        .enumerate()
        .map(|(i, list)| {
            let agent = AgentId { side, index: i };
            let mut ranks = vec![UNRANKED; opposite];
            for (pos, &other) in list.iter().enumerate() {
                if other >= opposite {
                    return Err(InstanceError::OutOfRange {
                        agent,
                        listed: other,
                        size: opposite,
                    });
                }
                if ranks[other] != UNRANKED {
                    return Err(InstanceError::Duplicate {
                        agent,
                        listed: other,
                    });
                }
                ranks[other] = pos as u32;
            }
            Ok(ranks)
        })
        .collect()
}

impl MatchingInstance {
    pub fn new(
        n_men: usize,
        n_women: usize,
        men_prefs: Vec<Vec<usize>>,
        women_prefs: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        if n_men == 0 {
            return Err(InstanceError::EmptySide { side: Side::Man });
        }
        if n_women == 0 {
            return Err(InstanceError::EmptySide { side: Side::Woman });
        }
        if men_prefs.len() != n_men {
            return Err(InstanceError::ListCount {
                side: Side::Man,
                expected: n_men,
                found: men_prefs.len(),
            });
        }
        if women_prefs.len() != n_women {
            return Err(InstanceError::ListCount {
                side: Side::Woman,
                expected: n_women,
                found: women_prefs.len(),
            });
        }
        let men_rank = rank_table(Side::Man, &men_prefs, n_women)?;
        let women_rank = rank_table(Side::Woman, &women_prefs, n_men)?;
        Ok(MatchingInstance {
            men_prefs,
            women_prefs,
            men_rank,
            women_rank,
        })
    }

    pub fn n_men(&self) -> usize {
        self.men_prefs.len()
    }

    pub fn n_women(&self) -> usize {
        self.women_prefs.len()
    }

    pub fn size(&self, side: Side) -> usize {
        match side {
            Side::Man => self.n_men(),
            Side::Woman => self.n_women(),
        }
    }

    pub fn prefs(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::Man => &self.men_prefs,
            Side::Woman => &self.women_prefs,
        }
    }

    pub fn list(&self, agent: AgentId) -> &[usize] {
        &self.prefs(agent.side)[agent.index]
    }

    pub(crate) fn rank_table(&self, side: Side) -> &[Vec<u32>] {
        match side {
            Side::Man => &self.men_rank,
            Side::Woman => &self.women_rank,
        }
    }

    /// Position of `other` (an opposite-side index) in `agent`'s list.
    pub fn rank(&self, agent: AgentId, other: usize) -> Option<usize> {
        let r = self.rank_table(agent.side)[agent.index][other];
        (r != UNRANKED).then_some(r as usize)
    }

    pub fn acceptable(&self, agent: AgentId, other: usize) -> bool {
        self.rank(agent, other).is_some()
    }

    /// True when `agent` strictly prefers `candidate` to its assignment
    /// `current` (`None` = unmatched). Unlisted partners rank below
    /// being unmatched.
    pub fn prefers(&self, agent: AgentId, candidate: usize, current: Option<usize>) -> bool {
        let Some(cand) = self.rank(agent, candidate) else {
            return false;
        };
        match current {
            None => true,
            Some(cur) => self.rank(agent, cur).is_none_or(|cur| cand < cur),
        }
    }

    /// The same market with the roles of the two sides exchanged.
    pub fn transposed(&self) -> MatchingInstance {
        MatchingInstance {
            men_prefs: self.women_prefs.clone(),
            women_prefs: self.men_prefs.clone(),
            men_rank: self.women_rank.clone(),
            women_rank: self.men_rank.clone(),
        }
    }
}

/// Serialized instance: `{nMen, nWomen, menPrefs, womenPrefs}` with 0-based
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceJson {
    pub n_men: usize,
    pub n_women: usize,
    pub men_prefs: Vec<Vec<usize>>,
    pub women_prefs: Vec<Vec<usize>>,
}

impl TryFrom<InstanceJson> for MatchingInstance {
    type Error = InstanceError;

    fn try_from(raw: InstanceJson) -> Result<Self, Self::Error> {
        MatchingInstance::new(raw.n_men, raw.n_women, raw.men_prefs, raw.women_prefs)
    }
}

impl From<&MatchingInstance> for InstanceJson {
    fn from(inst: &MatchingInstance) -> Self {
        InstanceJson {
            n_men: inst.n_men(),
            n_women: inst.n_women(),
            men_prefs: inst.men_prefs.clone(),
            women_prefs: inst.women_prefs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        let dup = MatchingInstance::new(1, 2, vec![vec![0, 0]], vec![vec![0], vec![0]]);
        assert_eq!(
            dup,
            Err(InstanceError::Duplicate {
                agent: AgentId::man(0),
                listed: 0
            })
        );
        let oob = MatchingInstance::new(1, 1, vec![vec![0]], vec![vec![3]]);
        assert!(matches!(
            oob,
            Err(InstanceError::OutOfRange { listed: 3, .. })
        ));
        let count = MatchingInstance::new(2, 1, vec![vec![0]], vec![vec![0]]);
        assert!(matches!(
            count,
            Err(InstanceError::ListCount {
                side: Side::Man,
                ..
            })
        ));
        assert!(matches!(
            MatchingInstance::new(0, 1, vec![], vec![vec![]]),
            Err(InstanceError::EmptySide { side: Side::Man })
        ));
    }

    #[test]
    fn truncated_lists_rank_unlisted_below_unmatched() {
        let inst = MatchingInstance::new(1, 2, vec![vec![1]], vec![vec![0], vec![0]]).unwrap();
        let m = AgentId::man(0);
        assert!(inst.prefers(m, 1, None));
        assert!(!inst.prefers(m, 0, None));
        assert!(inst.prefers(m, 1, Some(0)));
        assert!(!inst.prefers(m, 0, Some(1)));
    }

    #[test]
    fn json_field_names() {
        let raw: InstanceJson =
            serde_json::from_str(r#"{"nMen":1,"nWomen":1,"menPrefs":[[0]],"womenPrefs":[[0]]}"#)
                .unwrap();
        let inst = MatchingInstance::try_from(raw.clone()).unwrap();
        assert_eq!(InstanceJson::from(&inst), raw);
        assert!(serde_json::from_str::<InstanceJson>(r#"{"nMen":1}"#).is_err());
    }
}
