//! Finite two-sided stable matching.

mod blocking;
mod deferred;
mod enumerate;
mod instance;
mod partners;
mod random;

pub use blocking::{find_blocking_pairs, is_stable, BlockingPair};
pub use deferred::{deferred_acceptance, extremal_multiple_partners};
pub use enumerate::{enumerate_stable_matchings, EnumerationError, ENUMERATION_CAP};
pub use instance::{AgentId, InstanceError, InstanceJson, MatchingInstance, Side};
pub use partners::{stable_partners_all, StablePartners};
pub use random::random_instance;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching covers {men} men and {women} women, instance has {n_men} and {n_women}")]
    Shape {
        men: usize,
        women: usize,
        n_men: usize,
        n_women: usize,
    },
    #[error("{agent} is paired with index {partner}, out of range")]
    OutOfRange { agent: AgentId, partner: usize },
    #[error("{agent} points to {partner}, which does not point back")]
    Asymmetric { agent: AgentId, partner: AgentId },
}

/// Partial one-to-one pairing of men and women.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    husband_of: Vec<Option<usize>>,
    wife_of: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_men: usize, n_women: usize) -> Self {
        Matching {
            husband_of: vec![None; n_women],
            wife_of: vec![None; n_men],
        }
    }

    /// Build from `(man, woman)` pairs; each agent may appear once.
    pub fn from_pairs(
        n_men: usize,
        n_women: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self, MatchingError> {
        let mut m = Matching::empty(n_men, n_women);
        for &(man, woman) in pairs {
            if man >= n_men {
                return Err(MatchingError::OutOfRange {
                    agent: AgentId::woman(woman),
                    partner: man,
                });
            }
            if woman >= n_women {
                return Err(MatchingError::OutOfRange {
                    agent: AgentId::man(man),
                    partner: woman,
                });
            }
            if let Some(prev) = m.wife_of[man] {
                return Err(MatchingError::Asymmetric {
                    agent: AgentId::man(man),
                    partner: AgentId::woman(prev),
                });
            }
            if let Some(prev) = m.husband_of[woman] {
                return Err(MatchingError::Asymmetric {
                    agent: AgentId::woman(woman),
                    partner: AgentId::man(prev),
                });
            }
            m.wife_of[man] = Some(woman);
            m.husband_of[woman] = Some(man);
        }
        Ok(m)
    }

    /// Build from raw partner maps, checking that they are mutually inverse.
    pub fn from_maps(
        wife_of: Vec<Option<usize>>,
        husband_of: Vec<Option<usize>>,
    ) -> Result<Self, MatchingError> {
        for (man, wife) in wife_of.iter().enumerate() {
            if let Some(w) = *wife {
                let agent = AgentId::man(man);
                match husband_of.get(w) {
                    None => return Err(MatchingError::OutOfRange { agent, partner: w }),
                    Some(&h) if h != Some(man) => {
                        return Err(MatchingError::Asymmetric {
                            agent,
                            partner: AgentId::woman(w),
                        })
                    }
                    _ => {}
                }
            }
        }
        for (woman, husband) in husband_of.iter().enumerate() {
            if let Some(m) = *husband {
                let agent = AgentId::woman(woman);
                match wife_of.get(m) {
                    None => return Err(MatchingError::OutOfRange { agent, partner: m }),
                    Some(&w) if w != Some(woman) => {
                        return Err(MatchingError::Asymmetric {
                            agent,
                            partner: AgentId::man(m),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Matching {
            husband_of,
            wife_of,
        })
    }

    pub fn n_men(&self) -> usize {
        self.wife_of.len()
    }

    pub fn n_women(&self) -> usize {
        self.husband_of.len()
    }

    pub fn wife_of(&self, man: usize) -> Option<usize> {
        self.wife_of[man]
    }

    pub fn husband_of(&self, woman: usize) -> Option<usize> {
        self.husband_of[woman]
    }

    /// Partner index on the opposite side, if any.
    pub fn partner_index(&self, agent: AgentId) -> Option<usize> {
        match agent.side {
            Side::Man => self.wife_of[agent.index],
            Side::Woman => self.husband_of[agent.index],
        }
    }

    pub fn partner(&self, agent: AgentId) -> Option<AgentId> {
        self.partner_index(agent).map(|index| AgentId {
            side: agent.side.opposite(),
            index,
        })
    }

    /// `(man, woman)` pairs in increasing man index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.wife_of
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)))
    }

    pub fn len(&self) -> usize {
        self.pairs().count()
    }

    pub fn is_empty(&self) -> bool {
        self.wife_of.iter().all(Option::is_none)
    }

    pub(crate) fn check_shape(&self, inst: &MatchingInstance) -> Result<(), MatchingError> {
        if self.n_men() != inst.n_men() || self.n_women() != inst.n_women() {
            return Err(MatchingError::Shape {
                men: self.n_men(),
                women: self.n_women(),
                n_men: inst.n_men(),
                n_women: inst.n_women(),
            });
        }
        Ok(())
    }

    pub(crate) fn set(&mut self, man: usize, woman: usize) {
        self.wife_of[man] = Some(woman);
        self.husband_of[woman] = Some(man);
    }

    pub(crate) fn unset_man(&mut self, man: usize) {
        if let Some(w) = self.wife_of[man].take() {
            self.husband_of[w] = None;
        }
    }

    /// Same pairing viewed with the sides exchanged.
    pub fn transposed(&self) -> Matching {
        Matching {
            husband_of: self.wife_of.clone(),
            wife_of: self.husband_of.clone(),
        }
    }
}

/// Serialized form: list of `[man, woman]` pairs.
impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs().map(|(m, w)| [m, w]))
    }
}

/// Agents left without a partner.
pub fn unmatched_agents(
    matching: &Matching,
    instance: &MatchingInstance,
) -> Result<BTreeSet<AgentId>, MatchingError> {
    matching.check_shape(instance)?;
    let men = (0..matching.n_men())
        .filter(|&m| matching.wife_of(m).is_none())
        .map(AgentId::man);
    let women = (0..matching.n_women())
        .filter(|&w| matching.husband_of(w).is_none())
        .map(AgentId::woman);
    Ok(men.chain(women).collect())
}
