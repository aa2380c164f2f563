use serde::Serialize;

use super::{AgentId, Matching, MatchingError, MatchingInstance};

/// A man and a woman who would both rather be together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockingPair {
    pub man: AgentId,
    pub woman: AgentId,
}

pub(crate) fn blocks(inst: &MatchingInstance, mu: &Matching, m: usize, w: usize) -> bool {
    mu.wife_of(m) != Some(w)
        && inst.prefers(AgentId::man(m), w, mu.wife_of(m))
        && inst.prefers(AgentId::woman(w), m, mu.husband_of(w))
}

/// Every blocking pair of `mu`, ordered by man then woman.
pub fn find_blocking_pairs(
    inst: &MatchingInstance,
    mu: &Matching,
) -> Result<Vec<BlockingPair>, MatchingError> {
    mu.check_shape(inst)?;
    let mut out = Vec::new();
    for m in 0..inst.n_men() {
        // Only women m ranks above his current assignment can block.
        let list = inst.list(AgentId::man(m));
        let stop = mu
            .wife_of(m)
            .and_then(|w| list.iter().position(|&x| x == w))
            .unwrap_or(list.len());
        let mut ws: Vec<usize> = list[..stop]
            .iter()
            .copied()
            .filter(|&w| inst.prefers(AgentId::woman(w), m, mu.husband_of(w)))
            .collect();
        ws.sort_unstable();
        out.extend(ws.into_iter().map(|w| BlockingPair {
            man: AgentId::man(m),
            woman: AgentId::woman(w),
        }));
    }
    Ok(out)
}

pub fn is_stable(inst: &MatchingInstance, mu: &Matching) -> bool {
    find_blocking_pairs(inst, mu).is_ok_and(|b| b.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Side;

    #[test]
    fn aligned_two_by_two_swap_is_blocked() {
        let inst = MatchingInstance::new(
            2,
            2,
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let mu = Matching::from_pairs(2, 2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(
            find_blocking_pairs(&inst, &mu).unwrap(),
            vec![BlockingPair {
                man: AgentId::man(0),
                woman: AgentId::woman(0)
            }]
        );
    }

    #[test]
    fn empty_matching_on_single_pair() {
        let inst = MatchingInstance::new(1, 1, vec![vec![0]], vec![vec![0]]).unwrap();
        let bp = find_blocking_pairs(&inst, &Matching::empty(1, 1)).unwrap();
        assert_eq!(bp.len(), 1);
        assert_eq!((bp[0].man.side, bp[0].woman.side), (Side::Man, Side::Woman));
    }

    #[test]
    fn unacceptable_pairs_never_block() {
        let inst = MatchingInstance::new(1, 1, vec![vec![0]], vec![vec![]]).unwrap();
        assert!(is_stable(&inst, &Matching::empty(1, 1)));
        assert!(find_blocking_pairs(&inst, &Matching::empty(2, 1)).is_err());
    }
}
