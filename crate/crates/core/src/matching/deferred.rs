use super::{Matching, MatchingInstance, Side};

fn propose(inst: &MatchingInstance, side: Side) -> Matching {
    let receiver_rank = inst.rank_table(side.opposite());
    let prefs = inst.prefs(side);
    let mut holds: Vec<Option<usize>> = vec![None; inst.size(side.opposite())];
    let mut next = vec![0usize; prefs.len()];
    let mut free: Vec<usize> = (0..prefs.len()).rev().collect();
    while let Some(p) = free.pop() {
        let list = &prefs[p];
        while next[p] < list.len() {
            let q = list[next[p]];
            next[p] += 1;
            let r = receiver_rank[q][p];
            if r == super::instance::UNRANKED {
                continue;
            }
            match holds[q] {
                None => {
                    holds[q] = Some(p);
                    break;
                }
                Some(h) if r < receiver_rank[q][h] => {
                    holds[q] = Some(p);
                    free.push(h);
                    break;
                }
                Some(_) => {}
            }
        }
    }
    let mut mu = Matching::empty(inst.n_men(), inst.n_women());
    for (q, p) in holds.iter().enumerate() {
        if let Some(p) = *p {
            match side {
                Side::Man => mu.set(p, q),
                Side::Woman => mu.set(q, p),
            }
        }
    }
    mu
}

/// Gale-Shapley with `proposing` side making offers. The result is stable and
/// optimal for the proposing side.
pub fn deferred_acceptance(inst: &MatchingInstance, proposing: Side) -> Matching {
    propose(inst, proposing)
}

/// Per-side flags: does the agent have more than one stable partner?
///
/// An agent has a unique stable partner exactly when its partners in the two
/// extremal stable matchings coincide, so two runs of deferred acceptance
/// answer the question for everyone at once.
pub fn extremal_multiple_partners(inst: &MatchingInstance) -> (Vec<bool>, Vec<bool>) {
    let man_opt = deferred_acceptance(inst, Side::Man);
    let woman_opt = deferred_acceptance(inst, Side::Woman);
    let men = (0..inst.n_men())
        .map(|m| man_opt.wife_of(m) != woman_opt.wife_of(m))
        .collect();
    let women = (0..inst.n_women())
        .map(|w| man_opt.husband_of(w) != woman_opt.husband_of(w))
        .collect();
    (men, women)
}
