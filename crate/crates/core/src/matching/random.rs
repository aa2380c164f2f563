use rand::seq::SliceRandom;
use rand::Rng;

use super::MatchingInstance;

/// Independent uniform preference lists; each entry is kept with
/// probability `keep`, so `keep = 1` gives complete lists.
pub fn random_instance<R: Rng>(n_men: usize, n_women: usize, keep: f64, rng: &mut R) -> MatchingInstance {
    let mut lists = |len: usize, other: usize| -> Vec<Vec<usize>> {
        (0..len)
            .map(|_| {
                let mut l: Vec<usize> = (0..other).collect();
                l.shuffle(rng);
                l.retain(|_| keep >= 1.0 || rng.random_bool(keep.max(0.0)));
                l
            })
            .collect()
    };
    let men = lists(n_men, n_women);
    let women = lists(n_women, n_men);
    MatchingInstance::new(n_men, n_women, men, women).expect("shuffled lists are valid")
}
