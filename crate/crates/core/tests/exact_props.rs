use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proxmatch::exact::*;
use proxmatch::rng::substream;

fn rational(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// Even-length sequences of small integer gaps, ties frequent.
fn small_int_gaps(max_len: usize) -> impl Strategy<Value = GapSequence> {
    (1..=max_len / 2)
        .prop_flat_map(|m| prop::collection::vec(1i64..6, 2 * m))
        .prop_map(|v| GapSequence::from_integers(&v).unwrap())
}

/// Even-length sequences with a shared random denominator, ties rare.
fn fine_gaps(max_len: usize) -> impl Strategy<Value = GapSequence> {
    (1..=max_len / 2, any::<u64>())
        .prop_map(|(m, seed)| random_gaps(2 * m, &mut substream(seed, "exact-props", 0)))
}

/// Every integer partition of `k`, parts descending.
fn all_partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Splits counted by labelling each item with a group or none, then
/// forgetting the order of equal-size groups.
fn brute_split_count(o: &OddPartition, n: usize) -> u64 {
    let sizes: Vec<usize> = o.parts().iter().map(|&p| p as usize).collect();
    let r = sizes.len();
    let mut labelled = 0u64;
    let total = (r + 1).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut fill = vec![0usize; r];
        for _ in 0..n {
            let g = c % (r + 1);
            c /= r + 1;
            if g < r {
                fill[g] += 1;
            }
        }
        if fill == sizes {
            labelled += 1;
        }
    }
    let perms: u64 = o
        .multiplicities()
        .iter()
        .map(|&(_, c)| (1..=c as u64).product::<u64>())
        .product();
    labelled / perms
}

#[test]
fn weights_sum_to_one() {
    for k in (2..=20).step_by(2) {
        let s = odd_partitions(k)
            .iter()
            .map(partition_weight)
            .fold(Rational::zero(), |a, b| a + b);
        assert!(s.is_one(), "k = {k}: {s}");
    }
}

#[test]
fn odd_partitions_of_twelve_match_a_filter() {
    let mut naive: Vec<Vec<u32>> = all_partitions(12)
        .into_iter()
        .filter(|p| p.iter().all(|x| x % 2 == 1))
        .collect();
    let mut got: Vec<Vec<u32>> = odd_partitions(12).iter().map(|o| o.parts().to_vec()).collect();
    naive.sort();
    got.sort();
    assert_eq!(got, naive);
    let distinct = all_partitions(12)
        .into_iter()
        .filter(|p| p.windows(2).all(|w| w[0] != w[1]))
        .count();
    assert_eq!(got.len(), distinct);
}

#[test]
fn split_counts_agree() {
    for k in 1..=8 {
        for o in odd_partitions(k) {
            for n in k..=10 {
                if (o.r() + 1).pow(n as u32) > 3_000_000 {
                    continue;
                }
                let brute = brute_split_count(&o, n);
                assert_eq!(count_splits(&o, n), brute, "{o} n = {n}");
                assert_eq!(o.split_count(n).unwrap(), BigInt::from(brute), "{o} n = {n}");
            }
        }
    }
}

#[test]
fn all_ones_values() {
    assert_eq!(expected_greedy_cost(&GapSequence::ones(2).unwrap()).unwrap(), rational(1, 1));
    assert_eq!(expected_greedy_cost(&GapSequence::ones(4).unwrap()).unwrap(), rational(2, 1));
    for m in 1..=5 {
        let x = GapSequence::ones(2 * m).unwrap();
        let d = greedy_cost(&x, TiePolicy::Leftmost).unwrap();
        assert_eq!(d, rational(m as i64, 1));
    }
}

#[test]
fn large_inputs_are_refused() {
    let x = GapSequence::ones(EXPECTATION_CAP + 2).unwrap();
    assert!(matches!(expected_greedy_cost(&x), Err(ExactError::TooLarge { .. })));
    let y = GapSequence::ones(ORACLE_CAP + 2).unwrap();
    assert!(matches!(permutation_oracle(&y), Err(ExactError::TooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_the_oracle(x in fine_gaps(8)) {
        prop_assert_eq!(expected_greedy_cost(&x).unwrap(), permutation_oracle(&x).unwrap());
    }

    #[test]
    fn closed_form_matches_the_oracle_with_ties(x in small_int_gaps(6)) {
        prop_assert_eq!(expected_greedy_cost(&x).unwrap(), permutation_oracle(&x).unwrap());
    }

    #[test]
    fn homogeneous_of_degree_one(x in fine_gaps(8), a in 1i64..50, b in 1i64..50) {
        let c = rational(a, b);
        let lhs = expected_greedy_cost(&x.scale(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, expected_greedy_cost(&x).unwrap() * c);
    }

    #[test]
    fn invariant_under_reordering(x in fine_gaps(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut v = x.values().to_vec();
        v.shuffle(&mut substream(seed, "shuffle", 0));
        let y = GapSequence::new(v).unwrap();
        prop_assert_eq!(expected_greedy_cost(&x).unwrap(), expected_greedy_cost(&y).unwrap());
    }

    #[test]
    fn concave_and_bounded_by_the_uniform_case(
        m in 1usize..=5,
        s1 in any::<u64>(),
        s2 in any::<u64>(),
        t in 1i64..10,
    ) {
        let x = random_gaps(2 * m, &mut substream(s1, "concave", 0));
        let y = random_gaps(2 * m, &mut substream(s2, "concave", 1));
        let t = rational(t, 10);
        let ex = expected_greedy_cost(&x).unwrap();
        let ey = expected_greedy_cost(&y).unwrap();
        let mix = expected_greedy_cost(&x.interpolate(&y, &t).unwrap()).unwrap();
        prop_assert!(mix >= &ex * &t + &ey * (Rational::one() - &t));
        let ones = expected_greedy_cost(&GapSequence::ones(2 * m).unwrap()).unwrap();
        prop_assert!(ex <= ones * x.mean());
    }

    #[test]
    fn greedy_pairs_span_at_least_one_gap(x in fine_gaps(12)) {
        let d = greedy_cost(&x, TiePolicy::Leftmost).unwrap();
        let smallest = x.values().iter().min().unwrap().clone();
        prop_assert!(d >= smallest * Rational::from_integer(BigInt::from(x.len() / 2)));
    }

    #[test]
    fn estimate_tracks_the_exact_value(x in fine_gaps(10), seed in any::<u64>()) {
        use num_traits::ToPrimitive;
        let exact = expected_greedy_cost(&x).unwrap().to_f64().unwrap();
        let est = estimate_expected_greedy_cost(&x, 2000, &mut substream(seed, "est", 0));
        prop_assert!((est.value - exact).abs() <= 5.0 * est.std_error + 1e-9,
            "{} vs {} (se {})", est.value, exact, est.std_error);
    }
}
