#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use metdist::profiles::{
    majority_distance, majority_distances, majority_relation, mcgarvey, restrict, support_matrix, tallies, Comparison,
    MajorityDistance,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn support_is_complementary(profile in profile(1..=7, 1..=15)) {
        let s = support_matrix(&profile);
        let n = profile.num_voters();
        for x in profile.alternatives() {
            prop_assert_eq!(s.get(x, x), 0);
            for y in profile.alternatives().filter(|&y| y != x) {
                prop_assert_eq!(s.get(x, y) + s.get(y, x), n);
                prop_assert_eq!(s.margin(x, y), -s.margin(y, x));
            }
        }
    }

    #[test]
    fn majority_relation_follows_support(profile in profile(1..=7, 1..=15)) {
        let s = support_matrix(&profile);
        let rel = majority_relation(&profile);
        for x in profile.alternatives() {
            prop_assert_eq!(rel.compare(x, x), Comparison::Tied);
            prop_assert!(!rel.strictly_beats(x, x));
            for y in profile.alternatives().filter(|&y| y != x) {
                let expected = match s.get(x, y).cmp(&s.get(y, x)) {
                    std::cmp::Ordering::Greater => Comparison::StrictlyBeats,
                    std::cmp::Ordering::Equal => Comparison::Tied,
                    std::cmp::Ordering::Less => Comparison::StrictlyLosesTo,
                };
                prop_assert_eq!(rel.compare(x, y), expected);
                prop_assert!(rel.weakly_beats(x, y) || rel.weakly_beats(y, x));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mcgarvey_realizes_the_relation(rel in relation(3..=7)) {
        let profile = mcgarvey(&rel).unwrap();
        prop_assert_eq!(majority_relation(&profile), rel);
    }

    #[test]
    fn majority_distance_is_a_quasi_metric(profile in profile(1..=7, 1..=9)) {
        let rel = majority_relation(&profile);
        let d = majority_distances(&rel);
        for x in profile.alternatives() {
            prop_assert_eq!(d[x][x], MajorityDistance::Finite(0));
            for y in profile.alternatives() {
                prop_assert_eq!(d[x][y], majority_distance(&rel, x, y));
                if y != x && rel.weakly_beats(x, y) {
                    prop_assert_eq!(d[x][y], MajorityDistance::Finite(1));
                }
                for z in profile.alternatives() {
                    prop_assert!(d[x][z].as_f64() <= d[x][y].as_f64() + d[y][z].as_f64());
                }
            }
        }
    }

    #[test]
    fn restrict_preserves_relative_order(profile in profile(2..=7, 1..=9), mask in prop::collection::vec(any::<bool>(), 7)) {
        let mut keep: Vec<usize> = profile.alternatives().filter(|&x| mask[x]).collect();
        if keep.is_empty() {
            keep.push(0);
        }
        let sub = restrict(&profile, &keep).unwrap();
        prop_assert_eq!(sub.num_voters(), profile.num_voters());
        prop_assert_eq!(sub.num_alternatives(), keep.len());
        for (v, r) in sub.rankings().iter().enumerate() {
            let original: Vec<usize> = profile.ranking(v).order().iter().copied().filter(|x| keep.contains(x)).collect();
            let mapped: Vec<usize> = r.order().iter().map(|&i| keep[i]).collect();
            prop_assert_eq!(mapped, original);
        }
        for (i, &x) in keep.iter().enumerate() {
            prop_assert_eq!(sub.name(i), profile.name(x));
        }
    }

    #[test]
    fn tallies_count_every_voter(profile in profile(1..=7, 1..=15)) {
        let t = tallies(&profile);
        prop_assert_eq!(t.top.iter().sum::<usize>(), profile.num_voters());
        prop_assert_eq!(t.bottom.iter().sum::<usize>(), profile.num_voters());
    }
}

#[test]
fn fixture_relations() {
    let rel = majority_relation(&p1());
    assert_eq!(rel.condorcet_winner(), Some(0));
    let rel = majority_relation(&p2());
    assert_eq!(rel.condorcet_winner(), None);
    assert!(rel.strictly_beats(0, 1) && rel.strictly_beats(1, 2) && rel.strictly_beats(2, 0));
    let rel = majority_relation(&p3());
    assert!(rel.tied(0, 1) && rel.tied(1, 2) && rel.tied(0, 2));
}

#[test]
fn cyclic_relation_round_trips() {
    for m in [3, 5, 7] {
        let rel = cyclic_relation(m);
        assert_eq!(majority_relation(&mcgarvey(&rel).unwrap()), rel);
        let d = majority_distances(&rel);
        for x in 0..m {
            for y in 0..m {
                assert!(d[x][y].as_f64() <= 2.0);
            }
        }
    }
}
