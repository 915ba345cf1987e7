//! Fixtures, oracles and generators shared by the integration suites.
#![allow(dead_code)]

use itertools::Itertools;
use metdist::profiles::MajorityRelation;
use metdist::{build_profile, Alternative, Lottery, PreferenceProfile};
use proptest::prelude::*;

pub fn p1() -> PreferenceProfile {
    build_profile(&[vec!["a", "b", "c"], vec!["b", "a", "c"], vec!["a", "c", "b"]]).unwrap()
}

pub fn p2() -> PreferenceProfile {
    build_profile(&[vec!["a", "b", "c"], vec!["b", "c", "a"], vec!["c", "a", "b"]]).unwrap()
}

pub fn p3() -> PreferenceProfile {
    let rankings: Vec<Vec<&str>> = ["a", "b", "c"].into_iter().permutations(3).collect();
    build_profile(&rankings).unwrap()
}

pub fn p4() -> PreferenceProfile {
    build_profile(&[
        vec!["a", "b", "c"],
        vec!["a", "b", "c"],
        vec!["b", "c", "a"],
        vec!["c", "a", "b"],
    ])
    .unwrap()
}

pub fn unanimous(m: usize, n: usize) -> PreferenceProfile {
    PreferenceProfile::from_indices(m, vec![(0..m).collect(); n]).unwrap()
}

/// Every ranking of `m` alternatives repeated `k` times.
pub fn uniform_multiplicity(m: usize, k: usize) -> PreferenceProfile {
    let rankings: Vec<Vec<usize>> = (0..m)
        .permutations(m)
        .flat_map(|r| std::iter::repeat_n(r, k))
        .collect();
    PreferenceProfile::from_indices(m, rankings).unwrap()
}

/// The relation x_i ≻ x_{i+1}, x_{i+2} (indices mod m) for odd m.
pub fn cyclic_relation(m: usize) -> MajorityRelation {
    let edges: Vec<_> = (0..m).flat_map(|i| (1..=m / 2).map(move |k| (i, (i + k) % m))).collect();
    MajorityRelation::from_strict_edges(m, &edges).unwrap()
}

/// The five-alternative relation whose C1 maximal lottery is
/// (1/3, 1/3, 1/9, 1/9, 1/9): x2 ≻ x1; x1 beats x3, x4, x5; those three beat
/// x2; and x4 ≻ x3, x3 ≻ x5, x5 ≻ x4.
pub fn five_alternative_relation() -> MajorityRelation {
    let edges = [(1, 0), (0, 2), (0, 3), (0, 4), (2, 1), (3, 1), (4, 1), (3, 2), (2, 4), (4, 3)];
    MajorityRelation::from_strict_edges(5, &edges).unwrap()
}

/// Plays Plurality-Veto for one voter order and returns the winner.
pub fn plurality_veto_for_order(profile: &PreferenceProfile, order: &[usize]) -> Alternative {
    let mut score = vec![0usize; profile.num_alternatives()];
    for r in profile.rankings() {
        score[r.top()] += 1;
    }
    let mut last = None;
    for &v in order {
        let ranking = profile.ranking(v).order();
        let target = *ranking.iter().rev().find(|&&x| score[x] > 0).expect("some score is positive");
        score[target] -= 1;
        last = Some(target);
    }
    assert!(score.iter().all(|&s| s == 0));
    last.expect("profiles have voters")
}

/// Winners over every voter order, by exhaustive enumeration.
pub fn plurality_veto_brute_force(profile: &PreferenceProfile) -> Vec<Alternative> {
    let n = profile.num_voters();
    let mut winners: Vec<Alternative> = (0..n)
        .permutations(n)
        .map(|order| plurality_veto_for_order(profile, &order))
        .collect();
    winners.sort_unstable();
    winners.dedup();
    winners
}

/// `min_q pᵀ A e_q` for a payoff table.
pub fn worst_response(p: &Lottery, payoff: &[Vec<f64>]) -> f64 {
    let m = payoff.len();
    (0..m)
        .map(|q| (0..m).map(|x| p.prob(x) * payoff[x][q]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn ranking(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

pub fn profile_with(m: usize, n: usize) -> impl Strategy<Value = PreferenceProfile> {
    prop::collection::vec(ranking(m), n).prop_map(move |r| PreferenceProfile::from_indices(m, r).unwrap())
}

/// Profiles with `m` in `ms` and `n` in `ns`.
pub fn profile(
    ms: std::ops::RangeInclusive<usize>,
    ns: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = PreferenceProfile> {
    (ms, ns).prop_flat_map(|(m, n)| profile_with(m, n))
}

/// Profiles with an odd number of voters.
pub fn odd_profile(
    ms: std::ops::RangeInclusive<usize>,
    max_half: usize,
) -> impl Strategy<Value = PreferenceProfile> {
    (ms, 0..=max_half).prop_flat_map(|(m, h)| profile_with(m, 2 * h + 1))
}

/// Lotteries over `m` alternatives, including sparse ones.
pub fn lottery(m: usize) -> impl Strategy<Value = Lottery> {
    prop::collection::vec(prop_oneof![3 => 0.0..1.0f64, 1 => Just(0.0)], m).prop_map(move |w| {
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            Lottery::uniform(m)
        } else {
            Lottery::new(w.iter().map(|x| x / sum).collect()).unwrap_or_else(|_| Lottery::uniform(m))
        }
    })
}

pub fn profile_and_lottery(
    ms: std::ops::RangeInclusive<usize>,
    ns: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (PreferenceProfile, Lottery)> {
    profile(ms, ns).prop_flat_map(|p| {
        let m = p.num_alternatives();
        (Just(p), lottery(m))
    })
}

/// Complete relations on `m` alternatives with random strict and tied pairs.
pub fn relation(ms: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MajorityRelation> {
    ms.prop_flat_map(|m| {
        prop::collection::vec(0u8..3, m * (m - 1) / 2).prop_map(move |codes| {
            let mut edges = Vec::new();
            let mut k = 0;
            for x in 0..m {
                for y in x + 1..m {
                    match codes[k] {
                        0 => edges.push((x, y)),
                        1 => edges.push((y, x)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            MajorityRelation::from_strict_edges(m, &edges).unwrap()
        })
    })
}
