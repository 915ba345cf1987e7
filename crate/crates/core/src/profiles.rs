//! Preference profiles and the combinatorial structures derived from them.
//!
//! Alternatives and voters are addressed by dense indices (`0..m` and `0..n`);
//! the human-readable alternative names live in a side table on the profile.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::lottery::Lottery;

/// Dense index of an alternative inside a profile.
pub type Alternative = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("a profile needs at least one voter")]
    EmptyProfile,
    #[error("a profile needs at least one alternative")]
    NoAlternatives,
    #[error("ranking of voter {voter} is malformed: {reason}")]
    MalformedRanking { voter: usize, reason: String },
    #[error("cannot restrict a profile to an empty set of alternatives")]
    EmptySubset,
    #[error("alternative index {0} is out of range")]
    UnknownAlternative(usize),
    #[error("relation is not complete: {0}")]
    IncompleteRelation(String),
}

/// One voter's strict total order, stored both as an order (best first) and
/// as the inverse permutation for O(1) pairwise comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    order: Vec<Alternative>,
    position: Vec<usize>,
}

impl Ranking {
    fn from_order(order: Vec<Alternative>, m: usize) -> Result<Self, String> {
        if order.len() != m {
            return Err(format!("expected {m} alternatives, found {}", order.len()));
        }
        let mut position = vec![usize::MAX; m];
        for (rank, &x) in order.iter().enumerate() {
            if x >= m {
                return Err(format!("alternative index {x} out of range"));
            }
            if position[x] != usize::MAX {
                return Err(format!("alternative index {x} listed twice"));
            }
            position[x] = rank;
        }
        Ok(Self { order, position })
    }

    /// Alternatives from most to least preferred.
    pub fn order(&self) -> &[Alternative] {
        &self.order
    }

    /// Zero-based rank of `x` (0 = top).
    pub fn position(&self, x: Alternative) -> usize {
        self.position[x]
    }

    /// `x ≻ y` for this voter.
    pub fn prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.position[x] < self.position[y]
    }

    pub fn top(&self) -> Alternative {
        self.order[0]
    }

    pub fn bottom(&self) -> Alternative {
        self.order[self.order.len() - 1]
    }
}

/// `n ≥ 1` strict total orders over `m ≥ 1` alternatives. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    names: Vec<String>,
    rankings: Vec<Ranking>,
}

impl PreferenceProfile {
    /// Builds a profile from index-based rankings over the alternatives named
    /// in `names` (in that order).
    pub fn new(names: Vec<String>, rankings: Vec<Vec<Alternative>>) -> Result<Self, ProfileError> {
        if names.is_empty() {
            return Err(ProfileError::NoAlternatives);
        }
        if rankings.is_empty() {
            return Err(ProfileError::EmptyProfile);
        }
        let m = names.len();
        let rankings = rankings
            .into_iter()
            .enumerate()
            .map(|(voter, order)| {
                Ranking::from_order(order, m)
                    .map_err(|reason| ProfileError::MalformedRanking { voter, reason })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { names, rankings })
    }

    /// Index-based profile with default names `x1..xm`.
    pub fn from_indices(m: usize, rankings: Vec<Vec<Alternative>>) -> Result<Self, ProfileError> {
        Self::new(default_names(m), rankings)
    }

    pub fn num_voters(&self) -> usize {
        self.rankings.len()
    }

    pub fn num_alternatives(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Alternative) -> &str {
        &self.names[x]
    }

    /// Index of the alternative called `name`, if any.
    pub fn index_of(&self, name: &str) -> Option<Alternative> {
        self.names.iter().position(|n| n == name)
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, voter: usize) -> &Ranking {
        &self.rankings[voter]
    }

    pub fn alternatives(&self) -> std::ops::Range<Alternative> {
        0..self.names.len()
    }
}

pub(crate) fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

/// Builds a profile from rankings given by name. Alternatives are indexed in
/// the order in which the first ranking mentions them.
pub fn build_profile<S: AsRef<str>>(rankings: &[Vec<S>]) -> Result<PreferenceProfile, ProfileError> {
    let first = rankings.first().ok_or(ProfileError::EmptyProfile)?;
    let names: Vec<String> = first.iter().map(|s| s.as_ref().to_owned()).collect();
    if names.is_empty() {
        return Err(ProfileError::NoAlternatives);
    }
    let index: HashMap<&str, Alternative> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != names.len() {
        return Err(ProfileError::MalformedRanking {
            voter: 0,
            reason: "duplicate alternative".into(),
        });
    }
    let mut orders = Vec::with_capacity(rankings.len());
    for (voter, ranking) in rankings.iter().enumerate() {
        let order = ranking
            .iter()
            .map(|s| {
                index.get(s.as_ref()).copied().ok_or_else(|| ProfileError::MalformedRanking {
                    voter,
                    reason: format!("unknown alternative {:?}", s.as_ref()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        orders.push(order);
    }
    PreferenceProfile::new(names, orders)
}

/// Pairwise support counts `n_xy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMatrix {
    m: usize,
    n: usize,
    counts: Vec<usize>,
}

impl SupportMatrix {
    pub fn get(&self, x: Alternative, y: Alternative) -> usize {
        self.counts[x * self.m + y]
    }

    /// `n_xy − n_yx`.
    pub fn margin(&self, x: Alternative, y: Alternative) -> i64 {
        self.get(x, y) as i64 - self.get(y, x) as i64
    }

    pub fn num_voters(&self) -> usize {
        self.n
    }

    pub fn num_alternatives(&self) -> usize {
        self.m
    }
}

pub fn support_matrix(profile: &PreferenceProfile) -> SupportMatrix {
    let m = profile.num_alternatives();
    let mut counts = vec![0usize; m * m];
    for ranking in profile.rankings() {
        let order = ranking.order();
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                counts[x * m + y] += 1;
            }
        }
    }
    SupportMatrix {
        m,
        n: profile.num_voters(),
        counts,
    }
}

/// Outcome of the majority comparison of a row alternative against a column
/// alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    StrictlyBeats,
    Tied,
    StrictlyLosesTo,
}

impl Comparison {
    fn flip(self) -> Self {
        match self {
            Comparison::StrictlyBeats => Comparison::StrictlyLosesTo,
            Comparison::Tied => Comparison::Tied,
            Comparison::StrictlyLosesTo => Comparison::StrictlyBeats,
        }
    }
}

/// Complete majority relation with strict and tie parts. Diagonal entries are
/// stored as `Tied` and never consulted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MajorityRelation {
    m: usize,
    table: Vec<Comparison>,
}

impl MajorityRelation {
    pub fn from_support(support: &SupportMatrix) -> Self {
        let m = support.num_alternatives();
        let table = (0..m * m)
            .map(|k| {
                let (x, y) = (k / m, k % m);
                match support.get(x, y).cmp(&support.get(y, x)) {
                    std::cmp::Ordering::Greater => Comparison::StrictlyBeats,
                    std::cmp::Ordering::Equal => Comparison::Tied,
                    std::cmp::Ordering::Less => Comparison::StrictlyLosesTo,
                }
            })
            .collect();
        Self { m, table }
    }

    /// Builds a relation from `cmp(x, y)` evaluated on every ordered pair;
    /// rejects tables whose entries for `(x, y)` and `(y, x)` disagree.
    pub fn from_fn(
        m: usize,
        mut cmp: impl FnMut(Alternative, Alternative) -> Comparison,
    ) -> Result<Self, ProfileError> {
        let mut table = vec![Comparison::Tied; m * m];
        for x in 0..m {
            for y in 0..m {
                if x != y {
                    table[x * m + y] = cmp(x, y);
                }
            }
        }
        for x in 0..m {
            for y in x + 1..m {
                if table[x * m + y] != table[y * m + x].flip() {
                    return Err(ProfileError::IncompleteRelation(format!(
                        "entries for ({x}, {y}) are not mutually consistent"
                    )));
                }
            }
        }
        Ok(Self { m, table })
    }

    /// Relation whose strict part is exactly `edges` (`(x, y)` meaning
    /// `x ≻ y`); every other pair is tied.
    pub fn from_strict_edges(m: usize, edges: &[(Alternative, Alternative)]) -> Result<Self, ProfileError> {
        let mut table = vec![Comparison::Tied; m * m];
        for &(x, y) in edges {
            if x >= m || y >= m || x == y {
                return Err(ProfileError::IncompleteRelation(format!("invalid edge ({x}, {y})")));
            }
            if table[y * m + x] == Comparison::StrictlyBeats {
                return Err(ProfileError::IncompleteRelation(format!(
                    "both ({x}, {y}) and ({y}, {x}) are strict"
                )));
            }
            table[x * m + y] = Comparison::StrictlyBeats;
            table[y * m + x] = Comparison::StrictlyLosesTo;
        }
        Ok(Self { m, table })
    }

    pub fn num_alternatives(&self) -> usize {
        self.m
    }

    pub fn compare(&self, x: Alternative, y: Alternative) -> Comparison {
        self.table[x * self.m + y]
    }

    /// `x ≻ y`.
    pub fn strictly_beats(&self, x: Alternative, y: Alternative) -> bool {
        x != y && self.compare(x, y) == Comparison::StrictlyBeats
    }

    /// `x ≿ y` for distinct alternatives.
    pub fn weakly_beats(&self, x: Alternative, y: Alternative) -> bool {
        x != y && self.compare(x, y) != Comparison::StrictlyLosesTo
    }

    pub fn tied(&self, x: Alternative, y: Alternative) -> bool {
        x != y && self.compare(x, y) == Comparison::Tied
    }

    /// +1, 0 or −1 according to the strict part.
    pub fn sign(&self, x: Alternative, y: Alternative) -> i8 {
        if x == y {
            return 0;
        }
        match self.compare(x, y) {
            Comparison::StrictlyBeats => 1,
            Comparison::Tied => 0,
            Comparison::StrictlyLosesTo => -1,
        }
    }

    /// Alternative that strictly beats every other one, if it exists.
    pub fn condorcet_winner(&self) -> Option<Alternative> {
        (0..self.m).find(|&x| (0..self.m).all(|y| y == x || self.strictly_beats(x, y)))
    }
}

pub fn majority_relation(profile: &PreferenceProfile) -> MajorityRelation {
    MajorityRelation::from_support(&support_matrix(profile))
}

/// Plurality (`top`) and anti-plurality (`bottom`) counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tallies {
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

pub fn tallies(profile: &PreferenceProfile) -> Tallies {
    let m = profile.num_alternatives();
    let mut top = vec![0; m];
    let mut bottom = vec![0; m];
    for ranking in profile.rankings() {
        top[ranking.top()] += 1;
        bottom[ranking.bottom()] += 1;
    }
    Tallies { top, bottom }
}

/// Shortest-path length in the weak majority relation, or +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MajorityDistance {
    Finite(u32),
    Infinite,
}

impl MajorityDistance {
    pub fn is_finite(self) -> bool {
        matches!(self, MajorityDistance::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            MajorityDistance::Finite(k) => k as f64,
            MajorityDistance::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for MajorityDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MajorityDistance::Finite(k) => write!(f, "{k}"),
            MajorityDistance::Infinite => f.write_str("inf"),
        }
    }
}

fn bfs_from(rel: &MajorityRelation, source: Alternative) -> Vec<MajorityDistance> {
    let m = rel.num_alternatives();
    let mut dist = vec![MajorityDistance::Infinite; m];
    dist[source] = MajorityDistance::Finite(0);
    let mut queue = VecDeque::from([(source, 0u32)]);
    while let Some((u, k)) = queue.pop_front() {
        for w in 0..m {
            if dist[w] == MajorityDistance::Infinite && rel.weakly_beats(u, w) {
                dist[w] = MajorityDistance::Finite(k + 1);
                queue.push_back((w, k + 1));
            }
        }
    }
    dist
}

pub fn majority_distance(rel: &MajorityRelation, x: Alternative, y: Alternative) -> MajorityDistance {
    bfs_from(rel, x)[y]
}

/// All-pairs majority distances; row `x` holds `md(x, ·)`.
pub fn majority_distances(rel: &MajorityRelation) -> Vec<Vec<MajorityDistance>> {
    (0..rel.num_alternatives()).map(|x| bfs_from(rel, x)).collect()
}

/// `md(p, y) = Σ_x p(x)·md(x, y)`; +∞ iff some supported `x` cannot reach `y`.
pub fn lottery_majority_distance(rel: &MajorityRelation, p: &Lottery, y: Alternative) -> f64 {
    let mut total = 0.0;
    for x in p.support() {
        match majority_distance(rel, x, y) {
            MajorityDistance::Finite(k) => total += p.prob(x) * k as f64,
            MajorityDistance::Infinite => return f64::INFINITY,
        }
    }
    total
}

/// Same voters, rankings induced on `keep`. Kept alternatives retain their
/// relative order of indices.
pub fn restrict(profile: &PreferenceProfile, keep: &[Alternative]) -> Result<PreferenceProfile, ProfileError> {
    let m = profile.num_alternatives();
    let mut kept = vec![false; m];
    for &x in keep {
        if x >= m {
            return Err(ProfileError::UnknownAlternative(x));
        }
        kept[x] = true;
    }
    let mut new_index = vec![usize::MAX; m];
    let mut names = Vec::new();
    for x in 0..m {
        if kept[x] {
            new_index[x] = names.len();
            names.push(profile.name(x).to_owned());
        }
    }
    if names.is_empty() {
        return Err(ProfileError::EmptySubset);
    }
    let rankings = profile
        .rankings()
        .iter()
        .map(|r| r.order().iter().filter(|&&x| kept[x]).map(|&x| new_index[x]).collect())
        .collect();
    PreferenceProfile::new(names, rankings)
}

/// McGarvey realization: a profile whose majority relation equals `rel`.
///
/// Each strict pair `x ≻ y` contributes two voters, one ranking `x, y` on top
/// followed by the rest, the other ranking the rest reversed followed by
/// `x, y`, so that every other comparison cancels.
pub fn mcgarvey(rel: &MajorityRelation) -> Result<PreferenceProfile, ProfileError> {
    let m = rel.num_alternatives();
    if m == 0 {
        return Err(ProfileError::NoAlternatives);
    }
    for x in 0..m {
        for y in x + 1..m {
            if rel.compare(x, y) != rel.compare(y, x).flip() {
                return Err(ProfileError::IncompleteRelation(format!(
                    "entries for ({x}, {y}) are not mutually consistent"
                )));
            }
        }
    }
    let mut rankings = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if rel.strictly_beats(x, y) {
                let rest: Vec<Alternative> = (0..m).filter(|&z| z != x && z != y).collect();
                let mut upper = vec![x, y];
                upper.extend(rest.iter().copied());
                let mut lower: Vec<Alternative> = rest.iter().rev().copied().collect();
                lower.extend([x, y]);
                rankings.push(upper);
                rankings.push(lower);
            }
        }
    }
    if rankings.is_empty() {
        let forward: Vec<Alternative> = (0..m).collect();
        let backward: Vec<Alternative> = (0..m).rev().collect();
        rankings.push(forward);
        rankings.push(backward);
    }
    PreferenceProfile::from_indices(m, rankings)
}
