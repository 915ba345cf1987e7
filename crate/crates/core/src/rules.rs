//! Randomized social choice rules: uniform random dictatorship, randomized
//! Plurality-Veto, C1 and C2 maximal lotteries, and the CRWW mixture of C2ML
//! with β-radius rules.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lottery::Lottery;
use crate::lp::{solve_matrix_game, LpError};
use crate::profiles::{majority_relation, restrict, support_matrix, tallies, Alternative, PreferenceProfile, SupportMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("β = {0} is outside (1/2, 1]")]
    BetaOutOfRange(f64),
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
}

/// `p(x) = t(x)/n`.
pub fn random_dictatorship(profile: &PreferenceProfile) -> Lottery {
    let n = profile.num_voters() as f64;
    let t = tallies(profile);
    Lottery::from_weights(t.top.iter().map(|&c| c as f64 / n).collect(), 0.0)
        .expect("tallies of a valid profile form a distribution")
}

/// Alternatives that win Plurality-Veto under some ordering of the voters.
///
/// `x` wins for some order iff `t(x) > 0` and each voter `w` can be assigned
/// one plurality token of an alternative `y` with `x ⪰_w y`, every `y`
/// handing out exactly `t(y)` tokens. That assignment is a bipartite
/// b-matching, found here with augmenting paths.
pub fn plurality_veto_winners(profile: &PreferenceProfile) -> Vec<Alternative> {
    let top = tallies(profile).top;
    profile
        .alternatives()
        .filter(|&x| top[x] > 0 && has_veto_assignment(profile, &top, x))
        .collect()
}

fn has_veto_assignment(profile: &PreferenceProfile, capacity: &[usize], x: Alternative) -> bool {
    let m = profile.num_alternatives();
    let n = profile.num_voters();
    let options: Vec<Vec<Alternative>> = profile
        .rankings()
        .iter()
        .map(|r| r.order()[r.position(x)..].to_vec())
        .collect();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut assigned: Vec<Option<Alternative>> = vec![None; n];
    for voter in 0..n {
        let mut visited = vec![false; m];
        if !augment(voter, &options, capacity, &mut holders, &mut assigned, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    voter: usize,
    options: &[Vec<Alternative>],
    capacity: &[usize],
    holders: &mut [Vec<usize>],
    assigned: &mut [Option<Alternative>],
    visited: &mut [bool],
) -> bool {
    for &y in &options[voter] {
        if visited[y] {
            continue;
        }
        visited[y] = true;
        if holders[y].len() < capacity[y] {
            holders[y].push(voter);
            assigned[voter] = Some(y);
            return true;
        }
        for k in 0..holders[y].len() {
            let other = holders[y][k];
            if augment(other, options, capacity, holders, assigned, visited) {
                holders[y][k] = voter;
                assigned[voter] = Some(y);
                return true;
            }
        }
    }
    false
}

/// Uniform lottery over [`plurality_veto_winners`].
pub fn randomized_plurality_veto(profile: &PreferenceProfile) -> Lottery {
    let winners = plurality_veto_winners(profile);
    Lottery::uniform_over(profile.num_alternatives(), &winners)
}

fn margin_game(support: &SupportMatrix) -> Vec<Vec<f64>> {
    let m = support.num_alternatives();
    (0..m)
        .map(|x| (0..m).map(|y| support.margin(x, y) as f64).collect())
        .collect()
}

/// Minimum-norm maximin strategy of the game with payoffs `n_xy − n_yx`.
pub fn c2_maximal_lottery(profile: &PreferenceProfile) -> Result<Lottery, RuleError> {
    if profile.num_alternatives() == 1 {
        return Ok(Lottery::degenerate(1, 0));
    }
    Ok(solve_matrix_game(&margin_game(&support_matrix(profile)))?)
}

/// Minimum-norm maximin strategy of the game on the signs of the strict
/// majority relation.
pub fn c1_maximal_lottery(profile: &PreferenceProfile) -> Result<Lottery, RuleError> {
    c1_maximal_lottery_of(&majority_relation(profile))
}

/// [`c1_maximal_lottery`] computed from the majority relation alone.
pub fn c1_maximal_lottery_of(rel: &crate::profiles::MajorityRelation) -> Result<Lottery, RuleError> {
    let m = rel.num_alternatives();
    if m == 1 {
        return Ok(Lottery::degenerate(1, 0));
    }
    let game: Vec<Vec<f64>> = (0..m).map(|x| (0..m).map(|y| rel.sign(x, y) as f64).collect()).collect();
    Ok(solve_matrix_game(&game)?)
}

fn check_beta(beta: f64) -> Result<(), RuleError> {
    if beta > 0.5 && beta <= 1.0 {
        Ok(())
    } else {
        Err(RuleError::BetaOutOfRange(beta))
    }
}

fn uncovered_from_support(support: &SupportMatrix, beta: f64) -> Vec<Alternative> {
    let m = support.num_alternatives();
    let threshold = beta * support.num_voters() as f64;
    let strong = |x: Alternative, y: Alternative| x != y && support.get(x, y) as f64 >= threshold;
    let covers = |x: Alternative, y: Alternative| strong(x, y) && (0..m).all(|z| !strong(z, x) || strong(z, y));
    (0..m).filter(|&y| !(0..m).any(|x| covers(x, y))).collect()
}

/// Alternatives not β-covered: `x` β-covers `y` if `n_xy ≥ βn` and every `z`
/// with `n_zx ≥ βn` also has `n_zy ≥ βn`.
pub fn beta_uncovered_set(profile: &PreferenceProfile, beta: f64) -> Result<Vec<Alternative>, RuleError> {
    check_beta(beta)?;
    Ok(uncovered_from_support(&support_matrix(profile), beta))
}

fn rd_on_subset(profile: &PreferenceProfile, keep: &[Alternative]) -> Lottery {
    let sub = restrict(profile, keep).expect("uncovered set is nonempty");
    let inner = random_dictatorship(&sub);
    let mut probs = vec![0.0; profile.num_alternatives()];
    for (i, &x) in keep.iter().enumerate() {
        probs[x] = inner.prob(i);
    }
    Lottery::new(probs).expect("re-embedding preserves the distribution")
}

/// Random dictatorship on the profile restricted to the β-uncovered set.
pub fn beta_radius_rule(profile: &PreferenceProfile, beta: f64) -> Result<Lottery, RuleError> {
    let keep = beta_uncovered_set(profile, beta)?;
    Ok(rd_on_subset(profile, &keep))
}

/// Parameters of the CRWW mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrwwConstants {
    /// Upper end of the β range.
    pub b: f64,
    /// Weight of the C2ML component.
    pub p_mix: f64,
}

impl CrwwConstants {
    pub const B: f64 = 0.876353;

    pub fn new() -> Self {
        Self::with_upper(Self::B)
    }

    /// `p_mix = 1/(1 + atanh(b) − atanh(1/2))`, which normalizes the density.
    pub fn with_upper(b: f64) -> Self {
        let p_mix = 1.0 / (1.0 + b.atanh() - 0.5f64.atanh());
        Self { b, p_mix }
    }

    /// `ρ(β) = p/((1−p)(1−β²))` on `(1/2, b)`, zero elsewhere.
    pub fn density(&self, beta: f64) -> f64 {
        if beta > 0.5 && beta < self.b {
            self.p_mix / ((1.0 - self.p_mix) * (1.0 - beta * beta))
        } else {
            0.0
        }
    }

    /// `∫ ρ` over `(lo, hi) ⊆ (1/2, b)`, scaled by `1 − p_mix`.
    pub fn interval_weight(&self, lo: f64, hi: f64) -> f64 {
        self.p_mix * (hi.atanh() - lo.atanh())
    }
}

impl Default for CrwwConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// A maximal β-interval on which the uncovered set is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct CrwwInterval {
    pub lo: f64,
    pub hi: f64,
    /// Mixture weight, already multiplied by `1 − p_mix`.
    pub weight: f64,
    pub uncovered: Vec<Alternative>,
}

/// Splits `(1/2, b)` at every support ratio `n_xy/n` and reports the weight
/// and uncovered set of each piece. The weights sum to `1 − p_mix`.
pub fn crww_intervals(profile: &PreferenceProfile, constants: &CrwwConstants) -> Vec<CrwwInterval> {
    let support = support_matrix(profile);
    let n = profile.num_voters() as f64;
    let mut cuts = vec![0.5, constants.b];
    for x in profile.alternatives() {
        for y in profile.alternatives() {
            let r = support.get(x, y) as f64 / n;
            if x != y && r > 0.5 && r < constants.b {
                cuts.push(r);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            CrwwInterval {
                lo,
                hi,
                weight: constants.interval_weight(lo, hi),
                uncovered: uncovered_from_support(&support, 0.5 * (lo + hi)),
            }
        })
        .collect()
}

/// `p·C2ML + (1−p)·∫ ρ(β)·β-radius(β) dβ`, integrated exactly piece by piece.
pub fn crww(profile: &PreferenceProfile) -> Result<Lottery, RuleError> {
    let m = profile.num_alternatives();
    if m == 1 {
        return Ok(Lottery::degenerate(1, 0));
    }
    let constants = CrwwConstants::new();
    let c2 = c2_maximal_lottery(profile)?;
    let mut probs: Vec<f64> = c2.probs().iter().map(|p| constants.p_mix * p).collect();
    for piece in crww_intervals(profile, &constants) {
        let local = rd_on_subset(profile, &piece.uncovered);
        for (acc, p) in probs.iter_mut().zip(local.probs()) {
            *acc += piece.weight * p;
        }
    }
    Lottery::from_weights(probs, 0.0).map_err(|e| RuleError::Lp(LpError::NumericalFailure(e.to_string())))
}

/// The five rules, in the column order used by experiment output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    RandomDictatorship,
    C1ML,
    C2ML,
    CRWW,
    PluralityVeto,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::RandomDictatorship,
        Rule::C1ML,
        Rule::C2ML,
        Rule::CRWW,
        Rule::PluralityVeto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::RandomDictatorship => "RandomDictatorship",
            Rule::C1ML => "C1ML",
            Rule::C2ML => "C2ML",
            Rule::CRWW => "CRWW",
            Rule::PluralityVeto => "PluralityVeto",
        }
    }

    pub fn apply(self, profile: &PreferenceProfile) -> Result<Lottery, RuleError> {
        match self {
            Rule::RandomDictatorship => Ok(random_dictatorship(profile)),
            Rule::C1ML => c1_maximal_lottery(profile),
            Rule::C2ML => c2_maximal_lottery(profile),
            Rule::CRWW => crww(profile),
            Rule::PluralityVeto => Ok(randomized_plurality_veto(profile)),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = RuleError;

    /// Accepts the full names and the abbreviations RD, RPV and PV,
    /// case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let rule = match key.as_str() {
            "randomdictatorship" | "rd" => Rule::RandomDictatorship,
            "c1ml" => Rule::C1ML,
            "c2ml" => Rule::C2ML,
            "crww" => Rule::CRWW,
            "pluralityveto" | "rpv" | "pv" => Rule::PluralityVeto,
            _ => return Err(RuleError::UnknownRule(s.to_owned())),
        };
        Ok(rule)
    }
}
