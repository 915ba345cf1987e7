//! Metric distortion of a lottery.
//!
//! [`distortion_at`] solves the compact program over voter–alternative
//! distances `d(x, v)` and a valuation `t` that is exact for a fixed optimal
//! alternative `x*`; [`oracle_distortion`] solves the naive program over a
//! full pseudo-metric with every triangle inequality and is meant for
//! cross-checking on small instances.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::lottery::Lottery;
use crate::lp::{solve, LinearProgram, LowerBound, LpError, LpOutcome, Relation, Var};
use crate::profiles::{lottery_majority_distance, majority_distances, majority_relation, Alternative, MajorityRelation, PreferenceProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistortionError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("distortion program for anchor {anchor} reported infeasible; this is a bug")]
    Lp1Infeasible { anchor: Alternative },
    #[error("lottery has {found} entries but the profile has {expected} alternatives")]
    LotteryMismatch { expected: usize, found: usize },
    #[error("alternative {0} is out of range")]
    AnchorOutOfRange(Alternative),
    #[error("invalid valuation: {0}")]
    InvalidValuation(String),
}

/// A distortion: a real number at least one, or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistortionValue {
    Finite(f64),
    Infinite,
}

impl DistortionValue {
    pub fn is_finite(self) -> bool {
        matches!(self, DistortionValue::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            DistortionValue::Finite(v) => v,
            DistortionValue::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            DistortionValue::Finite(v) => Some(v),
            DistortionValue::Infinite => None,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.partial_cmp(&other) == Some(Ordering::Less) {
            other
        } else {
            self
        }
    }

    /// Both infinite, or both finite and within `tol` relative to the larger.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        match (self, other) {
            (DistortionValue::Infinite, DistortionValue::Infinite) => true,
            (DistortionValue::Finite(a), DistortionValue::Finite(b)) => (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0),
            _ => false,
        }
    }
}

impl PartialOrd for DistortionValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for DistortionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistortionValue::Finite(v) => write!(f, "{v:.6}"),
            DistortionValue::Infinite => f.write_str("inf"),
        }
    }
}

fn check_inputs(profile: &PreferenceProfile, p: &Lottery, x_star: Alternative) -> Result<(), DistortionError> {
    let m = profile.num_alternatives();
    if p.len() != m {
        return Err(DistortionError::LotteryMismatch { expected: m, found: p.len() });
    }
    if x_star >= m {
        return Err(DistortionError::AnchorOutOfRange(x_star));
    }
    Ok(())
}

/// An optimal point of the compact program: `d[x][v]` and `t[x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lp1Solution {
    pub x_star: Alternative,
    pub value: f64,
    pub d: Vec<Vec<f64>>,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lp1Outcome {
    Optimal(Lp1Solution),
    Unbounded,
}

struct Lp1 {
    lp: LinearProgram,
    d: Vec<Vec<Var>>,
    t: Vec<Var>,
}

fn build_lp1(profile: &PreferenceProfile, p: &Lottery, s: Alternative) -> Lp1 {
    let m = profile.num_alternatives();
    let n = profile.num_voters();
    let mut lp = LinearProgram::new();
    let d: Vec<Vec<Var>> = (0..m)
        .map(|x| (0..n).map(|_| lp.add_var(p.prob(x), LowerBound::Unbounded)).collect())
        .collect();
    let t: Vec<Var> = (0..m).map(|_| lp.add_var(0.0, LowerBound::Value(0.0))).collect();
    lp.add_constraint(&[(t[s], 1.0)], Relation::Eq, 0.0);
    for (v, ranking) in profile.rankings().iter().enumerate() {
        let order = ranking.order();
        for i in 0..m {
            let x = order[i];
            for &y in &order[i..] {
                // d(x*, v) ≥ ½(t(x) − t(y))
                lp.add_constraint(&[(d[s][v], 1.0), (t[x], -0.5), (t[y], 0.5)], Relation::Ge, 0.0);
                // d(x, v) ≤ d(x*, v) + t(y)
                lp.add_constraint(&[(d[x][v], 1.0), (d[s][v], -1.0), (t[y], -1.0)], Relation::Le, 0.0);
            }
        }
        for x in 0..m {
            lp.add_constraint(&[(d[x][v], 1.0), (d[s][v], 1.0), (t[x], -1.0)], Relation::Ge, 0.0);
        }
    }
    let norm: Vec<(Var, f64)> = d[s].iter().map(|&var| (var, 1.0)).collect();
    lp.add_constraint(&norm, Relation::Eq, 1.0);
    Lp1 { lp, d, t }
}

/// Solves the compact program for anchor `x_star` and returns its optimal
/// point, or `Unbounded`.
pub fn solve_lp1(profile: &PreferenceProfile, p: &Lottery, x_star: Alternative) -> Result<Lp1Outcome, DistortionError> {
    check_inputs(profile, p, x_star)?;
    let program = build_lp1(profile, p, x_star);
    match solve(&program.lp)? {
        LpOutcome::Optimal { value, x } => Ok(Lp1Outcome::Optimal(Lp1Solution {
            x_star,
            value,
            d: program.d.iter().map(|row| row.iter().map(|&var| x[var]).collect()).collect(),
            t: program.t.iter().map(|&var| x[var]).collect(),
        })),
        LpOutcome::Unbounded => Ok(Lp1Outcome::Unbounded),
        LpOutcome::Infeasible => {
            log::error!("compact distortion program infeasible for anchor {x_star}");
            Err(DistortionError::Lp1Infeasible { anchor: x_star })
        }
    }
}

/// `sup_d sc(p, d)/sc(x*, d)` over metrics consistent with the profile.
pub fn distortion_at(profile: &PreferenceProfile, p: &Lottery, x_star: Alternative) -> Result<DistortionValue, DistortionError> {
    Ok(match solve_lp1(profile, p, x_star)? {
        Lp1Outcome::Optimal(sol) => DistortionValue::Finite(sol.value),
        Lp1Outcome::Unbounded => DistortionValue::Infinite,
    })
}

/// Maximum of [`distortion_at`] over all anchors.
pub fn metric_distortion(profile: &PreferenceProfile, p: &Lottery) -> Result<DistortionValue, DistortionError> {
    let mut worst = DistortionValue::Finite(1.0);
    for x_star in profile.alternatives() {
        worst = worst.max(distortion_at(profile, p, x_star)?);
        if !worst.is_finite() {
            break;
        }
    }
    Ok(worst)
}

/// Variables of a symmetric pseudo-metric on voters `0..n` followed by
/// alternatives `n..n+m`.
struct FullMetric {
    size: usize,
    index: Vec<Option<Var>>,
}

impl FullMetric {
    fn new(lp: &mut LinearProgram, size: usize) -> Self {
        let mut index = vec![None; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let var = lp.add_var(0.0, LowerBound::Value(0.0));
                index[i * size + j] = Some(var);
                index[j * size + i] = Some(var);
            }
        }
        Self { size, index }
    }

    fn var(&self, i: usize, j: usize) -> Option<Var> {
        self.index[i * self.size + j]
    }

    /// Triangle inequalities and consistency with every ranking.
    fn add_metric_constraints(&self, lp: &mut LinearProgram, profile: &PreferenceProfile) {
        let n = profile.num_voters();
        for i in 0..self.size {
            for j in 0..self.size {
                for k in i + 1..self.size {
                    if j == i || j == k {
                        continue;
                    }
                    let ik = self.var(i, k).expect("distinct points");
                    let ij = self.var(i, j).expect("distinct points");
                    let jk = self.var(j, k).expect("distinct points");
                    lp.add_constraint(&[(ik, 1.0), (ij, -1.0), (jk, -1.0)], Relation::Le, 0.0);
                }
            }
        }
        for (v, ranking) in profile.rankings().iter().enumerate() {
            for pair in ranking.order().windows(2) {
                let near = self.var(v, n + pair[0]).expect("distinct points");
                let far = self.var(v, n + pair[1]).expect("distinct points");
                lp.add_constraint(&[(near, 1.0), (far, -1.0)], Relation::Le, 0.0);
            }
        }
    }

    fn cost_terms(&self, n: usize, x: Alternative, weight: f64) -> Vec<(Var, f64)> {
        (0..n).map(|v| (self.var(v, n + x).expect("distinct points"), weight)).collect()
    }
}

/// Brute-force distortion over full pseudo-metrics. Intended for small
/// instances (`n + m` up to about 14).
pub fn oracle_distortion(profile: &PreferenceProfile, p: &Lottery, x_star: Alternative) -> Result<DistortionValue, DistortionError> {
    check_inputs(profile, p, x_star)?;
    let n = profile.num_voters();
    let m = profile.num_alternatives();

    let mut lp = LinearProgram::new();
    let metric = FullMetric::new(&mut lp, n + m);
    metric.add_metric_constraints(&mut lp, profile);
    lp.add_constraint(&metric.cost_terms(n, x_star, 1.0), Relation::Eq, 1.0);
    for x in 0..m {
        for (var, w) in metric.cost_terms(n, x, p.prob(x)) {
            lp.set_cost(var, lp.objective()[var] + w);
        }
    }
    let normalized = match solve(&lp)? {
        LpOutcome::Optimal { value, .. } => DistortionValue::Finite(value),
        LpOutcome::Unbounded => DistortionValue::Infinite,
        LpOutcome::Infeasible => return Err(LpError::NumericalFailure("normalized metric program infeasible".into()).into()),
    };

    // Metrics with sc(x*) = 0: the ratio is infinite if one of them gives
    // the lottery positive cost, and 0/0 = 1 otherwise.
    let mut zero = LinearProgram::new();
    let metric0 = FullMetric::new(&mut zero, n + m);
    metric0.add_metric_constraints(&mut zero, profile);
    zero.add_constraint(&metric0.cost_terms(n, x_star, 1.0), Relation::Eq, 0.0);
    let lottery_cost: Vec<(Var, f64)> = (0..m).flat_map(|x| metric0.cost_terms(n, x, p.prob(x))).collect();
    zero.add_constraint(&lottery_cost, Relation::Ge, 1.0);
    let zero_regime = match solve(&zero)? {
        LpOutcome::Infeasible => DistortionValue::Finite(1.0),
        LpOutcome::Optimal { .. } | LpOutcome::Unbounded => DistortionValue::Infinite,
    };
    Ok(normalized.max(zero_regime))
}

/// A pseudo-metric on voters `0..n` and alternatives `n..n+m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricWitness {
    n: usize,
    m: usize,
    dist: Vec<f64>,
}

impl MetricWitness {
    /// Builds the metric determined by voter–alternative distances
    /// `va[x][v]`: alternatives are as close as their best common voter and
    /// voters as close as their best common alternative.
    pub fn from_voter_distances(va: &[Vec<f64>]) -> Self {
        let m = va.len();
        let n = va.first().map_or(0, Vec::len);
        let size = n + m;
        let mut dist = vec![0.0; size * size];
        for x in 0..m {
            for v in 0..n {
                dist[v * size + n + x] = va[x][v];
                dist[(n + x) * size + v] = va[x][v];
            }
        }
        for x in 0..m {
            for y in 0..m {
                if x != y {
                    dist[(n + x) * size + n + y] = (0..n).map(|v| va[x][v] + va[y][v]).fold(f64::INFINITY, f64::min);
                }
            }
        }
        for v in 0..n {
            for w in 0..n {
                if v != w {
                    dist[v * size + w] = (0..m).map(|x| va[x][v] + va[x][w]).fold(f64::INFINITY, f64::min);
                }
            }
        }
        Self { n, m, dist }
    }

    pub fn num_voters(&self) -> usize {
        self.n
    }

    pub fn num_alternatives(&self) -> usize {
        self.m
    }

    /// Distance between points `i` and `j` (voters first, then alternatives).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * (self.n + self.m) + j]
    }

    pub fn voter_distance(&self, v: usize, x: Alternative) -> f64 {
        self.get(v, self.n + x)
    }

    pub fn social_cost(&self, x: Alternative) -> f64 {
        (0..self.n).map(|v| self.voter_distance(v, x)).sum()
    }

    pub fn lottery_cost(&self, p: &Lottery) -> f64 {
        (0..self.m).map(|x| p.prob(x) * self.social_cost(x)).sum()
    }

    /// `sc(p)/sc(x*)` with `0/0 = 1` and `z/0 = ∞`.
    pub fn ratio(&self, p: &Lottery, x_star: Alternative) -> DistortionValue {
        let num = self.lottery_cost(p);
        let den = self.social_cost(x_star);
        if den > 0.0 {
            DistortionValue::Finite(num / den)
        } else if num > 0.0 {
            DistortionValue::Infinite
        } else {
            DistortionValue::Finite(1.0)
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            n: self.n,
            m: self.m,
            dist: self.dist.iter().map(|d| d * lambda).collect(),
        }
    }

    /// Checks the pseudo-metric axioms (triangle within `1e−7`) and
    /// consistency with `profile` (within `1e−9`).
    pub fn check(&self, profile: &PreferenceProfile) -> Result<(), String> {
        if profile.num_voters() != self.n || profile.num_alternatives() != self.m {
            return Err("dimensions do not match the profile".into());
        }
        let size = self.n + self.m;
        for i in 0..size {
            if self.get(i, i) != 0.0 {
                return Err(format!("d({i},{i}) is not zero"));
            }
            for j in 0..size {
                let d = self.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(format!("d({i},{j}) = {d} is not a nonnegative real"));
                }
                if d != self.get(j, i) {
                    return Err(format!("d({i},{j}) is not symmetric"));
                }
            }
        }
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    if self.get(i, k) > self.get(i, j) + self.get(j, k) + 1e-7 {
                        return Err(format!("triangle inequality fails for ({i},{j},{k})"));
                    }
                }
            }
        }
        for (v, ranking) in profile.rankings().iter().enumerate() {
            for pair in ranking.order().windows(2) {
                if self.voter_distance(v, pair[0]) > self.voter_distance(v, pair[1]) + 1e-9 {
                    return Err(format!("voter {v} is closer to a less preferred alternative"));
                }
            }
        }
        Ok(())
    }
}

/// Anchor `x*` and nonnegative `t` with `t(x*) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedValuation {
    anchor: Alternative,
    t: Vec<f64>,
}

impl BiasedValuation {
    pub fn new(anchor: Alternative, t: Vec<f64>) -> Result<Self, DistortionError> {
        if anchor >= t.len() {
            return Err(DistortionError::AnchorOutOfRange(anchor));
        }
        if t.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(DistortionError::InvalidValuation("values must be finite and nonnegative".into()));
        }
        if t[anchor] != 0.0 {
            return Err(DistortionError::InvalidValuation("the anchor must have value 0".into()));
        }
        Ok(Self { anchor, t })
    }

    pub fn anchor(&self) -> Alternative {
        self.anchor
    }

    pub fn values(&self) -> &[f64] {
        &self.t
    }
}

/// The biased metric of a valuation: `d(x*, v) = ½ max_{x ⪰_v y} t(x) − t(y)`
/// and `d(x, v) = d(x*, v) + min_{y : x ⪰_v y} t(y)`.
pub fn biased_metric(profile: &PreferenceProfile, valuation: &BiasedValuation) -> Result<MetricWitness, DistortionError> {
    let m = profile.num_alternatives();
    let t = valuation.values();
    if t.len() != m {
        return Err(DistortionError::InvalidValuation(format!("expected {m} values, found {}", t.len())));
    }
    let mut va = vec![vec![0.0; profile.num_voters()]; m];
    for (v, ranking) in profile.rankings().iter().enumerate() {
        let order = ranking.order();
        // Scan bottom-up so that `below_min` is min t over alternatives ranked
        // at or below the current one, and `spread` the largest drop seen.
        let mut below_min = f64::INFINITY;
        let mut spread: f64 = 0.0;
        let mut suffix_min = vec![0.0; m];
        for k in (0..m).rev() {
            let x = order[k];
            below_min = below_min.min(t[x]);
            suffix_min[k] = below_min;
            spread = spread.max(t[x] - below_min);
        }
        let base = 0.5 * spread;
        for k in 0..m {
            va[order[k]][v] = base + suffix_min[k];
        }
    }
    Ok(MetricWitness::from_voter_distances(&va))
}

/// Turns a feasible point of the compact program into a consistent metric
/// whose cost ratio is at least the point's objective value.
pub fn extract_witness_metric(profile: &PreferenceProfile, solution: &Lp1Solution) -> MetricWitness {
    let s = solution.x_star;
    let mut va = solution.d.clone();
    for (v, ranking) in profile.rankings().iter().enumerate() {
        let anchor = va[s][v];
        let order = ranking.order();
        let pivot = ranking.position(s);
        // Above the anchor the constraints already force d(x, v) = d(x*, v).
        for &x in &order[..pivot] {
            va[x][v] = anchor;
        }
        let mut running = anchor;
        for &x in &order[pivot + 1..] {
            running = running.max(va[x][v]);
            va[x][v] = running;
        }
    }
    MetricWitness::from_voter_distances(&va)
}

/// `1 + 2 max_x md(p, x)`, an upper bound on the distortion of `p`.
pub fn majority_distance_bound(profile: &PreferenceProfile, p: &Lottery) -> DistortionValue {
    let rel = majority_relation(profile);
    let worst = profile
        .alternatives()
        .map(|x| lottery_majority_distance(&rel, p, x))
        .fold(0.0, f64::max);
    if worst.is_finite() {
        DistortionValue::Finite(1.0 + 2.0 * worst)
    } else {
        DistortionValue::Infinite
    }
}

/// Lottery minimizing `max_x md(p, x)` over lotteries depending only on the
/// majority relation, together with that optimal value.
pub fn optimal_majoritarian_lottery(rel: &MajorityRelation) -> Result<(Lottery, f64), DistortionError> {
    let m = rel.num_alternatives();
    let md = majority_distances(rel);
    let top: Vec<Alternative> = (0..m).filter(|&y| md[y].iter().all(|d| d.is_finite())).collect();
    if top.is_empty() {
        return Ok((Lottery::uniform(m), f64::INFINITY));
    }
    if m == 1 {
        return Ok((Lottery::degenerate(1, 0), 0.0));
    }
    let mut lp = LinearProgram::new();
    let p: Vec<Var> = top.iter().map(|_| lp.add_var(0.0, LowerBound::Value(0.0))).collect();
    let z = lp.add_var(-1.0, LowerBound::Unbounded);
    for x in 0..m {
        let mut terms: Vec<(Var, f64)> = top.iter().zip(&p).map(|(&y, &var)| (var, md[y][x].as_f64())).collect();
        terms.push((z, -1.0));
        lp.add_constraint(&terms, Relation::Le, 0.0);
    }
    let ones: Vec<(Var, f64)> = p.iter().map(|&var| (var, 1.0)).collect();
    lp.add_constraint(&ones, Relation::Eq, 1.0);
    match solve(&lp)? {
        LpOutcome::Optimal { x, .. } => {
            let mut probs = vec![0.0; m];
            for (&y, &var) in top.iter().zip(&p) {
                probs[y] = x[var];
            }
            let lottery = Lottery::from_weights(probs, 1e-12).map_err(|e| LpError::NumericalFailure(e.to_string()))?;
            let value = (0..m).map(|x| lottery_majority_distance(rel, &lottery, x)).fold(0.0, f64::max);
            Ok((lottery, value))
        }
        other => Err(LpError::NumericalFailure(format!("majority-distance program ended as {other:?}")).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::build_profile;

    fn p3() -> PreferenceProfile {
        build_profile(&[
            vec!["a", "b", "c"],
            vec!["a", "c", "b"],
            vec!["b", "a", "c"],
            vec!["b", "c", "a"],
            vec!["c", "a", "b"],
            vec!["c", "b", "a"],
        ])
        .unwrap()
    }

    fn p4() -> PreferenceProfile {
        build_profile(&[
            vec!["a", "b", "c"],
            vec!["a", "b", "c"],
            vec!["b", "c", "a"],
            vec!["c", "a", "b"],
        ])
        .unwrap()
    }

    fn unanimous() -> PreferenceProfile {
        build_profile(&vec![vec!["a", "b", "c"]; 3]).unwrap()
    }

    fn assert_value(v: DistortionValue, expected: f64) {
        assert!(v.approx_eq(DistortionValue::Finite(expected), 1e-7), "{v} != {expected}");
    }

    #[test]
    fn uniform_on_full_permutation_profile() {
        let p = Lottery::uniform(3);
        for x in 0..3 {
            assert_value(distortion_at(&p3(), &p, x).unwrap(), 2.0);
        }
        assert_value(metric_distortion(&p3(), &p).unwrap(), 2.0);
    }

    #[test]
    fn degenerate_on_full_permutation_profile() {
        assert_value(distortion_at(&p3(), &Lottery::degenerate(3, 0), 1).unwrap(), 2.5);
    }

    #[test]
    fn unanimous_profile_is_unbounded_for_a_bad_lottery() {
        let p = Lottery::degenerate(3, 1);
        assert_eq!(distortion_at(&unanimous(), &p, 0).unwrap(), DistortionValue::Infinite);
        assert_eq!(oracle_distortion(&unanimous(), &p, 0).unwrap(), DistortionValue::Infinite);
        assert_eq!(metric_distortion(&unanimous(), &p).unwrap(), DistortionValue::Infinite);
    }

    #[test]
    fn oracle_fixtures() {
        assert_value(oracle_distortion(&p3(), &Lottery::uniform(3), 0).unwrap(), 2.0);
        assert_value(oracle_distortion(&unanimous(), &Lottery::degenerate(3, 0), 0).unwrap(), 1.0);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            distortion_at(&p3(), &Lottery::uniform(2), 0),
            Err(DistortionError::LotteryMismatch { .. })
        ));
        assert!(matches!(
            distortion_at(&p3(), &Lottery::uniform(3), 3),
            Err(DistortionError::AnchorOutOfRange(3))
        ));
    }

    #[test]
    fn biased_metric_costs() {
        let profile = p3();
        let t = BiasedValuation::new(0, vec![0.0, 2.0, 2.0]).unwrap();
        let d = biased_metric(&profile, &t).unwrap();
        d.check(&profile).unwrap();
        assert!((d.social_cost(0) - 4.0).abs() < 1e-12);
        assert!((d.social_cost(1) - 10.0).abs() < 1e-12);
        assert!((d.social_cost(2) - 10.0).abs() < 1e-12);
        let zero = biased_metric(&profile, &BiasedValuation::new(1, vec![0.0; 3]).unwrap()).unwrap();
        assert!((0..6).all(|v| (0..3).all(|x| zero.voter_distance(v, x) == 0.0)));
    }

    #[test]
    fn invalid_valuations() {
        assert!(BiasedValuation::new(0, vec![1.0, 0.0]).is_err());
        assert!(BiasedValuation::new(0, vec![0.0, -1.0]).is_err());
        assert!(BiasedValuation::new(2, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn witness_certifies_the_optimum() {
        let profile = p3();
        let p = Lottery::uniform(3);
        let Lp1Outcome::Optimal(sol) = solve_lp1(&profile, &p, 0).unwrap() else {
            panic!("expected a bounded program");
        };
        let w = extract_witness_metric(&profile, &sol);
        w.check(&profile).unwrap();
        assert_value(w.ratio(&p, 0), 2.0);
    }

    #[test]
    fn witness_of_the_flat_point() {
        let profile = p3();
        let sol = Lp1Solution {
            x_star: 0,
            value: 1.0,
            d: vec![vec![1.0 / 6.0; 6]; 3],
            t: vec![0.0; 3],
        };
        let w = extract_witness_metric(&profile, &sol);
        w.check(&profile).unwrap();
        assert_value(w.ratio(&Lottery::uniform(3), 0), 1.0);
    }

    #[test]
    fn bounds_from_majority_distances() {
        let half = Lottery::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_value(majority_distance_bound(&p4(), &half), 4.0);
        let condorcet = build_profile(&[vec!["a", "b", "c"], vec!["b", "a", "c"], vec!["a", "c", "b"]]).unwrap();
        assert_value(majority_distance_bound(&condorcet, &Lottery::degenerate(3, 0)), 3.0);
    }

    #[test]
    fn optimal_majoritarian_fixtures() {
        let cycle = build_profile(&[vec!["a", "b", "c"], vec!["b", "c", "a"], vec!["c", "a", "b"]]).unwrap();
        let (p, value) = optimal_majoritarian_lottery(&majority_relation(&cycle)).unwrap();
        assert!((value - 1.0).abs() < 1e-9);
        assert!(p.max_abs_diff(&Lottery::uniform(3)) < 1e-9);

        let rel = MajorityRelation::from_strict_edges(3, &[(1, 0), (1, 2), (0, 2)]).unwrap();
        let (p, value) = optimal_majoritarian_lottery(&rel).unwrap();
        assert_eq!(p, Lottery::degenerate(3, 1));
        assert!((value - 1.0).abs() < 1e-12);

        let single = MajorityRelation::from_strict_edges(1, &[]).unwrap();
        assert_eq!(optimal_majoritarian_lottery(&single).unwrap().1, 0.0);
    }

    #[test]
    fn five_cycle_value() {
        let edges: Vec<_> = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, (i + 2) % 5)]).collect();
        let rel = MajorityRelation::from_strict_edges(5, &edges).unwrap();
        let (_, value) = optimal_majoritarian_lottery(&rel).unwrap();
        assert!((value - 1.2).abs() < 1e-9);
    }

    #[test]
    fn value_ordering() {
        let a = DistortionValue::Finite(2.0);
        assert_eq!(a.max(DistortionValue::Infinite), DistortionValue::Infinite);
        assert_eq!(DistortionValue::Infinite.max(a), DistortionValue::Infinite);
        assert_eq!(a.max(DistortionValue::Finite(1.5)), a);
        assert_eq!(DistortionValue::Infinite.to_string(), "inf");
    }
}
