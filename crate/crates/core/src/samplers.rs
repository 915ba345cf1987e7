//! Seeded generators of random preference profiles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profiles::{Alternative, PreferenceProfile};

/// Name of the generator behind every sampler, for provenance records.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9); per-trial seeds via SplitMix64";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("invalid sampler settings: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Cube,
    Ball,
}

fn default_phi() -> f64 {
    0.5
}

fn default_alpha() -> f64 {
    10.0
}

fn default_dim() -> usize {
    3
}

fn default_geometry() -> Geometry {
    Geometry::Cube
}

/// Distribution of a single profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum Model {
    /// Impartial culture: i.i.d. uniform rankings.
    Ic,
    /// Mallows model with dispersion `phi`; `phi = 1` is impartial culture.
    Mallows {
        #[serde(default = "default_phi")]
        phi: f64,
        /// Central ranking; identity if absent.
        #[serde(default)]
        reference: Option<Vec<Alternative>>,
    },
    /// Pólya–Eggenberger urn starting with every ranking once; each draw is
    /// returned with `alpha` extra copies.
    Urn {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    /// Voters and alternatives uniform in `[−1, 1]^dim` or the unit ball;
    /// voters rank by Euclidean distance, ties broken by index.
    Euclidean {
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_geometry")]
        geometry: Geometry,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerSpec {
    pub model: Model,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(model: Model, m: usize, n: usize, seed: u64) -> Self {
        Self { model, m, n, seed }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let bad = |msg: String| Err(SamplerError::Invalid(msg));
        if self.m == 0 || self.n == 0 {
            return bad("m and n must be at least 1".into());
        }
        match &self.model {
            Model::Ic => {}
            Model::Mallows { phi, reference } => {
                if !(0.0..=1.0).contains(phi) {
                    return bad(format!("phi = {phi} is outside [0, 1]"));
                }
                if let Some(r) = reference {
                    let mut sorted = r.clone();
                    sorted.sort_unstable();
                    if sorted != (0..self.m).collect::<Vec<_>>() {
                        return bad("reference ranking must be a permutation of 0..m".into());
                    }
                }
            }
            Model::Urn { alpha } => {
                if !(alpha.is_finite() && *alpha >= 0.0) {
                    return bad(format!("alpha = {alpha} must be a nonnegative number"));
                }
            }
            Model::Euclidean { dim, .. } => {
                if *dim == 0 {
                    return bad("dim must be at least 1".into());
                }
            }
        }
        Ok(())
    }
}

/// SplitMix64 output for counter `i` of stream `seed`. A bijection in `i`, so
/// distinct trials never share a seed.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one profile; identical specs give identical profiles.
pub fn sample(spec: &SamplerSpec) -> Result<PreferenceProfile, SamplerError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rankings = match &spec.model {
        Model::Ic => (0..spec.n).map(|_| uniform_ranking(spec.m, &mut rng)).collect(),
        Model::Mallows { phi, reference } => {
            let reference = reference.clone().unwrap_or_else(|| (0..spec.m).collect());
            (0..spec.n).map(|_| mallows_ranking(&reference, *phi, &mut rng)).collect()
        }
        Model::Urn { alpha } => urn_rankings(spec.m, spec.n, *alpha, &mut rng),
        Model::Euclidean { dim, geometry } => euclidean(spec.m, spec.n, *dim, *geometry, &mut rng).rankings,
    };
    Ok(PreferenceProfile::from_indices(spec.m, rankings).expect("samplers emit permutations"))
}

/// `trials` profiles; trial `i` uses seed `sub_seed(spec.seed, i)`.
pub fn sample_batch(spec: &SamplerSpec, trials: usize) -> Result<Vec<PreferenceProfile>, SamplerError> {
    spec.validate()?;
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            sample(&SamplerSpec {
                seed: sub_seed(spec.seed, i),
                ..spec.clone()
            })
        })
        .collect()
}

fn uniform_ranking(m: usize, rng: &mut ChaCha8Rng) -> Vec<Alternative> {
    let mut order: Vec<Alternative> = (0..m).collect();
    order.shuffle(rng);
    order
}

/// Repeated insertion: the `i`-th reference element goes to position `j ≤ i`
/// with probability proportional to `phi^(i−j)`.
fn mallows_ranking(reference: &[Alternative], phi: f64, rng: &mut ChaCha8Rng) -> Vec<Alternative> {
    let mut order = Vec::with_capacity(reference.len());
    for (i, &x) in reference.iter().enumerate() {
        let weights: Vec<f64> = (0..=i).map(|j| phi.powi((i - j) as i32)).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pos = i;
        for (j, w) in weights.iter().enumerate() {
            if u < *w {
                pos = j;
                break;
            }
            u -= w;
        }
        order.insert(pos, x);
    }
    order
}

fn urn_rankings(m: usize, n: usize, alpha: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<Alternative>> {
    let fresh: f64 = (1..=m).map(|k| k as f64).product();
    let mut drawn: Vec<Vec<Alternative>> = Vec::with_capacity(n);
    for k in 0..n {
        let total = fresh + alpha * k as f64;
        let ranking = if rng.random::<f64>() * total < fresh {
            uniform_ranking(m, rng)
        } else {
            drawn[rng.random_range(0..k)].clone()
        };
        drawn.push(ranking);
    }
    drawn
}

/// A Euclidean profile together with the points that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanSample {
    pub alternatives: Vec<Vec<f64>>,
    pub voters: Vec<Vec<f64>>,
    pub rankings: Vec<Vec<Alternative>>,
}

fn random_point(dim: usize, geometry: Geometry, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let point: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if geometry == Geometry::Cube || point.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
            return point;
        }
    }
}

/// Ranking of `alternatives` by distance from `voter`, ties broken by index.
pub fn rank_by_distance(voter: &[f64], alternatives: &[Vec<f64>]) -> Vec<Alternative> {
    let sq = |a: &[f64]| a.iter().zip(voter).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let dist: Vec<f64> = alternatives.iter().map(|a| sq(a)).collect();
    let mut order: Vec<Alternative> = (0..alternatives.len()).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    order
}

fn euclidean(m: usize, n: usize, dim: usize, geometry: Geometry, rng: &mut ChaCha8Rng) -> EuclideanSample {
    let alternatives: Vec<Vec<f64>> = (0..m).map(|_| random_point(dim, geometry, rng)).collect();
    let voters: Vec<Vec<f64>> = (0..n).map(|_| random_point(dim, geometry, rng)).collect();
    let rankings = voters.iter().map(|v| rank_by_distance(v, &alternatives)).collect();
    EuclideanSample {
        alternatives,
        voters,
        rankings,
    }
}

/// The Euclidean profile `sample` would produce for `spec`, with its points.
pub fn sample_euclidean(spec: &SamplerSpec) -> Result<EuclideanSample, SamplerError> {
    spec.validate()?;
    match spec.model {
        Model::Euclidean { dim, geometry } => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            Ok(euclidean(spec.m, spec.n, dim, geometry, &mut rng))
        }
        _ => Err(SamplerError::Invalid("not a Euclidean model".into())),
    }
}
