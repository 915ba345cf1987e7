//! Probability distributions over a profile's alternatives.

use std::fmt;

use thiserror::Error;

use crate::profiles::Alternative;

/// Tolerance on `Σ p(x) = 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// Entries above `−NEGATIVE_TOLERANCE` are accepted and clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LotteryError {
    #[error("a lottery needs at least one alternative")]
    Empty,
    #[error("probability {value} of alternative {index} is negative or not finite")]
    InvalidEntry { index: usize, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    BadSum(f64),
    #[error("lottery has {found} entries but the profile has {expected} alternatives")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cannot parse lottery: {0}")]
    Syntax(String),
}

/// A validated probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery {
    probs: Vec<f64>,
}

impl Lottery {
    /// Validates `probs` and clamps tiny negative entries to zero. The vector
    /// is not renormalized; it must already sum to one within tolerance.
    pub fn new(mut probs: Vec<f64>) -> Result<Self, LotteryError> {
        if probs.is_empty() {
            return Err(LotteryError::Empty);
        }
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_TOLERANCE {
                return Err(LotteryError::InvalidEntry { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(LotteryError::BadSum(sum));
        }
        Ok(Self { probs })
    }

    /// Clamps negatives, zeroes entries below `floor` and rescales to sum one.
    /// Intended for solver output that is correct up to rounding.
    pub(crate) fn from_weights(mut weights: Vec<f64>, floor: f64) -> Result<Self, LotteryError> {
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(LotteryError::InvalidEntry { index: 0, value: *w });
            }
            if *w < floor {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(LotteryError::BadSum(sum));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Self::new(weights)
    }

    pub fn degenerate(m: usize, x: Alternative) -> Self {
        let mut probs = vec![0.0; m];
        probs[x] = 1.0;
        Self { probs }
    }

    pub fn uniform(m: usize) -> Self {
        Self {
            probs: vec![1.0 / m as f64; m],
        }
    }

    /// Uniform over `set`, zero elsewhere.
    pub fn uniform_over(m: usize, set: &[Alternative]) -> Self {
        let mut probs = vec![0.0; m];
        for &x in set {
            probs[x] = 1.0 / set.len() as f64;
        }
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, x: Alternative) -> f64 {
        self.probs[x]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Alternatives with positive probability, in index order.
    pub fn support(&self) -> impl Iterator<Item = Alternative> + '_ {
        self.probs.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(x, _)| x)
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest coordinate-wise difference.
    pub fn max_abs_diff(&self, other: &Lottery) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p:.6}")?;
        }
        Ok(())
    }
}

fn parse_number(token: &str) -> Result<f64, LotteryError> {
    let token = token.trim();
    let value = match token.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| LotteryError::Syntax(format!("bad number {token:?}")))?;
            let den: f64 = den.trim().parse().map_err(|_| LotteryError::Syntax(format!("bad number {token:?}")))?;
            if den == 0.0 {
                return Err(LotteryError::Syntax(format!("zero denominator in {token:?}")));
            }
            num / den
        }
        None => token.parse().map_err(|_| LotteryError::Syntax(format!("bad number {token:?}")))?,
    };
    if !value.is_finite() {
        return Err(LotteryError::Syntax(format!("non-finite number {token:?}")));
    }
    Ok(value)
}

/// Parses a lottery given either positionally (`0.5,0,0.5`) or by name
/// (`a=1/2,c=1/2`; unnamed alternatives get probability zero). Numbers may be
/// decimals or fractions.
pub fn parse_lottery_spec(spec: &str, names: &[String]) -> Result<Lottery, LotteryError> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    if tokens.iter().all(|t| t.is_empty()) {
        return Err(LotteryError::Syntax("empty lottery".into()));
    }
    let named = tokens.iter().any(|t| t.contains('='));
    let probs = if named {
        let mut probs = vec![0.0; names.len()];
        let mut seen = vec![false; names.len()];
        for token in &tokens {
            let (name, value) = token
                .split_once('=')
                .ok_or_else(|| LotteryError::Syntax(format!("expected name=value, found {token:?}")))?;
            let name = name.trim();
            let x = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| LotteryError::Syntax(format!("unknown alternative {name:?}")))?;
            if seen[x] {
                return Err(LotteryError::Syntax(format!("alternative {name:?} given twice")));
            }
            seen[x] = true;
            probs[x] = parse_number(value)?;
        }
        probs
    } else {
        if tokens.len() != names.len() {
            return Err(LotteryError::LengthMismatch {
                expected: names.len(),
                found: tokens.len(),
            });
        }
        tokens.iter().map(|t| parse_number(t)).collect::<Result<Vec<_>, _>>()?
    };
    Lottery::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn validation() {
        assert!(Lottery::new(vec![0.5, 0.5]).is_ok());
        assert_eq!(Lottery::new(vec![]).unwrap_err(), LotteryError::Empty);
        assert!(matches!(Lottery::new(vec![0.5, 0.6]), Err(LotteryError::BadSum(_))));
        assert!(matches!(Lottery::new(vec![1.1, -0.1]), Err(LotteryError::InvalidEntry { index: 1, .. })));
        let p = Lottery::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(p.prob(1), 0.0);
    }

    #[test]
    fn constructors() {
        assert_eq!(Lottery::degenerate(3, 1).probs(), &[0.0, 1.0, 0.0]);
        assert_eq!(Lottery::uniform_over(4, &[0, 2]).support().collect::<Vec<_>>(), vec![0, 2]);
        let w = Lottery::from_weights(vec![2.0, 1e-15, 2.0], 1e-12).unwrap();
        assert_eq!(w.probs(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn parses_positional_and_named() {
        let p = parse_lottery_spec("0.5, 0, 1/2", &abc()).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.0, 0.5]);
        let q = parse_lottery_spec("a=1/2,c=0.5", &abc()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(parse_lottery_spec("0.5,0.5", &abc()), Err(LotteryError::LengthMismatch { .. })));
        assert!(matches!(parse_lottery_spec("d=1", &abc()), Err(LotteryError::Syntax(_))));
        assert!(matches!(parse_lottery_spec("a=1/0", &abc()), Err(LotteryError::Syntax(_))));
        assert!(matches!(parse_lottery_spec("a=0.5,a=0.5", &abc()), Err(LotteryError::Syntax(_))));
        assert!(matches!(parse_lottery_spec("", &abc()), Err(LotteryError::Syntax(_))));
        assert!(matches!(parse_lottery_spec("1,0,0.5", &abc()), Err(LotteryError::BadSum(_))));
    }
}
