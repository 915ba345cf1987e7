//! Exact metric distortion of lotteries over alternatives, the randomized
//! social choice rules commonly studied under it, and the tooling to run
//! average-case experiments on synthetic and real election data.

#![allow(clippy::needless_range_loop)]

pub mod distortion;
pub mod harness;
pub mod ingest;
pub mod lottery;
pub mod lp;
pub mod profiles;
pub mod rules;
pub mod samplers;

pub use distortion::{metric_distortion, DistortionError, DistortionValue};
pub use lottery::{parse_lottery_spec, Lottery, LotteryError};
pub use profiles::{build_profile, Alternative, PreferenceProfile, ProfileError};
pub use rules::{Rule, RuleError};
