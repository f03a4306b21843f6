//! Randomized bound campaigns and evaluator benchmarks.

mod bench;
mod campaign;
mod generator;

pub use bench::{parse_sweep, run_bench, write_bench_csv, BenchRow, Sweep};
pub use campaign::{
    enclosure_pair, run_campaign, run_trial, trial_inputs, write_campaign_csv, Abort, CampaignReport, TrialRecord,
    REPORT_DIGITS,
};
pub use generator::{generate_ball, generate_polynomial, generate_polynomial_with, random_nonzero_scalar, sub_seed, trial_rng};

use crate::integrator::Limits;

/// Parameters of a randomized campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub primes: Vec<u64>,
    pub trials: u64,
    pub degree_max: usize,
    pub valuation_min: i64,
    pub valuation_max: i64,
    /// Probability that a non-leading coefficient is zero.
    pub zero_prob: f64,
    pub radius_min: i64,
    pub radius_max: i64,
    pub seed: u64,
    /// Fraction of trials also checked against the oracle.
    pub oracle_fraction: f64,
    pub precision_bits: u32,
    pub limits: Limits,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            primes: vec![2, 3, 5, 7],
            trials: 1000,
            degree_max: 6,
            valuation_min: -4,
            valuation_max: 2,
            zero_prob: 0.3,
            radius_min: -3,
            radius_max: 3,
            seed: 0,
            oracle_fraction: 0.01,
            precision_bits: 128,
            limits: Limits::default(),
        }
    }
}
