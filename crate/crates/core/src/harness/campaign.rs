use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generator::{generate_ball, generate_polynomial, sub_seed, trial_rng};
use super::CampaignConfig;
use crate::bounds::{bound_report, verdict_for, within_measure, Status, Verdict};
use crate::cyclotomic::Enclosure;
use crate::error::{Error, Result};
use crate::integrator::{brute_force_unit_ball, integrate_ball, recursive_integrate, IntegralResult, Method};
use crate::padic::{Ball, PhasePolynomial, PrimeContext};

/// Significant digits for magnitudes in reports.
pub const REPORT_DIGITS: usize = 30;

/// Trials evaluated between abort checks.
const CHUNK: u64 = 256;

/// One randomized trial, as written to the campaign CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub prime: u64,
    pub coefficients: String,
    pub center: String,
    pub radius_exp: i64,
    pub m: String,
    pub r: String,
    pub lambda_exp: String,
    pub unit_abs_lo: String,
    pub unit_abs_hi: String,
    pub ball_abs_lo: String,
    pub ball_abs_hi: String,
    pub bound_main: String,
    pub bound_uniform: String,
    pub bound_ball: String,
    pub verdict_main: Status,
    pub verdict_uniform: Status,
    pub verdict_ball: Status,
    pub within_measure: bool,
    pub unit_char_evals: u64,
    pub ball_char_evals: u64,
    pub max_depth: u32,
    pub rescales: u64,
    pub splits: u64,
    pub vanishings: u64,
    pub oracle_checked: bool,
}

impl TrialRecord {
    pub fn has_failure(&self) -> bool {
        [self.verdict_main, self.verdict_uniform, self.verdict_ball].contains(&Status::Fail)
            || !self.within_measure
    }
}

/// Why a campaign stopped early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abort {
    pub trial: u64,
    pub reason: String,
    /// CLI invocation reproducing the offending integral.
    pub reproducer: String,
    /// The abort came from a size limit rather than a failed check.
    pub resource_cap: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CampaignReport {
    pub records: Vec<TrialRecord>,
    pub abort: Option<Abort>,
}

impl CampaignReport {
    pub fn count(&self, status: Status) -> usize {
        self.records
            .iter()
            .map(|r| {
                [r.verdict_main, r.verdict_uniform, r.verdict_ball]
                    .iter()
                    .filter(|s| **s == status)
                    .count()
            })
            .sum()
    }

    pub fn oracle_checks(&self) -> usize {
        self.records.iter().filter(|r| r.oracle_checked).count()
    }
}

fn opt<T: ToString>(v: Option<T>, none: &str) -> String {
    v.map_or_else(|| none.to_string(), |v| v.to_string())
}

fn reproducer(f: &PhasePolynomial, ball: Option<&Ball>) -> String {
    let mut line = format!("padic-vdc eval --p {} --coeffs {}", f.ctx().p(), f.to_coeff_string());
    if let Some(b) = ball {
        line += &format!(" --center {} --radius-exp {}", b.center(), b.radius_exp());
    }
    line
}

/// The trial's inputs, regenerated from its index alone.
pub fn trial_inputs(index: u64, config: &CampaignConfig) -> (PhasePolynomial, Ball, bool) {
    let mut rng = trial_rng(sub_seed(config.seed, index));
    let p = config.primes[rng.gen_range(0..config.primes.len())];
    let ctx = PrimeContext::new(p).expect("campaign primes are validated");
    let f = generate_polynomial(rng.gen(), config, ctx);
    let ball = generate_ball(&mut rng, config, ctx);
    let oracle = rng.gen::<f64>() < config.oracle_fraction;
    (f, ball, oracle)
}

/// Runs the oracle when it fits the cap; `Ok(false)` when it does not.
fn spot_check(f: &PhasePolynomial, ball: Option<&Ball>, fast: &IntegralResult, config: &CampaignConfig) -> Result<bool> {
    let slow = match ball {
        None => brute_force_unit_ball(f, &config.limits),
        Some(b) => integrate_ball(f, b, Method::Oracle, &config.limits),
    };
    match slow {
        Ok(slow) if slow.value == fast.value => Ok(true),
        Ok(_) => Err(Error::OracleMismatch),
        Err(Error::OracleTooLarge { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Evaluates one trial: the unit-ball integral against the dominant-index and
/// uniform bounds, and a random ball against the ball bound.
pub fn run_trial(index: u64, config: &CampaignConfig) -> std::result::Result<TrialRecord, Abort> {
    let (f, ball, oracle) = trial_inputs(index, config);
    let abort = |e: Error, b: Option<&Ball>| Abort {
        trial: index,
        reason: e.to_string(),
        reproducer: reproducer(&f, b),
        resource_cap: e.is_resource_cap(),
    };
    let ctx = f.ctx();
    let bounds = bound_report(&f);

    let unit = recursive_integrate(&f, &config.limits).map_err(|e| abort(e, None))?;
    let on_ball = integrate_ball(&f, &ball, Method::Recursive, &config.limits).map_err(|e| abort(e, Some(&ball)))?;

    let mut oracle_checked = false;
    if oracle {
        oracle_checked = spot_check(&f, None, &unit, config).map_err(|e| abort(e, None))?;
        spot_check(&f, Some(&ball), &on_ball, config).map_err(|e| abort(e, Some(&ball)))?;
    }

    let bits = config.precision_bits;
    let main = verdict_for(&unit.value, &bounds.main, bits);
    let uniform = verdict_for(&unit.value, &bounds.uniform, bits);
    let on_ball_verdict = verdict_for(&on_ball.value, &bounds.ball, bits);
    let within = within_measure(&main.magnitude, 0, ctx)
        && within_measure(&on_ball_verdict.magnitude, ball.measure_exp(), ctx);

    let mut stats = unit.stats;
    stats.merge(&on_ball.stats);
    let lo = |v: &Verdict| v.magnitude.lower_decimal(REPORT_DIGITS);
    let hi = |v: &Verdict| v.magnitude.upper_decimal(REPORT_DIGITS);

    Ok(TrialRecord {
        trial: index,
        prime: ctx.p(),
        coefficients: f.to_coeff_string(),
        center: ball.center().to_string(),
        radius_exp: ball.radius_exp(),
        m: opt(bounds.m, ""),
        r: opt(bounds.r, "-inf"),
        lambda_exp: opt(bounds.lambda_exp, "-inf"),
        unit_abs_lo: lo(&main),
        unit_abs_hi: hi(&main),
        ball_abs_lo: lo(&on_ball_verdict),
        ball_abs_hi: hi(&on_ball_verdict),
        bound_main: bounds.main.to_string(),
        bound_uniform: bounds.uniform.to_string(),
        bound_ball: bounds.ball.to_string(),
        verdict_main: main.status,
        verdict_uniform: uniform.status,
        verdict_ball: on_ball_verdict.status,
        within_measure: within,
        unit_char_evals: unit.stats.character_evaluations,
        ball_char_evals: on_ball.stats.character_evaluations,
        max_depth: stats.max_depth,
        rescales: stats.rescale,
        splits: stats.split,
        vanishings: stats.vanish_linear,
        oracle_checked,
    })
}

fn failure_abort(record: &TrialRecord, config: &CampaignConfig) -> Abort {
    let (f, ball, _) = trial_inputs(record.trial, config);
    let mut reasons = Vec::new();
    if record.verdict_main == Status::Fail {
        reasons.push(format!("main bound {} violated on the unit ball", record.bound_main));
    }
    if record.verdict_uniform == Status::Fail {
        reasons.push(format!("uniform bound {} violated on the unit ball", record.bound_uniform));
    }
    if record.verdict_ball == Status::Fail {
        reasons.push(format!("ball bound {} violated", record.bound_ball));
    }
    if !record.within_measure {
        reasons.push("|I| exceeds the measure of the ball".to_string());
    }
    let ball_failed = record.verdict_ball == Status::Fail;
    Abort {
        trial: record.trial,
        reason: reasons.join("; "),
        reproducer: reproducer(&f, ball_failed.then_some(&ball)),
        resource_cap: false,
    }
}

/// Runs `config.trials` trials in a worker pool, keeping rows in trial order,
/// and stops after the first failing trial.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    for &p in &config.primes {
        PrimeContext::new(p)?;
    }
    let mut report = CampaignReport::default();
    let mut start = 0;
    while start < config.trials {
        let end = (start + CHUNK).min(config.trials);
        let chunk: Vec<_> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(i, config))
            .collect();
        for outcome in chunk {
            match outcome {
                Ok(record) => {
                    let failed = record.has_failure();
                    if failed {
                        report.abort = Some(failure_abort(&record, config));
                    }
                    report.records.push(record);
                    if failed {
                        return Ok(report);
                    }
                }
                Err(abort) => {
                    report.abort = Some(abort);
                    return Ok(report);
                }
            }
        }
        start = end;
    }
    Ok(report)
}

/// Writes campaign rows as CSV, optionally preceded by a `#` comment line.
pub fn write_campaign_csv<W: Write>(records: &[TrialRecord], comment: Option<&str>, mut out: W) -> std::io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()
}

/// Renders an enclosure as a `[lo, hi]` pair of report decimals.
pub fn enclosure_pair(e: &Enclosure) -> (String, String) {
    (e.lower_decimal(REPORT_DIGITS), e.upper_decimal(REPORT_DIGITS))
}
