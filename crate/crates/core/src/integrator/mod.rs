//! Exact evaluation of `∫_B χ(f(x)) dx` over balls `B` in `Q_p`.
//!
//! Two independent unit-ball evaluators are provided: a brute-force sum over
//! residues ([`brute_force_unit_ball`]) and a recursive evaluator built from
//! exact reduction rules ([`recursive_integrate`]). Arbitrary balls are
//! mapped to the unit ball by [`normalize_ball`].

mod oracle;
mod recursive;

use std::str::FromStr;

use serde::Serialize;

pub use oracle::{brute_force_unit_ball, brute_force_with_modulus};
pub use recursive::{recursive_integrate, reduce_step, ReductionOutcome, SplitBranch, VanishingRule};

use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};
use crate::padic::{Angle, Ball, PAdicScalar, PhasePolynomial};

/// Size limits for the evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `p^N` the oracle will enumerate.
    pub oracle_max_terms: u64,
    /// Largest recursion depth of the recursive evaluator.
    pub depth_cap: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            oracle_max_terms: 10_000_000,
            depth_cap: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EvalStats {
    pub character_evaluations: u64,
    pub max_depth: u32,
    pub constant: u64,
    pub vanish_linear: u64,
    pub rescale: u64,
    pub split: u64,
}

impl EvalStats {
    pub fn merge(&mut self, other: &EvalStats) {
        self.character_evaluations += other.character_evaluations;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.constant += other.constant;
        self.vanish_linear += other.vanish_linear;
        self.rescale += other.rescale;
        self.split += other.split;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralResult {
    pub value: CyclotomicValue,
    pub stats: EvalStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Recursive,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "recursive" => Ok(Method::Recursive),
            _ => Err(Error::Parse {
                token: s.to_string(),
            }),
        }
    }
}

/// Unit-ball integral with the chosen evaluator.
pub fn integrate_unit_ball(f: &PhasePolynomial, method: Method, limits: &Limits) -> Result<IntegralResult> {
    match method {
        Method::Oracle => brute_force_unit_ball(f, limits),
        Method::Recursive => recursive_integrate(f, limits),
    }
}

/// A ball integral rewritten over the unit ball:
/// `∫_B χ(f) = p^measure_exp · χ(phase) · ∫_{|y|<=1} χ(g(y)) dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedBall {
    /// `g_j = b_j(x0) p^(-j r)` for `j >= 1`, no constant term.
    pub g: PhasePolynomial,
    pub measure_exp: i64,
    /// Angle of `χ(f(x0))`.
    pub phase: Angle,
}

/// Substitutes `x = x0 + p^-r y`.
pub fn normalize_ball(f: &PhasePolynomial, ball: &Ball) -> Result<NormalizedBall> {
    let full = substitute_ball(f, ball);
    Ok(NormalizedBall {
        phase: full.constant_term().character_angle()?,
        g: full.without_constant(),
        measure_exp: ball.measure_exp(),
    })
}

/// `y -> f(x0 + p^-r y)`, constant term included.
fn substitute_ball(f: &PhasePolynomial, ball: &Ball) -> PhasePolynomial {
    let ctx = f.ctx();
    f.taylor_shift(ball.center())
        .scale_argument(&PAdicScalar::prime_power(-ball.radius_exp(), ctx))
}

/// `∫_B χ(f(x)) dx`, including the measure factor and constant phase.
pub fn integrate_ball(
    f: &PhasePolynomial,
    ball: &Ball,
    method: Method,
    limits: &Limits,
) -> Result<IntegralResult> {
    let unit = integrate_unit_ball(&substitute_ball(f, ball), method, limits)?;
    Ok(IntegralResult {
        value: unit.value.rescale(ball.measure_exp()),
        stats: unit.stats,
    })
}
