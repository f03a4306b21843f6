//! The three van der Corput type bounds and certified verdicts against them.
//!
//! Bounds are kept symbolic as `factor * p^q` with rational `q` and are only
//! evaluated, with exact directed rounding, at comparison time.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cyclotomic::{prime_power_floor, CyclotomicValue, Enclosure};
use crate::error::{Error, Result};
use crate::integrator::{brute_force_unit_ball, integrate_ball, recursive_integrate, IntegralResult, Limits, Method};
use crate::padic::{Ball, PhasePolynomial, PrimeContext};

/// `factor * p^exponent`, or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicBound {
    Finite {
        factor: u32,
        p: u64,
        exponent: BigRational,
    },
    Infinite,
}

impl SymbolicBound {
    fn finite(factor: u32, ctx: PrimeContext, exponent: BigRational) -> Self {
        SymbolicBound::Finite {
            factor,
            p: ctx.p(),
            exponent,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SymbolicBound::Finite { .. })
    }

    /// Exact directed-rounding enclosure at `bits` fractional bits; `None` for `+inf`.
    pub fn enclosure(&self, bits: u32) -> Option<Enclosure> {
        let SymbolicBound::Finite { factor, p, exponent } = self else {
            return None;
        };
        let (floor, exact) = prime_power_floor(*p, exponent, bits);
        let lo = &floor * *factor;
        let hi = if exact { lo.clone() } else { (floor + 1u32) * *factor };
        Some(Enclosure::new(lo, hi, bits))
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            SymbolicBound::Finite { factor, p, exponent } => {
                *factor as f64 * (*p as f64).powf(exponent.to_f64().unwrap_or(f64::NAN))
            }
            SymbolicBound::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for SymbolicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicBound::Finite { factor, p, exponent } => {
                if *factor != 1 {
                    write!(f, "{factor}*")?;
                }
                if exponent.is_integer() {
                    write!(f, "{p}^{exponent}")
                } else {
                    write!(f, "{p}^({exponent})")
                }
            }
            SymbolicBound::Infinite => f.write_str("inf"),
        }
    }
}

fn ratio(n: i64, d: usize) -> BigRational {
    BigRational::new(n.into(), (d as i64).into())
}

/// `p^m / |m a_m|^(1/m) = p^(m - r/m)` on the unit ball.
pub fn bound_main(f: &PhasePolynomial) -> SymbolicBound {
    let profile = f.dominance_profile();
    match (profile.m, profile.r) {
        (Some(m), Some(r)) => {
            SymbolicBound::finite(1, f.ctx(), BigRational::from_integer(m.into()) - ratio(r, m))
        }
        _ => SymbolicBound::Infinite,
    }
}

/// `2 p^n / λ^(1/n)` with `λ = max_{j>=1} |a_j|` and `n` the true degree.
pub fn bound_uniform(f: &PhasePolynomial) -> SymbolicBound {
    match (f.degree(), f.dominance_profile().lambda_exp) {
        (Some(n), Some(lambda)) if n >= 1 => {
            SymbolicBound::finite(2, f.ctx(), BigRational::from_integer(n.into()) - ratio(lambda, n))
        }
        _ => SymbolicBound::Infinite,
    }
}

/// `2 p^n / |a_n|^(1/n)`, uniform over all balls.
pub fn bound_ball(f: &PhasePolynomial) -> Result<SymbolicBound> {
    let n = f.degree().filter(|&n| n >= 1).ok_or(Error::NoLeadingCoefficient)?;
    let e = f.coeffs()[n].norm_exp().expect("leading coefficient is nonzero");
    Ok(SymbolicBound::finite(2, f.ctx(), BigRational::from_integer(n.into()) - ratio(e, n)))
}

/// All bound data for one phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub m: Option<usize>,
    pub r: Option<i64>,
    pub lambda_exp: Option<i64>,
    pub main: SymbolicBound,
    pub uniform: SymbolicBound,
    pub ball: SymbolicBound,
}

pub fn bound_report(f: &PhasePolynomial) -> BoundReport {
    let profile = f.dominance_profile();
    BoundReport {
        m: profile.m,
        r: profile.r,
        lambda_exp: profile.lambda_exp,
        main: bound_main(f),
        uniform: bound_uniform(f),
        ball: bound_ball(f).unwrap_or(SymbolicBound::Infinite),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    Main,
    Uniform,
    Ball,
}

/// Outcome of comparing `|I|` against a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub magnitude: Enclosure,
    pub bound: SymbolicBound,
    /// `None` for an infinite bound.
    pub bound_enclosure: Option<Enclosure>,
    pub status: Status,
    pub precision_bits: u32,
}

impl Verdict {
    /// The comparison slack `2^(-precision_bits/2)`.
    pub fn margin(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << (self.precision_bits / 2))
    }
}

/// Compares a certified `|I|` with a bound at one precision.
///
/// PASS when `upper(|I|) <= lower(bound) + 2^(-bits/2)`; FAIL only when
/// `lower(|I|) > upper(bound)`, a certified violation.
pub fn compare(magnitude: &Enclosure, bound: &SymbolicBound, bits: u32) -> (Status, Option<Enclosure>) {
    let Some(b) = bound.enclosure(bits) else {
        return (Status::Pass, None);
    };
    let magnitude = magnitude.coarsen(bits);
    let margin = BigInt::one() << (bits - bits / 2);
    let status = if magnitude.hi_scaled() <= &(b.lo_scaled() + margin) {
        Status::Pass
    } else if magnitude.lo_scaled() > b.hi_scaled() {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    (status, Some(b))
}

/// Verdict for a known integral value, escalating precision once (x2) when
/// the first comparison is inconclusive.
pub fn verdict_for(value: &CyclotomicValue, bound: &SymbolicBound, precision_bits: u32) -> Verdict {
    let mut bits = precision_bits;
    loop {
        let magnitude = value.magnitude(bits);
        let (status, bound_enclosure) = compare(&magnitude, bound, bits);
        if status != Status::Inconclusive || bits != precision_bits {
            return Verdict {
                magnitude,
                bound: bound.clone(),
                bound_enclosure,
                status,
                precision_bits: bits,
            };
        }
        bits *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub precision_bits: u32,
    /// Recompute the integral with the oracle and require exact agreement.
    pub oracle_check: bool,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            precision_bits: 128,
            oracle_check: false,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub integral: IntegralResult,
    pub verdict: Verdict,
    /// `|I| <= measure(ball)`, certified.
    pub within_measure: bool,
    pub oracle_checked: bool,
}

/// `|I|` is never more than the measure `p^measure_exp` of the domain.
pub fn within_measure(magnitude: &Enclosure, measure_exp: i64, ctx: PrimeContext) -> bool {
    let measure = SymbolicBound::finite(1, ctx, BigRational::from_integer(measure_exp.into()));
    compare(magnitude, &measure, magnitude.frac_bits()).0 != Status::Fail
}

/// Evaluates `I` over `ball` with the recursive evaluator and checks it against one bound.
pub fn verify(f: &PhasePolynomial, ball: &Ball, which: Which, options: &VerifyOptions) -> Result<VerifyOutcome> {
    if which == Which::Main && !ball.is_unit_ball() {
        return Err(Error::MainBoundNeedsUnitBall);
    }
    let integral = if ball.is_unit_ball() {
        recursive_integrate(f, &options.limits)?
    } else {
        integrate_ball(f, ball, Method::Recursive, &options.limits)?
    };
    let oracle_checked = options.oracle_check;
    if oracle_checked {
        let oracle = if ball.is_unit_ball() {
            brute_force_unit_ball(f, &options.limits)?
        } else {
            integrate_ball(f, ball, Method::Oracle, &options.limits)?
        };
        if oracle.value != integral.value {
            return Err(Error::OracleMismatch);
        }
    }
    let bound = match which {
        Which::Main => bound_main(f),
        Which::Uniform => bound_uniform(f),
        Which::Ball => bound_ball(f)?,
    };
    let verdict = verdict_for(&integral.value, &bound, options.precision_bits);
    let within = within_measure(&verdict.magnitude, ball.measure_exp(), f.ctx());
    Ok(VerifyOutcome {
        integral,
        verdict,
        within_measure: within,
        oracle_checked,
    })
}
