use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{brute_force_unit_ball, recursive_integrate, Limits};
use crate::padic::{PAdicScalar, PhasePolynomial, PrimeContext};

/// Monomials `x^degree / p^e` for `e` in `exp_lo..=exp_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub degree: usize,
    pub exp_lo: u32,
    pub exp_hi: u32,
}

/// Parses `<degree>:<lo>..<hi>`, e.g. `2:1..8`.
pub fn parse_sweep(s: &str) -> Result<Sweep> {
    let bad = || Error::Parse { token: s.to_string() };
    let (degree, range) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let sweep = Sweep {
        degree: degree.trim().parse().map_err(|_| bad())?,
        exp_lo: lo.trim().parse().map_err(|_| bad())?,
        exp_hi: hi.trim().parse().map_err(|_| bad())?,
    };
    if sweep.degree == 0 || sweep.exp_lo > sweep.exp_hi {
        return Err(bad());
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub prime: u64,
    pub degree: usize,
    pub exponent: u32,
    /// `p^N`, the number of terms the oracle sums.
    pub oracle_evals: String,
    pub recursive_evals: u64,
    /// `oracle_evals / recursive_evals`, when finite.
    pub ratio: Option<f64>,
    /// Absent when the oracle exceeds its cap.
    pub oracle_ns: Option<u128>,
    pub recursive_ns: u128,
    pub values_match: Option<bool>,
}

fn monomial(degree: usize, exponent: u32, ctx: PrimeContext) -> PhasePolynomial {
    let mut coeffs = vec![PAdicScalar::zero(ctx); degree + 1];
    coeffs[degree] = PAdicScalar::prime_power(-(exponent as i64), ctx);
    PhasePolynomial::new(coeffs, ctx)
}

/// Times both evaluators on every monomial of the sweep for every prime.
pub fn run_bench(primes: &[u64], sweep: &Sweep, limits: &Limits) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &p in primes {
        let ctx = PrimeContext::new(p)?;
        for e in sweep.exp_lo..=sweep.exp_hi {
            let f = monomial(sweep.degree, e, ctx);
            let oracle_evals: BigInt = ctx.pow_big(f.coset_modulus_exp());

            let start = Instant::now();
            let fast = recursive_integrate(&f, limits)?;
            let recursive_ns = start.elapsed().as_nanos();

            let start = Instant::now();
            let (oracle_ns, values_match) = match brute_force_unit_ball(&f, limits) {
                Ok(slow) => (Some(start.elapsed().as_nanos()), Some(slow.value == fast.value)),
                Err(Error::OracleTooLarge { .. }) => (None, None),
                Err(err) => return Err(err),
            };

            let recursive_evals = fast.stats.character_evaluations;
            let ratio = (recursive_evals > 0).then(|| {
                let r = BigRational::new(oracle_evals.clone(), BigInt::from(recursive_evals));
                num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::INFINITY)
            });
            rows.push(BenchRow {
                prime: p,
                degree: sweep.degree,
                exponent: e,
                oracle_evals: oracle_evals.to_string(),
                recursive_evals,
                ratio,
                oracle_ns,
                recursive_ns,
                values_match,
            });
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], comment: Option<&str>, mut out: W) -> std::io::Result<()> {
    if let Some(c) = comment {
        writeln!(out, "# {c}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    for r in rows {
        writer.serialize(r)?;
    }
    writer.flush()
}
