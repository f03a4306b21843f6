use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use padic_vdc::bounds::{bound_report, Status, SymbolicBound};
use padic_vdc::cyclotomic::ValueRecord;
use padic_vdc::harness::{
    enclosure_pair, parse_sweep, run_bench, run_campaign, write_bench_csv, write_campaign_csv, CampaignConfig,
};
use padic_vdc::integrator::{integrate_ball, EvalStats, Limits, Method};
use padic_vdc::padic::{parse_rational, Ball, PAdicScalar, PhasePolynomial, PrimeContext};
use padic_vdc::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "padic-vdc", version, about = "Exact p-adic oscillatory integrals and their bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the integral of χ(f) over a ball.
    Eval(EvalArgs),
    /// Print the dominance data and the three bounds for f.
    Bound(BoundArgs),
    /// Run a randomized bound-verification campaign.
    Verify(VerifyArgs),
    /// Compare oracle and recursive evaluation on monomials x^d / p^e.
    Bench(BenchArgs),
}

#[derive(Args)]
struct PolyArgs {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// Coefficients a0,a1,... as rationals.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

impl PolyArgs {
    fn polynomial(&self) -> Result<PhasePolynomial, Error> {
        PhasePolynomial::parse(&self.coeffs, PrimeContext::new(self.p)?)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// Ball center (defaults to 0).
    #[arg(long, allow_hyphen_values = true, requires = "radius_exp")]
    center: Option<String>,
    /// Ball radius exponent r: the ball |x - center| <= p^r.
    #[arg(long, allow_hyphen_values = true)]
    radius_exp: Option<i64>,
    #[arg(long, default_value = "recursive", value_parser = ["oracle", "recursive"])]
    method: String,
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
    #[arg(long, default_value_t = Limits::default().oracle_max_terms)]
    oracle_max_terms: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    poly: PolyArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 6)]
    degree_max: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
    val_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
    val_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -3)]
    radius_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 3)]
    radius_max: i64,
    #[arg(long, default_value = "3/10")]
    zero_prob: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of trials also checked against the oracle, as a rational.
    #[arg(long, default_value = "1/100")]
    oracle_fraction: String,
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
    /// CSV report path (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    /// Omit the timestamp comment line.
    #[arg(long)]
    reproducible: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "5")]
    primes: Vec<u64>,
    /// `<degree>:<lo>..<hi>`: monomials x^degree / p^e for e in lo..=hi.
    #[arg(long, default_value = "2:1..8")]
    sweep: String,
    #[arg(long, default_value_t = Limits::default().oracle_max_terms)]
    oracle_max_terms: u64,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    reproducible: bool,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Usage(String),
    Verification,
    Cap,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                _ if e.is_resource_cap() => EXIT_CAP,
                Error::OracleMismatch | Error::TerminationViolated { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Cap) => ExitCode::from(EXIT_CAP),
    }
}

fn output(path: Option<&str>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn timestamp_comment(reproducible: bool) -> Option<String> {
    if reproducible {
        return None;
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Some(format!("generated at unix time {secs}"))
}

fn probability(s: &str, flag: &str) -> Result<f64, Failure> {
    let q = parse_rational(s)?;
    let v = q.to_f64().unwrap_or(f64::NAN);
    if q < num_rational::BigRational::zero() || !(0.0..=1.0).contains(&v) {
        return Err(Failure::Usage(format!("--{flag} must lie in [0, 1], got `{s}`")));
    }
    Ok(v)
}

#[derive(Serialize)]
struct MagnitudeJson {
    lower: String,
    upper: String,
    precision_bits: u32,
}

#[derive(Serialize)]
struct EvalJson {
    p: u64,
    coefficients: String,
    center: String,
    radius_exp: i64,
    method: String,
    value: ValueRecord,
    exact_zero: bool,
    magnitude: MagnitudeJson,
    stats: EvalStats,
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let f = a.poly.polynomial()?;
    let ctx = f.ctx();
    let center = match &a.center {
        Some(c) => PAdicScalar::parse(c, ctx)?,
        None => PAdicScalar::zero(ctx),
    };
    let ball = Ball::new(center, a.radius_exp.unwrap_or(0));
    let method: Method = a.method.parse()?;
    let limits = Limits {
        oracle_max_terms: a.oracle_max_terms,
        ..Limits::default()
    };
    let result = integrate_ball(&f, &ball, method, &limits)?;
    let magnitude = result.value.magnitude(a.precision_bits);
    let (lower, upper) = enclosure_pair(&magnitude);
    let report = EvalJson {
        p: ctx.p(),
        coefficients: f.to_coeff_string(),
        center: ball.center().to_string(),
        radius_exp: ball.radius_exp(),
        method: a.method,
        value: result.value.record(),
        exact_zero: result.value.is_zero(),
        magnitude: MagnitudeJson {
            lower,
            upper,
            precision_bits: a.precision_bits,
        },
        stats: result.stats,
    };
    let mut out = output(None)?;
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "f          = {f}")?;
        writeln!(out, "ball       = {ball}")?;
        writeln!(out, "I          = {}", result.value)?;
        writeln!(out, "exact_zero = {}", report.exact_zero)?;
        writeln!(out, "|I|        in [{}, {}]", report.magnitude.lower, report.magnitude.upper)?;
        writeln!(
            out,
            "stats      = {} character evaluations, depth {}",
            result.stats.character_evaluations, result.stats.max_depth
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BoundJson {
    p: u64,
    coefficients: String,
    m: Option<usize>,
    r: Option<i64>,
    lambda_exp: Option<i64>,
    bound_main: BoundEntry,
    bound_uniform: BoundEntry,
    bound_ball: BoundEntry,
}

#[derive(Serialize)]
struct BoundEntry {
    symbolic: String,
    approx: Option<f64>,
}

impl From<&SymbolicBound> for BoundEntry {
    fn from(b: &SymbolicBound) -> Self {
        BoundEntry {
            symbolic: b.to_string(),
            approx: b.is_finite().then(|| b.approx_f64()),
        }
    }
}

fn cmd_bound(a: BoundArgs) -> Result<(), Failure> {
    let f = a.poly.polynomial()?;
    let b = bound_report(&f);
    let report = BoundJson {
        p: f.ctx().p(),
        coefficients: f.to_coeff_string(),
        m: b.m,
        r: b.r,
        lambda_exp: b.lambda_exp,
        bound_main: (&b.main).into(),
        bound_uniform: (&b.uniform).into(),
        bound_ball: (&b.ball).into(),
    };
    let mut out = output(None)?;
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        let show = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        writeln!(out, "f             = {f}")?;
        writeln!(out, "m             = {}", show(b.m.map(|m| m.to_string())))?;
        writeln!(out, "r             = {}", show(b.r.map(|r| r.to_string())))?;
        writeln!(out, "log_p lambda  = {}", show(b.lambda_exp.map(|l| l.to_string())))?;
        for (name, bound) in [("bound_main", &b.main), ("bound_uniform", &b.uniform), ("bound_ball", &b.ball)] {
            writeln!(out, "{name:<13} = {bound} ~ {:.6e}", bound.approx_f64())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.primes.is_empty() {
        return Err(Failure::Usage("--primes must not be empty".into()));
    }
    if a.degree_max == 0 || a.val_min > a.val_max || a.radius_min > a.radius_max {
        return Err(Failure::Usage("empty degree, valuation or radius range".into()));
    }
    let config = CampaignConfig {
        primes: a.primes,
        trials: a.trials,
        degree_max: a.degree_max,
        valuation_min: a.val_min,
        valuation_max: a.val_max,
        zero_prob: probability(&a.zero_prob, "zero-prob")?,
        radius_min: a.radius_min,
        radius_max: a.radius_max,
        seed: a.seed,
        oracle_fraction: probability(&a.oracle_fraction, "oracle-fraction")?,
        precision_bits: a.precision_bits,
        limits: Limits::default(),
    };
    let report = run_campaign(&config)?;
    let mut out = output(a.out.as_deref())?;
    write_campaign_csv(&report.records, timestamp_comment(a.reproducible).as_deref(), &mut out)?;
    out.flush()?;
    drop(out);

    eprintln!(
        "trials {} | PASS {} | INCONCLUSIVE {} | FAIL {} | oracle checks {}",
        report.records.len(),
        report.count(Status::Pass),
        report.count(Status::Inconclusive),
        report.count(Status::Fail),
        report.oracle_checks(),
    );
    match report.abort {
        None => Ok(()),
        Some(abort) => {
            eprintln!("aborted at trial {}: {}", abort.trial, abort.reason);
            eprintln!("reproduce with: {}", abort.reproducer);
            Err(if abort.resource_cap {
                Failure::Cap
            } else {
                Failure::Verification
            })
        }
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let sweep = parse_sweep(&a.sweep)?;
    let limits = Limits {
        oracle_max_terms: a.oracle_max_terms,
        ..Limits::default()
    };
    let rows = run_bench(&a.primes, &sweep, &limits)?;
    let mut out = output(a.out.as_deref())?;
    write_bench_csv(&rows, timestamp_comment(a.reproducible).as_deref(), &mut out)?;
    out.flush()?;
    if rows.iter().any(|r| r.values_match == Some(false)) {
        eprintln!("error: oracle and recursive evaluator disagree");
        return Err(Failure::Verification);
    }
    Ok(())
}
