//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::fs::File;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_vdc::bounds::Status;
use padic_vdc::harness::{
    generate_polynomial_with, parse_sweep, run_bench, run_campaign, write_bench_csv, CampaignConfig,
};
use padic_vdc::integrator::{brute_force_unit_ball, brute_force_with_modulus, recursive_integrate, Limits};
use padic_vdc::padic::{PAdicScalar, PhasePolynomial};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn limits() -> Limits {
    Limits::default()
}

/// Every polynomial of degree 1..=3 with `a_0 = 0` and nonzero coefficients
/// `u p^v`, `u` in `1..p`, `v` in `-2..=0`; lower coefficients may be zero.
fn exhaustive_slice(p: u64) -> Vec<PhasePolynomial> {
    let c = ctx(p);
    let mut choices = Vec::new();
    for v in -2..=0 {
        for u in 1..p {
            choices.push(&PAdicScalar::from_integer(u, c) * &PAdicScalar::prime_power(v, c));
        }
    }
    let with_zero: Vec<_> = std::iter::once(PAdicScalar::zero(c)).chain(choices.iter().cloned()).collect();
    let mut out = Vec::new();
    for degree in 1..=3usize {
        let mut stack = vec![vec![PAdicScalar::zero(c)]];
        for j in 1..=degree {
            let options = if j == degree { &choices } else { &with_zero };
            stack = stack
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |a| {
                        let mut next = prefix.clone();
                        next.push(a.clone());
                        next
                    })
                })
                .collect();
        }
        out.extend(stack.into_iter().map(|coeffs| PhasePolynomial::new(coeffs, c)));
    }
    out
}

fn exhaustive_equivalence() -> Outcome {
    let mut count = 0;
    for p in [2, 3] {
        for f in exhaustive_slice(p) {
            let fast = recursive_integrate(&f, &limits()).map_err(|e| format!("{f}: {e}"))?;
            let slow = brute_force_unit_ball(&f, &limits()).map_err(|e| format!("{f}: {e}"))?;
            if fast.value != slow.value {
                return Err(format!("mismatch at p={p}, f = {f}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances, 0 mismatches"))
}

fn random_equivalence() -> Outcome {
    let config = CampaignConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..5000 {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let f = generate_polynomial_with(&mut rng, &config, ctx(p));
        let fast = recursive_integrate(&f, &limits()).map_err(|e| format!("{f}: {e}"))?;
        let slow = brute_force_unit_ball(&f, &limits()).map_err(|e| format!("{f}: {e}"))?;
        if fast.value != slow.value {
            return Err(format!("trial {i}: mismatch at p={p}, f = {f}"));
        }
    }
    Ok("5000 trials, 0 mismatches".into())
}

fn bound_campaign() -> Outcome {
    let config = CampaignConfig {
        trials: 100_000,
        seed: 42,
        ..CampaignConfig::default()
    };
    let start = Instant::now();
    let report = run_campaign(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(abort) = report.abort {
        return Err(format!(
            "aborted at trial {}: {}; reproduce with: {}",
            abort.trial, abort.reason, abort.reproducer
        ));
    }
    let fails = report.count(Status::Fail);
    ensure(
        report.records.len() == 100_000 && fails == 0 && elapsed < Duration::from_secs(15 * 60),
        format!(
            "{} trials, {} PASS, {} INCONCLUSIVE, {fails} FAIL, {} oracle checks, {:.1}s",
            report.records.len(),
            report.count(Status::Pass),
            report.count(Status::Inconclusive),
            report.oracle_checks(),
            elapsed.as_secs_f64()
        ),
    )
}

fn exact_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let p = PRIMES[i % PRIMES.len()];
        let f = dominant_linear_instance(&mut rng, ctx(p));
        let value = recursive_integrate(&f, &limits()).map_err(|e| e.to_string())?.value;
        if !value.is_zero() {
            return Err(format!("nonzero value for f = {f}"));
        }
    }
    let mut linear = 0;
    for p in PRIMES {
        let c = ctx(p);
        for v in -4..=-1 {
            for u in (1..10 * p).filter(|u| u % p != 0) {
                for w in (1..=9).filter(|w| w % p != 0) {
                    let a1 = &PAdicScalar::new(BigRational::new(u.into(), w.into()), c) * &PAdicScalar::prime_power(v, c);
                    let f = PhasePolynomial::new(vec![PAdicScalar::prime_power(-1, c), a1], c);
                    if !recursive_integrate(&f, &limits()).map_err(|e| e.to_string())?.value.is_zero() {
                        return Err(format!("nonzero value for f = {f}"));
                    }
                    linear += 1;
                }
            }
        }
    }
    Ok(format!("1000 dominant-linear instances and {linear} linear instances are exactly zero"))
}

fn rescaling_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let p = PRIMES[i % PRIMES.len()];
        let c = ctx(p);
        let r = rng.gen_range(3..=4);
        let f = dominant_index_instance(&mut rng, r, c);
        let g = f.scale_argument(&PAdicScalar::prime_power(1, c));
        let lhs = brute_force_unit_ball(&f, &limits()).map_err(|e| e.to_string())?.value;
        let rhs = brute_force_unit_ball(&g, &limits()).map_err(|e| e.to_string())?.value.rescale(-1);
        if lhs != rhs {
            return Err(format!("identity fails for f = {f}"));
        }
    }
    Ok("1000 instances, oracle(f) = oracle(f(px)) / p exactly".into())
}

fn gauss_sums() -> Outcome {
    let mut worst = 0f64;
    for p in [3u64, 5, 7, 13] {
        let f = poly(p, &format!("0,0,1/{p}"));
        let value = brute_force_unit_ball(&f, &limits()).map_err(|e| e.to_string())?.value;
        let mid = value.magnitude(128).midpoint().to_f64().unwrap();
        let err = (mid - (p as f64).powf(-0.5)).abs();
        worst = worst.max(err);
        if err > 1e-12 {
            return Err(format!("p={p}: |I| ~ {mid}, error {err:e}"));
        }
    }
    Ok(format!("p in {{3,5,7,13}}, max deviation {worst:.1e}"))
}

fn dominance_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..10_000 {
        let c = ctx(PRIMES[i % PRIMES.len()]);
        let (f, m) = upper_dominance_instance(&mut rng, c);
        let y = integral_point(&mut rng, c);
        let b = f.taylor_shift(&y);
        let top = f.weighted_valuation(m);
        let kept = b.weighted_valuation(m) == top;
        let dominant = (m + 1..=f.degree().unwrap()).all(|j| b.weighted_valuation(j) > top);
        if !(kept && dominant) {
            return Err(format!("broken for f = {f}, y = {y}, m = {m}"));
        }
    }
    Ok("10000 (f, y) pairs".into())
}

fn stability_and_translation() -> Outcome {
    let config = CampaignConfig {
        degree_max: 5,
        valuation_min: -3,
        ..CampaignConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..2000 {
        let c = ctx(PRIMES[i % PRIMES.len()]);
        let f = generate_polynomial_with(&mut rng, &config, c);
        let n = f.coset_modulus_exp();
        let base = brute_force_with_modulus(&f, n, &limits()).map_err(|e| e.to_string())?;
        let finer = brute_force_with_modulus(&f, n + 1, &limits()).map_err(|e| e.to_string())?;
        if base.value != finer.value {
            return Err(format!("N-stability fails for f = {f}"));
        }
    }
    let config = CampaignConfig::default();
    for i in 0..2000 {
        let c = ctx(PRIMES[i % PRIMES.len()]);
        let f = generate_polynomial_with(&mut rng, &config, c);
        let shift = integral_point(&mut rng, c);
        let a = brute_force_unit_ball(&f, &limits()).map_err(|e| e.to_string())?.value;
        let b = brute_force_unit_ball(&f.taylor_shift(&shift), &limits())
            .map_err(|e| e.to_string())?
            .value;
        if a != b {
            return Err(format!("translation fails for f = {f}, c = {shift}"));
        }
    }
    Ok("2000 N-stability and 2000 translation instances".into())
}

fn performance() -> Outcome {
    let f = poly(5, "0,0,1/15625");
    let start = Instant::now();
    let fast = recursive_integrate(&f, &limits()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let slow = brute_force_unit_ball(&f, &limits()).map_err(|e| e.to_string())?;

    let rows = run_bench(&[5], &parse_sweep("2:1..8").unwrap(), &limits()).map_err(|e| e.to_string())?;
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("bench_p5_x2.csv");
    write_bench_csv(&rows, None, File::create(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ratio = rows
        .iter()
        .find(|r| r.exponent == 6)
        .and_then(|r| r.ratio)
        .unwrap_or(0.0);
    let evals = fast.stats.character_evaluations;
    ensure(
        elapsed < Duration::from_secs(1)
            && evals <= 200
            && fast.value == slow.value
            && slow.stats.character_evaluations == 15_625
            && ratio >= 50.0,
        format!(
            "{evals} character evaluations in {:.2} ms, oracle match {}, ratio {ratio:.0}x (csv: {})",
            elapsed.as_secs_f64() * 1e3,
            fast.value == slow.value,
            path.display()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence, exhaustive slice", exhaustive_equivalence),
        ("oracle equivalence, randomized", random_equivalence),
        ("bound verification campaign", bound_campaign),
        ("exact vanishing", exact_vanishing),
        ("rescaling identity", rescaling_identity),
        ("quadratic Gauss sums", gauss_sums),
        ("dominance preservation", dominance_preservation),
        ("N-stability and translation invariance", stability_and_translation),
        ("recursive evaluator performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
