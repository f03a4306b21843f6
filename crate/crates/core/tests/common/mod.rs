//! Instance generators shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use padic_vdc::harness::random_nonzero_scalar;
use padic_vdc::padic::{PAdicScalar, PhasePolynomial, PrimeContext};

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

pub fn poly(p: u64, s: &str) -> PhasePolynomial {
    PhasePolynomial::parse(s, ctx(p)).unwrap()
}

/// `v_p(j)` for a small positive index.
pub fn index_valuation(j: usize, ctx: PrimeContext) -> i64 {
    ctx.int_valuation(j as u64) as i64
}

/// A random p-adic unit times `p^v`, `v` drawn from `lo..=hi`.
pub fn scalar<R: Rng>(rng: &mut R, lo: i64, hi: i64, ctx: PrimeContext) -> PAdicScalar {
    random_nonzero_scalar(rng, lo, hi, ctx)
}

/// Zero with probability `zero_prob`, else [`scalar`].
pub fn maybe_scalar<R: Rng>(rng: &mut R, zero_prob: f64, lo: i64, hi: i64, ctx: PrimeContext) -> PAdicScalar {
    if rng.gen_bool(zero_prob) {
        PAdicScalar::zero(ctx)
    } else {
        scalar(rng, lo, hi, ctx)
    }
}

/// A point with `|y| <= 1`.
pub fn integral_point<R: Rng>(rng: &mut R, ctx: PrimeContext) -> PAdicScalar {
    maybe_scalar(rng, 0.2, 0, 3, ctx)
}

/// `|a_1| > p` and `|a_1| > |j a_j|` for all `j > 1`.
pub fn dominant_linear_instance<R: Rng>(rng: &mut R, ctx: PrimeContext) -> PhasePolynomial {
    let n = rng.gen_range(2..=6);
    let v1 = rng.gen_range(-4..=-2);
    let mut coeffs = vec![scalar(rng, -3, 2, ctx), scalar(rng, v1, v1, ctx)];
    for j in 2..=n {
        let lo = v1 - index_valuation(j, ctx) + 1;
        let zero_prob = if j == n { 0.0 } else { 0.3 };
        coeffs.push(maybe_scalar(rng, zero_prob, lo, lo + 3, ctx));
    }
    PhasePolynomial::new(coeffs, ctx)
}

/// Index `m` with `|m a_m| = p^r` for the given `r`, and `|j a_j| < p^r` for
/// every other `j`.
pub fn dominant_index_instance<R: Rng>(rng: &mut R, r: i64, ctx: PrimeContext) -> PhasePolynomial {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=n);
    let mut coeffs = vec![maybe_scalar(rng, 0.5, -3, 2, ctx)];
    for j in 1..=n {
        let vj = index_valuation(j, ctx);
        if j == m {
            coeffs.push(scalar(rng, -r - vj, -r - vj, ctx));
        } else {
            let zero_prob = if j == n { 0.0 } else { 0.3 };
            coeffs.push(maybe_scalar(rng, zero_prob, -r - vj + 1, -r - vj + 4, ctx));
        }
    }
    PhasePolynomial::new(coeffs, ctx)
}

/// `|m a_m| > |j a_j|` for `j > m` only; lower indices are unconstrained.
pub fn upper_dominance_instance<R: Rng>(rng: &mut R, ctx: PrimeContext) -> (PhasePolynomial, usize) {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=n);
    let w = rng.gen_range(-4..=2);
    let mut coeffs = vec![maybe_scalar(rng, 0.3, -4, 2, ctx)];
    for j in 1..=n {
        let vj = index_valuation(j, ctx);
        let c = if j < m {
            maybe_scalar(rng, 0.3, -4, 2, ctx)
        } else if j == m {
            scalar(rng, w - vj, w - vj, ctx)
        } else {
            let zero_prob = if j == n { 0.0 } else { 0.3 };
            maybe_scalar(rng, zero_prob, w - vj + 1, w - vj + 4, ctx)
        };
        coeffs.push(c);
    }
    (PhasePolynomial::new(coeffs, ctx), m)
}

/// Proptest strategy for a scalar `p^v u / w`, zero when `zero` is set.
fn scalar_from(p: u64, zero: bool, v: i64, u: u64, w: u64, neg: bool) -> BigRational {
    if zero {
        return BigRational::from_integer(0.into());
    }
    let u = if u.is_multiple_of(p) { u + 1 } else { u };
    let w = if w.is_multiple_of(p) { w + 1 } else { w };
    let sign = if neg { -1 } else { 1 };
    let pv = BigRational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
    let base = BigRational::new(BigInt::from(sign * u as i64), BigInt::from(w));
    if v >= 0 {
        base * pv
    } else {
        base / pv
    }
}

type CoeffParts = (bool, i64, u64, u64, bool);

fn coeff_parts(vmin: i64, vmax: i64) -> impl Strategy<Value = CoeffParts> {
    (prop::bool::weighted(0.3), vmin..=vmax, 1u64..70, 1u64..=9, any::<bool>())
}

/// Polynomials with degree in `1..=degree_max` and coefficient valuations in
/// `vmin..=vmax`, over a prime drawn from `primes`.
pub fn arb_poly_in(primes: &'static [u64], degree_max: usize, vmin: i64, vmax: i64) -> impl Strategy<Value = PhasePolynomial> {
    (prop::sample::select(primes), prop::collection::vec(coeff_parts(vmin, vmax), 2..=degree_max + 1)).prop_map(
        |(p, parts)| {
            let last = parts.len() - 1;
            let coeffs = parts
                .into_iter()
                .enumerate()
                .map(|(j, (z, v, u, w, neg))| scalar_from(p, z && j != last, v, u, w, neg))
                .collect();
            PhasePolynomial::from_rationals(coeffs, ctx(p))
        },
    )
}

pub fn arb_poly() -> impl Strategy<Value = PhasePolynomial> {
    arb_poly_in(&PRIMES, 6, -4, 2)
}

/// A nonzero rational with valuation in `vmin..=vmax` for the given prime.
pub fn arb_scalar(p: u64, vmin: i64, vmax: i64) -> impl Strategy<Value = PAdicScalar> {
    coeff_parts(vmin, vmax).prop_map(move |(_, v, u, w, neg)| PAdicScalar::new(scalar_from(p, false, v, u, w, neg), ctx(p)))
}

/// Any rational, zero included.
pub fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}
