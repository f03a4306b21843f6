use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{EvalStats, IntegralResult, Limits};
use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, PhasePolynomial, PrimeContext};

/// `∫_{|x|<=1} χ(f(x)) dx` as `p^-N sum_{x mod p^N} χ(f(x))`.
///
/// `N` is the smallest exponent with `|a_j| <= p^N` for all `j >= 1`. For
/// `|x| <= 1` every Taylor coefficient `b_j(x)` obeys the same bound, so
/// `f(x + p^N h) - f(x)` is a p-adic integer and the integrand is constant
/// on cosets of `p^N Z_p`.
pub fn brute_force_unit_ball(f: &PhasePolynomial, limits: &Limits) -> Result<IntegralResult> {
    brute_force_with_modulus(f, f.coset_modulus_exp(), limits)
}

/// The same finite sum over residues modulo `p^modulus_exp`, for any
/// `modulus_exp` at least the coset modulus of `f`.
pub fn brute_force_with_modulus(
    f: &PhasePolynomial,
    modulus_exp: u32,
    limits: &Limits,
) -> Result<IntegralResult> {
    let ctx = f.ctx();
    assert!(
        modulus_exp >= f.coset_modulus_exp(),
        "modulus below the coset-constancy threshold"
    );
    let too_large = Error::OracleTooLarge {
        p: ctx.p(),
        required_exp: modulus_exp,
        cap: limits.oracle_max_terms,
    };
    let modulus = match ctx.pow_u128(modulus_exp) {
        Some(m) if m <= limits.oracle_max_terms as u128 => m as u64,
        _ => return Err(too_large),
    };

    // a_j p^N is p-integral; reduce it to a residue modulo p^N.
    let residues: Vec<u128> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            if j == 0 {
                0
            } else {
                scaled_residue(a, modulus_exp, ctx)
            }
        })
        .collect();

    let mut counts = vec![0i64; modulus as usize];
    let m = modulus as u128;
    for x in 0..m {
        let h = residues.iter().rev().fold(0u128, |acc, c| (acc * x + c) % m);
        counts[h as usize] += 1;
    }

    let value = CyclotomicValue::from_dense_counts(ctx, modulus_exp, -(modulus_exp as i64), counts)
        .rotate(&f.constant_term().character_angle()?)?;
    Ok(IntegralResult {
        value,
        stats: EvalStats {
            character_evaluations: modulus,
            ..EvalStats::default()
        },
    })
}

/// `a p^n mod p^n` for `v_p(a) >= -n`.
fn scaled_residue(a: &PAdicScalar, n: u32, ctx: PrimeContext) -> u128 {
    if a.is_zero() || n == 0 {
        return 0;
    }
    let pn = ctx.pow_big(n);
    let v = a.value();
    let mut numer: BigInt = v.numer() * &pn;
    let mut denom = v.denom().clone();
    let p = ctx.big();
    while (&denom % &p).is_zero() {
        denom /= &p;
        debug_assert!((&numer % &p).is_zero());
        numer /= &p;
    }
    let inv = denom.modinv(&pn).expect("denominator coprime to p");
    (numer * inv)
        .mod_floor(&pn)
        .to_u128()
        .expect("residue below modulus")
}
