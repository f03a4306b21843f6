use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CampaignConfig;
use crate::padic::{Ball, PAdicScalar, PhasePolynomial, PrimeContext};

/// The `index`-th output of a SplitMix64 stream started at `seed`.
///
/// Each trial seeds its own generator with `sub_seed(seed, index)`, so a
/// trial can be reproduced without replaying the ones before it.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p^v u / w` with `v` uniform in the valuation range, `u` uniform in
/// `[1, 10p)` and `w` uniform in `1..=9`, both coprime to `p`.
pub fn random_nonzero_scalar<R: Rng>(rng: &mut R, valuation_min: i64, valuation_max: i64, ctx: PrimeContext) -> PAdicScalar {
    let p = ctx.p();
    let v = rng.gen_range(valuation_min..=valuation_max);
    let u = loop {
        let u = rng.gen_range(1..10 * p);
        if u % p != 0 {
            break u;
        }
    };
    let w = loop {
        let w = rng.gen_range(1..=9u64);
        if w % p != 0 {
            break w;
        }
    };
    let unit = PAdicScalar::new(BigRational::new(u.into(), w.into()), ctx);
    &unit * &PAdicScalar::prime_power(v, ctx)
}

/// Degree uniform in `[1, degree_max]`; each coefficient zero with
/// probability `zero_prob`, the leading one never.
pub fn generate_polynomial_with<R: Rng>(rng: &mut R, config: &CampaignConfig, ctx: PrimeContext) -> PhasePolynomial {
    let degree = rng.gen_range(1..=config.degree_max.max(1));
    let coeffs = (0..=degree)
        .map(|j| {
            if j != degree && rng.gen_bool(config.zero_prob) {
                PAdicScalar::zero(ctx)
            } else {
                random_nonzero_scalar(rng, config.valuation_min, config.valuation_max, ctx)
            }
        })
        .collect();
    PhasePolynomial::new(coeffs, ctx)
}

pub fn generate_polynomial(sub_seed: u64, config: &CampaignConfig, ctx: PrimeContext) -> PhasePolynomial {
    generate_polynomial_with(&mut trial_rng(sub_seed), config, ctx)
}

/// Center drawn like a coefficient (zero with `zero_prob`), radius exponent
/// uniform in the configured range.
pub fn generate_ball<R: Rng>(rng: &mut R, config: &CampaignConfig, ctx: PrimeContext) -> Ball {
    let center = if rng.gen_bool(config.zero_prob) {
        PAdicScalar::zero(ctx)
    } else {
        random_nonzero_scalar(rng, config.valuation_min, config.valuation_max, ctx)
    };
    Ball::new(center, rng.gen_range(config.radius_min..=config.radius_max))
}
