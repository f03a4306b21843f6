use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::scalar::{fractional_part, split_prime_power};
use super::{PAdicScalar, PrimeContext};
use crate::error::{Error, Result};

/// A rational number modulo 1 with a p-power denominator, `numer / p^order_exp`.
///
/// Always reduced: `numer < p^order_exp` and `p` does not divide `numer`
/// unless the angle is zero, in which case `order_exp = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    ctx: PrimeContext,
    order_exp: u32,
    numer: u128,
}

impl Angle {
    pub fn zero(ctx: PrimeContext) -> Self {
        Self {
            ctx,
            order_exp: 0,
            numer: 0,
        }
    }

    /// `numer / p^order_exp` reduced modulo 1.
    pub fn new(numer: u128, order_exp: u32, ctx: PrimeContext) -> Result<Self> {
        let modulus = ctx.order(order_exp)?;
        let mut numer = numer % modulus;
        let mut order_exp = order_exp;
        let p = ctx.p() as u128;
        if numer == 0 {
            order_exp = 0;
        }
        while order_exp > 0 && numer.is_multiple_of(p) {
            numer /= p;
            order_exp -= 1;
        }
        Ok(Self {
            ctx,
            order_exp,
            numer,
        })
    }

    /// Interprets a rational as an angle; its denominator must be a power of `p`.
    pub fn from_rational(t: &BigRational, ctx: PrimeContext) -> Result<Self> {
        let p = ctx.big();
        let (k, rest) = split_prime_power(t.denom(), &p);
        if rest != BigInt::from(1) {
            return Err(Error::NotPrimePower(t.denom().to_string()));
        }
        let order_exp = k as u32;
        let modulus = BigInt::from(ctx.order(order_exp)?);
        let numer = num_integer::Integer::mod_floor(t.numer(), &modulus)
            .to_u128()
            .expect("reduced below a u128 modulus");
        Self::new(numer, order_exp, ctx)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn order_exp(&self) -> u32 {
        self.order_exp
    }

    pub fn numer(&self) -> u128 {
        self.numer
    }

    pub fn is_zero(&self) -> bool {
        self.numer == 0
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numer.into(), self.ctx.pow_big(self.order_exp))
    }

    /// Numerator over `p^order_exp` for a larger order.
    pub(crate) fn numer_at(&self, order_exp: u32) -> u128 {
        debug_assert!(order_exp >= self.order_exp);
        self.numer * self.ctx.pow_u128(order_exp - self.order_exp).unwrap()
    }

    pub fn add(&self, other: &Angle) -> Result<Angle> {
        self.ctx.check_same(&other.ctx);
        let order = self.order_exp.max(other.order_exp);
        let modulus = self.ctx.order(order)?;
        // Both numerators are below `modulus <= u128::MAX`.
        let (sum, carry) = self.numer_at(order).overflowing_add(other.numer_at(order));
        let sum = if carry || sum >= modulus {
            sum.wrapping_sub(modulus)
        } else {
            sum
        };
        Angle::new(sum, order, self.ctx)
    }

    pub fn neg(&self) -> Angle {
        if self.is_zero() {
            return *self;
        }
        let modulus = self.ctx.pow_u128(self.order_exp).unwrap();
        Angle {
            numer: modulus - self.numer,
            ..*self
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/{}^{}", self.numer, self.ctx.p(), self.order_exp)
        }
    }
}

/// The angle `t` with `chi(x) = e^{2 pi i t}`, namely the p-adic fractional part of `x`.
pub fn character_angle(x: &BigRational, ctx: PrimeContext) -> Result<Angle> {
    if x.is_zero() {
        return Ok(Angle::zero(ctx));
    }
    Angle::from_rational(&fractional_part(x, ctx), ctx)
}

impl PAdicScalar {
    pub fn character_angle(&self) -> Result<Angle> {
        if self.is_integral() {
            return Ok(Angle::zero(self.ctx()));
        }
        character_angle(self.value(), self.ctx())
    }
}
