use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PrimeContext;
use crate::error::{Error, Result};

/// A p-adic valuation: an integer, or `Infinite` for zero.
///
/// The derived ordering puts every finite valuation below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in the nonzero integer `n`, and the cofactor.
pub(crate) fn split_prime_power(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`; `Infinite` for `x = 0`.
pub fn valuation(x: &BigRational, ctx: PrimeContext) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = ctx.big();
    let (vn, _) = split_prime_power(x.numer(), &p);
    let (vd, _) = split_prime_power(x.denom(), &p);
    Valuation::Finite(vn - vd)
}

/// `log_p |x|`, i.e. `-v_p(x)`; `None` encodes `|0| = 0`.
pub fn norm_exp(x: &BigRational, ctx: PrimeContext) -> Option<i64> {
    valuation(x, ctx).finite().map(|v| -v)
}

/// The p-adic fractional part: the unique `t` in `[0, 1)` with a p-power
/// denominator such that `x - t` is a p-adic integer.
pub fn fractional_part(x: &BigRational, ctx: PrimeContext) -> BigRational {
    let v = match valuation(x, ctx) {
        Valuation::Finite(v) if v < 0 => v,
        _ => return BigRational::zero(),
    };
    let p = ctx.big();
    let k = (-v) as u32;
    let pk = ctx.pow_big(k);
    let (_, unit_denom) = split_prime_power(x.denom(), &p);
    let inv = unit_denom
        .modinv(&pk)
        .expect("cofactor is coprime to p");
    let numer = (x.numer() * inv).mod_floor(&pk);
    BigRational::new(numer, pk)
}

/// Parses `[+-]digits[/digits]`.
pub fn parse_rational(token: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        token: token.to_string(),
    };
    let s = token.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| -> Result<BigInt> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    let mut numer = digits(num)?;
    if negative {
        numer = -numer;
    }
    let denom = match den {
        Some(d) => digits(d)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(numer, denom))
}

/// An exact rational number viewed inside `Q_p`, with its valuation cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicScalar {
    ctx: PrimeContext,
    value: BigRational,
    valuation: Valuation,
}

impl PAdicScalar {
    pub fn new(value: BigRational, ctx: PrimeContext) -> Self {
        let valuation = valuation(&value, ctx);
        Self {
            ctx,
            value,
            valuation,
        }
    }

    pub fn zero(ctx: PrimeContext) -> Self {
        Self {
            ctx,
            value: BigRational::zero(),
            valuation: Valuation::Infinite,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>, ctx: PrimeContext) -> Self {
        Self::new(BigRational::from_integer(n.into()), ctx)
    }

    pub fn parse(token: &str, ctx: PrimeContext) -> Result<Self> {
        parse_rational(token).map(|v| Self::new(v, ctx))
    }

    /// `p^k`, for any integer `k`.
    pub fn prime_power(k: i64, ctx: PrimeContext) -> Self {
        let pk = BigRational::from_integer(ctx.pow_big(k.unsigned_abs() as u32));
        let value = if k >= 0 { pk } else { pk.recip() };
        Self {
            ctx,
            value,
            valuation: Valuation::Finite(k),
        }
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn norm_exp(&self) -> Option<i64> {
        self.valuation.finite().map(|v| -v)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    /// `|x| <= 1`.
    pub fn is_integral(&self) -> bool {
        self.valuation >= Valuation::Finite(0)
    }

    pub fn fractional_part(&self) -> BigRational {
        fractional_part(&self.value, self.ctx)
    }

    /// Compares `|self|` with `|other|`.
    pub fn cmp_norm(&self, other: &PAdicScalar) -> Ordering {
        other.valuation.cmp(&self.valuation)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let value = num_traits::pow(self.value.clone(), exp as usize);
        let valuation = match self.valuation {
            Valuation::Finite(v) => Valuation::Finite(v * exp as i64),
            Valuation::Infinite if exp == 0 => Valuation::Finite(0),
            Valuation::Infinite => Valuation::Infinite,
        };
        Self {
            ctx: self.ctx,
            value,
            valuation,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for &PAdicScalar {
    type Output = PAdicScalar;

    fn add(self, rhs: &PAdicScalar) -> PAdicScalar {
        self.ctx.check_same(&rhs.ctx);
        PAdicScalar::new(&self.value + &rhs.value, self.ctx)
    }
}

impl Sub for &PAdicScalar {
    type Output = PAdicScalar;

    fn sub(self, rhs: &PAdicScalar) -> PAdicScalar {
        self.ctx.check_same(&rhs.ctx);
        PAdicScalar::new(&self.value - &rhs.value, self.ctx)
    }
}

impl Mul for &PAdicScalar {
    type Output = PAdicScalar;

    fn mul(self, rhs: &PAdicScalar) -> PAdicScalar {
        self.ctx.check_same(&rhs.ctx);
        PAdicScalar {
            ctx: self.ctx,
            value: &self.value * &rhs.value,
            valuation: self.valuation + rhs.valuation,
        }
    }
}

impl Neg for &PAdicScalar {
    type Output = PAdicScalar;

    fn neg(self) -> PAdicScalar {
        PAdicScalar {
            ctx: self.ctx,
            value: -&self.value,
            valuation: self.valuation,
        }
    }
}
