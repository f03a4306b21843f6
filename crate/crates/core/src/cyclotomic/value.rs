use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::padic::{Angle, PrimeContext};

/// `p^scale_exp * sum_e terms[e] * zeta^e` with `zeta = exp(2 pi i / p^order_exp)`.
///
/// Values are kept canonical:
/// * exponents lie in `[0, (p-1) p^(M-1))`, the power basis of `Z[zeta]`
///   modulo `Phi_{p^M}(x) = sum_{i<p} x^(i p^(M-1))`;
/// * `order_exp` is minimal (no exponent shares a factor of `p` with all others);
/// * the coefficients have no common factor `p` (it is moved into `scale_exp`);
/// * zero is `order_exp = 0, scale_exp = 0` with no terms.
///
/// Under these rules two values are equal as complex numbers iff they are
/// structurally equal, so `PartialEq` is exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    ctx: PrimeContext,
    order_exp: u32,
    scale_exp: i64,
    terms: BTreeMap<u128, BigInt>,
}

impl CyclotomicValue {
    pub fn zero(ctx: PrimeContext) -> Self {
        Self {
            ctx,
            order_exp: 0,
            scale_exp: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: PrimeContext) -> Self {
        Self::from_integer(BigInt::from(1), ctx)
    }

    pub fn from_integer(n: BigInt, ctx: PrimeContext) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, n);
        Self::canonical(ctx, 0, 0, terms)
    }

    /// `e^{2 pi i t}` for an angle `t`.
    pub fn from_angle(angle: &Angle) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(angle.numer(), BigInt::from(1));
        Self::canonical(angle.ctx(), angle.order_exp(), 0, terms)
    }

    /// `p^scale_exp * sum_e counts[e] zeta^e` for a dense count vector of
    /// length `p^order_exp`.
    pub fn from_dense_counts(
        ctx: PrimeContext,
        order_exp: u32,
        scale_exp: i64,
        mut counts: Vec<i64>,
    ) -> Self {
        let p = ctx.p() as usize;
        if order_exp == 0 {
            let total: i64 = counts.iter().sum();
            return Self::from_integer(total.into(), ctx).rescale(scale_exp);
        }
        let step = p.pow(order_exp - 1);
        let basis = (p - 1) * step;
        assert_eq!(counts.len(), p * step);
        for e in basis..counts.len() {
            let c = std::mem::take(&mut counts[e]);
            if c != 0 {
                let t = e - basis;
                for i in 0..p - 1 {
                    counts[i * step + t] -= c;
                }
            }
        }
        let terms = counts[..basis]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(e, c)| (e as u128, BigInt::from(*c)))
            .collect();
        Self::canonical(ctx, order_exp, scale_exp, terms)
    }

    /// Reduces arbitrary exponents in `[0, p^order_exp)` to canonical form.
    fn canonical(
        ctx: PrimeContext,
        mut order_exp: u32,
        mut scale_exp: i64,
        raw: BTreeMap<u128, BigInt>,
    ) -> Self {
        let p = ctx.p() as u128;
        let mut terms: BTreeMap<u128, BigInt> = BTreeMap::new();
        if order_exp == 0 {
            let total: BigInt = raw.into_values().sum();
            terms.insert(0, total);
        } else {
            let step = ctx.pow_u128(order_exp - 1).unwrap();
            let basis = (p - 1) * step;
            for (e, c) in raw {
                if e < basis {
                    *terms.entry(e).or_default() += c;
                } else {
                    // zeta^(basis + t) = -sum_{i < p-1} zeta^(i step + t)
                    let t = e - basis;
                    for i in 0..p - 1 {
                        *terms.entry(i * step + t).or_default() -= &c;
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        if terms.is_empty() {
            return Self::zero(ctx);
        }

        while order_exp > 0 && terms.keys().all(|e| e % p == 0) {
            terms = terms.into_iter().map(|(e, c)| (e / p, c)).collect();
            order_exp -= 1;
        }

        let pb = ctx.big();
        let content = terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let mut shift = 0i64;
        let mut divisor = BigInt::from(1);
        while (&content % (&divisor * &pb)).is_zero() {
            divisor *= &pb;
            shift += 1;
        }
        if shift > 0 {
            for c in terms.values_mut() {
                *c /= &divisor;
            }
            scale_exp += shift;
        }

        Self {
            ctx,
            order_exp,
            scale_exp,
            terms,
        }
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn order_exp(&self) -> u32 {
        self.order_exp
    }

    pub fn scale_exp(&self) -> i64 {
        self.scale_exp
    }

    pub fn terms(&self) -> &BTreeMap<u128, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute values of the canonical coefficients.
    pub fn coefficient_mass(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Terms lifted to `order_exp` and scaled to `scale_exp`, both no smaller
    /// than the value's own.
    fn aligned_terms(&self, order_exp: u32, scale_exp: i64) -> impl Iterator<Item = (u128, BigInt)> + '_ {
        let lift = self.ctx.pow_u128(order_exp - self.order_exp).unwrap();
        let factor = self.ctx.pow_big((self.scale_exp - scale_exp) as u32);
        self.terms.iter().map(move |(e, c)| (e * lift, c * &factor))
    }

    pub fn add(&self, other: &CyclotomicValue) -> CyclotomicValue {
        self.ctx.check_same(&other.ctx);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let order = self.order_exp.max(other.order_exp);
        let scale = self.scale_exp.min(other.scale_exp);
        let mut raw: BTreeMap<u128, BigInt> = self.aligned_terms(order, scale).collect();
        for (e, c) in other.aligned_terms(order, scale) {
            *raw.entry(e).or_default() += c;
        }
        Self::canonical(self.ctx, order, scale, raw)
    }

    pub fn sum<'a>(ctx: PrimeContext, values: impl IntoIterator<Item = &'a CyclotomicValue>) -> Self {
        let values: Vec<_> = values.into_iter().filter(|v| !v.is_zero()).collect();
        let Some(order) = values.iter().map(|v| v.order_exp).max() else {
            return Self::zero(ctx);
        };
        let scale = values.iter().map(|v| v.scale_exp).min().unwrap();
        let mut raw: BTreeMap<u128, BigInt> = BTreeMap::new();
        for v in values {
            v.ctx.check_same(&ctx);
            for (e, c) in v.aligned_terms(order, scale) {
                *raw.entry(e).or_default() += c;
            }
        }
        Self::canonical(ctx, order, scale, raw)
    }

    pub fn neg(&self) -> CyclotomicValue {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &CyclotomicValue) -> CyclotomicValue {
        self.add(&other.neg())
    }

    /// Multiplication by `e^{2 pi i angle}`.
    pub fn rotate(&self, angle: &Angle) -> Result<CyclotomicValue> {
        self.ctx.check_same(&angle.ctx());
        if angle.is_zero() || self.is_zero() {
            return Ok(self.clone());
        }
        let order = self.order_exp.max(angle.order_exp());
        let modulus = self.ctx.order(order)?;
        let shift = angle.numer_at(order);
        let lift = self.ctx.pow_u128(order - self.order_exp).unwrap();
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (add_mod(e * lift, shift, modulus), c.clone()))
            .collect();
        Ok(Self::canonical(self.ctx, order, self.scale_exp, raw))
    }

    /// Multiplication by `p^ds`.
    pub fn rescale(&self, ds: i64) -> CyclotomicValue {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            scale_exp: self.scale_exp + ds,
            ..self.clone()
        }
    }

    pub fn conj(&self) -> CyclotomicValue {
        if self.order_exp == 0 {
            return self.clone();
        }
        let modulus = self.ctx.pow_u128(self.order_exp).unwrap();
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| ((modulus - e) % modulus, c.clone()))
            .collect();
        Self::canonical(self.ctx, self.order_exp, self.scale_exp, raw)
    }

    pub fn mul(&self, other: &CyclotomicValue) -> CyclotomicValue {
        self.ctx.check_same(&other.ctx);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx);
        }
        let order = self.order_exp.max(other.order_exp);
        let modulus = self.ctx.pow_u128(order).unwrap();
        let lhs: Vec<_> = self.aligned_terms(order, self.scale_exp).collect();
        let rhs: Vec<_> = other.aligned_terms(order, other.scale_exp).collect();
        let mut raw: BTreeMap<u128, BigInt> = BTreeMap::new();
        for (e1, c1) in &lhs {
            for (e2, c2) in &rhs {
                *raw.entry(add_mod(*e1, *e2, modulus)).or_default() += c1 * c2;
            }
        }
        Self::canonical(self.ctx, order, self.scale_exp + other.scale_exp, raw)
    }

    /// The value as a rational number, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<num_rational::BigRational> {
        if self.order_exp != 0 {
            return None;
        }
        let c = self.terms.get(&0).cloned().unwrap_or_default();
        let pk = self.ctx.pow_big(self.scale_exp.unsigned_abs() as u32);
        Some(if self.scale_exp >= 0 {
            num_rational::BigRational::from_integer(c * pk)
        } else {
            num_rational::BigRational::new(c, pk)
        })
    }

    pub fn record(&self) -> ValueRecord {
        ValueRecord {
            p: self.ctx.p(),
            order_exp: self.order_exp,
            scale_exp: self.scale_exp,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
    }
}

fn add_mod(a: u128, b: u128, modulus: u128) -> u128 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= modulus {
        s.wrapping_sub(modulus)
    } else {
        s
    }
}

/// Serialized form of a [`CyclotomicValue`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueRecord {
    pub p: u64,
    pub order_exp: u32,
    pub scale_exp: i64,
    pub terms: Vec<(u128, String)>,
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}^{} * (", self.ctx.p(), self.scale_exp)?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*z^{e}")?;
        }
        write!(f, "), z = e(1/{}^{})", self.ctx.p(), self.order_exp)
    }
}
