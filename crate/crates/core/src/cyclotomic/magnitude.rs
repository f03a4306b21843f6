//! Certified enclosures of `|v|` for cyclotomic values.
//!
//! All arithmetic is on integers scaled by `2^bits` with truncating
//! operations whose accumulated error is tracked explicitly, so every
//! enclosure is rigorous rather than approximate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CyclotomicValue;

/// Extra working bits carried internally on top of the requested precision.
const GUARD_BITS: u32 = 32;

/// A certified interval `[lo, hi] / 2^frac_bits` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    frac_bits: u32,
}

impl Enclosure {
    pub fn new(lo: BigInt, hi: BigInt, frac_bits: u32) -> Self {
        assert!(lo <= hi, "inverted enclosure");
        Self { lo, hi, frac_bits }
    }

    pub fn exact_integer(n: impl Into<BigInt>, frac_bits: u32) -> Self {
        let v = n.into() << frac_bits;
        Self::new(v.clone(), v, frac_bits)
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.frac_bits)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.frac_bits)
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lower() + self.upper()) / BigInt::from(2)
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    /// Outward-rounded to fewer fractional bits.
    pub fn coarsen(&self, frac_bits: u32) -> Enclosure {
        if frac_bits >= self.frac_bits {
            let s = frac_bits - self.frac_bits;
            return Enclosure::new(&self.lo << s, &self.hi << s, frac_bits);
        }
        let d = BigInt::one() << (self.frac_bits - frac_bits);
        Enclosure::new(self.lo.div_floor(&d), self.hi.div_ceil(&d), frac_bits)
    }

    /// A lower bound as an `f64`, rounded toward `-inf`.
    pub fn lower_f64(&self) -> f64 {
        directed_f64(&self.lower(), Ordering::Less)
    }

    /// An upper bound as an `f64`, rounded toward `+inf`.
    pub fn upper_f64(&self) -> f64 {
        directed_f64(&self.upper(), Ordering::Greater)
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Lower bound in scientific notation with `digits` significant digits, rounded down.
    pub fn lower_decimal(&self, digits: usize) -> String {
        to_decimal(&self.lower(), digits, false)
    }

    /// Upper bound in scientific notation with `digits` significant digits, rounded up.
    pub fn upper_decimal(&self, digits: usize) -> String {
        to_decimal(&self.upper(), digits, true)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower_decimal(17), self.upper_decimal(17))
    }
}

fn directed_f64(x: &BigRational, dir: Ordering) -> f64 {
    let approx = x.to_f64().unwrap_or(f64::NAN);
    if !approx.is_finite() {
        return approx;
    }
    match BigRational::from_float(approx).map(|a| a.cmp(x)) {
        Some(Ordering::Equal) | None => approx,
        Some(ord) if ord == dir => approx,
        Some(_) => match dir {
            Ordering::Less => approx.next_down(),
            _ => approx.next_up(),
        },
    }
}

/// Decimal scientific notation of a nonnegative rational, rounded down or up.
fn to_decimal(x: &BigRational, digits: usize, round_up: bool) -> String {
    assert!(!x.is_negative());
    if x.is_zero() {
        return "0".to_string();
    }
    // Pick k so that x * 10^k has exactly `digits` integer digits.
    let ten = BigInt::from(10);
    let estimate = x.numer().bits() as f64 - x.denom().bits() as f64;
    let mut k = digits as i64 - 1 - (estimate * std::f64::consts::LOG10_2).floor() as i64;
    let scaled = |k: i64| -> BigRational {
        let pk = BigRational::from_integer(num_traits::pow(ten.clone(), k.unsigned_abs() as usize));
        if k >= 0 {
            x * pk
        } else {
            x / pk
        }
    };
    let lower_limit = num_traits::pow(ten.clone(), digits - 1);
    let upper_limit = &lower_limit * &ten;
    loop {
        let s = scaled(k).floor().to_integer();
        if s < lower_limit {
            k += 1;
        } else if s >= upper_limit {
            k -= 1;
        } else {
            break;
        }
    }
    let s = scaled(k);
    let mut d = if round_up {
        s.ceil().to_integer()
    } else {
        s.floor().to_integer()
    };
    if d >= upper_limit {
        d = d.div_ceil(&ten);
        k -= 1;
    }
    let text = d.to_string();
    let exp = digits as i64 - 1 - k;
    format!("{}.{}e{}", &text[..1], &text[1..], exp)
}

/// Fixed-point `2 pi` sines and cosines at a given precision.
///
/// Every returned value is within `err` units of `2^-bits` of the truth,
/// where `err` is reported alongside it.
#[derive(Debug, Clone)]
pub struct TrigContext {
    bits: u32,
    pi: BigInt,
    pi_err: u64,
}

impl TrigContext {
    pub fn new(bits: u32) -> Self {
        // pi at 16 extra bits by Machin's formula, then truncated.
        let wide = bits + 16;
        let (a, ka) = atan_inv(5, wide);
        let (b, kb) = atan_inv(239, wide);
        let pi_wide: BigInt = (a << 4) - (b << 2);
        let wide_err = 16 * (2 * ka + 4) + 4 * (2 * kb + 4);
        let pi = pi_wide >> 16;
        let pi_err = wide_err.div_ceil(1 << 16) + 1;
        Self { bits, pi, pi_err }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn pi(&self) -> (&BigInt, u64) {
        (&self.pi, self.pi_err)
    }

    /// `(cos(2 pi e/q), sin(2 pi e/q), err)` for `0 <= e < q`.
    pub fn cos_sin_turn(&self, e: &BigInt, q: &BigInt) -> (BigInt, BigInt, u64) {
        // 2 pi e/q = k pi/2 + phi, phi in [0, pi/2)
        let (k, rem) = (e * 4u32).div_rem(q);
        let k = k.to_u32().expect("e < q") % 4;
        let (rem, swap) = if rem.clone() * 2u32 > *q {
            (q - &rem, true)
        } else {
            (rem, false)
        };
        // phi = (pi/2) * rem/q <= pi/4
        let phi = (&self.pi * &rem).div_floor(&(q * 2u32));
        let phi_err = self.pi_err.div_ceil(4) + 1;
        let (mut c, mut s, err) = self.cos_sin_small(&phi, phi_err);
        if swap {
            std::mem::swap(&mut c, &mut s);
        }
        let (c, s) = match k {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        (c, s, err)
    }

    /// Taylor series for `0 <= phi <= pi/4` given to within `phi_err` units.
    fn cos_sin_small(&self, phi: &BigInt, phi_err: u64) -> (BigInt, BigInt, u64) {
        let one = BigInt::one() << self.bits;
        // phi^2 is off by at most 2 phi phi_err + phi_err^2 + 1 units, phi < 0.8
        let phi2 = (phi * phi) >> self.bits;
        let phi2_err = 2 * phi_err + 2;

        let mut cos = one.clone();
        let mut term = one;
        let mut k: u64 = 1;
        loop {
            term = ((&term * &phi2) >> self.bits) / BigInt::from((2 * k - 1) * (2 * k));
            if term.is_zero() {
                break;
            }
            if k % 2 == 1 {
                cos -= &term;
            } else {
                cos += &term;
            }
            k += 1;
        }
        let cos_terms = k;

        let mut sin = phi.clone();
        let mut term = phi.clone();
        let mut k: u64 = 1;
        loop {
            term = ((&term * &phi2) >> self.bits) / BigInt::from((2 * k) * (2 * k + 1));
            if term.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sin -= &term;
            } else {
                sin += &term;
            }
            k += 1;
        }
        let terms = cos_terms.max(k);

        // Each series term is within phi2_err + 3 units of its exact value, the
        // first sine term within phi_err; the truncated tail is below one
        // unit plus the same per-term error.
        let err = (terms + 2) * (phi2_err + 4) + phi_err;
        (cos, sin, err)
    }
}

/// `atan(1/x)` at `bits` fractional bits, with the number of series terms.
///
/// Each term is within 2 units and the omitted tail is below 2 units, so the
/// error is at most `2 k + 4` units.
fn atan_inv(x: u32, bits: u32) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << bits) / x;
    let mut sum = power.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        power = power.div_floor(&x2);
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    (sum, k)
}

impl CyclotomicValue {
    /// A certified enclosure of `|self|` with `precision_bits` fractional bits.
    ///
    /// The width is at most `p^scale_exp * T * 2^(4 - precision_bits)` where
    /// `T` is the sum of absolute canonical coefficients.
    pub fn magnitude(&self, precision_bits: u32) -> Enclosure {
        self.magnitude_with(&TrigContext::new(precision_bits + GUARD_BITS))
            .coarsen(precision_bits)
    }

    /// As [`magnitude`](Self::magnitude), at the precision of a prepared
    /// [`TrigContext`] and without the final coarsening.
    pub fn magnitude_with(&self, trig: &TrigContext) -> Enclosure {
        let bits = trig.bits();
        if self.is_zero() {
            return Enclosure::exact_integer(0, bits);
        }
        let q = BigInt::from(self.ctx().pow_u128(self.order_exp()).unwrap());
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let mut err = BigInt::zero();
        for (e, c) in self.terms() {
            if *e == 0 {
                re += c << bits;
                continue;
            }
            let (cos, sin, term_err) = trig.cos_sin_turn(&BigInt::from(*e), &q);
            re += c * cos;
            im += c * sin;
            err += c.abs() * term_err;
        }

        let (re_lo, re_hi) = abs_range(&re, &err);
        let (im_lo, im_hi) = abs_range(&im, &err);
        let sq_lo = &re_lo * &re_lo + &im_lo * &im_lo;
        let sq_hi = &re_hi * &re_hi + &im_hi * &im_hi;
        let mut lo = sq_lo.sqrt();
        let mut hi = sq_hi.sqrt();
        if &hi * &hi < sq_hi {
            hi += 1;
        }

        let s = self.scale_exp();
        let pk = self.ctx().pow_big(s.unsigned_abs() as u32);
        if s >= 0 {
            lo *= &pk;
            hi *= &pk;
        } else {
            lo = lo.div_floor(&pk);
            hi = hi.div_ceil(&pk);
        }
        Enclosure::new(lo, hi, bits)
    }
}

/// Range of `|x|` for `x` in `[v - err, v + err]`.
fn abs_range(v: &BigInt, err: &BigInt) -> (BigInt, BigInt) {
    let a = v.abs();
    let hi = &a + err;
    let lo = if &a > err { a - err } else { BigInt::zero() };
    (lo, hi)
}

/// `floor(p^q * 2^bits)` for rational `q`, with a flag telling whether it is exact.
pub fn prime_power_floor(p: u64, q: &BigRational, bits: u32) -> (BigInt, bool) {
    let num = q.numer();
    let den = q.denom().to_u32().expect("root index fits u32");
    let a = num.magnitude().to_u32().expect("exponent fits u32");
    let pa = num_traits::pow(BigInt::from(p), a as usize);
    let scale = BigInt::one() << (bits as usize * den as usize);
    // floor(X^(1/d)) = floor(floor(X)^(1/d)) for X >= 0
    let (radicand, exact_radicand) = if num.sign() == Sign::Minus {
        let (quot, rem) = scale.div_rem(&pa);
        (quot, rem.is_zero())
    } else {
        (pa * scale, true)
    };
    let root = radicand.nth_root(den);
    let exact = exact_radicand && num_traits::pow(root.clone(), den as usize) == radicand;
    (root, exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{Angle, PrimeContext};

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_is_accurate() {
        let t = TrigContext::new(200);
        let (pi, err) = t.pi();
        let digits = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899";
        let reference = BigRational::new(
            digits.replace('.', "").parse::<BigInt>().unwrap(),
            num_traits::pow(BigInt::from(10), digits.len() - 2),
        );
        let approx = BigRational::new(pi.clone(), BigInt::one() << 200);
        let diff = (approx - reference).abs();
        assert!(diff <= BigRational::new(BigInt::from(err), BigInt::one() << 200));
        assert!(err < 4);
    }

    #[test]
    fn trig_at_known_angles() {
        let t = TrigContext::new(120);
        let one = BigRational::from_integer(1.into());
        for (e, q, c, s) in [(0, 8, 1.0, 0.0), (1, 4, 0.0, 1.0), (1, 2, -1.0, 0.0), (3, 4, 0.0, -1.0)] {
            let (cv, sv, err) = t.cos_sin_turn(&BigInt::from(e), &BigInt::from(q));
            let tol = BigRational::new(err.into(), BigInt::one() << 120);
            let cr = BigRational::new(cv, BigInt::one() << 120);
            let sr = BigRational::new(sv, BigInt::one() << 120);
            assert!((cr - BigRational::from_float(c).unwrap()).abs() <= tol);
            assert!((sr - BigRational::from_float(s).unwrap()).abs() <= tol);
        }
        // cos^2 + sin^2 = 1 on an awkward angle
        let (cv, sv, err) = t.cos_sin_turn(&BigInt::from(123456789), &BigInt::from(5u64.pow(13)));
        let cr = BigRational::new(cv, BigInt::one() << 120);
        let sr = BigRational::new(sv, BigInt::one() << 120);
        let tol = BigRational::new(BigInt::from(3 * err), BigInt::one() << 120);
        assert!((&cr * &cr + &sr * &sr - one).abs() <= tol);
    }

    #[test]
    fn magnitude_of_one() {
        let e = CyclotomicValue::one(ctx(3)).magnitude(128);
        assert!(e.contains(&rat(1, 1)));
        assert!(e.width() < rat(1, 1_000_000_000_000_000));
    }

    #[test]
    fn magnitude_of_zero() {
        let e = CyclotomicValue::zero(ctx(3)).magnitude(256);
        assert!(e.is_point());
        assert_eq!(e.upper(), rat(0, 1));
    }

    #[test]
    fn magnitude_of_gauss_sum() {
        let c = ctx(5);
        let values: Vec<_> = (0..5u128)
            .map(|x| CyclotomicValue::from_angle(&Angle::new(x * x, 1, c).unwrap()))
            .collect();
        let g = CyclotomicValue::sum(c, &values).rescale(-1);
        let e = g.magnitude(128);
        // |g|^2 = 1/5 exactly
        assert!(e.lower() * e.lower() <= rat(1, 5));
        assert!(e.upper() * e.upper() >= rat(1, 5));
        assert!((e.midpoint_f64() - 0.447_213_595_499_957_9).abs() < 1e-15);
    }

    #[test]
    fn coarsen_is_outward() {
        let e = Enclosure::new(BigInt::from(5), BigInt::from(7), 2).coarsen(1);
        assert_eq!((e.lo_scaled().clone(), e.hi_scaled().clone()), (BigInt::from(2), BigInt::from(4)));
    }

    #[test]
    fn decimal_rendering_is_directed() {
        let third = Enclosure::new(BigInt::from(1) << 100, BigInt::from(1) << 100, 100);
        assert_eq!(third.lower_decimal(5), "1.0000e0");
        let x = BigRational::new(1.into(), 3.into());
        assert_eq!(to_decimal(&x, 4, false), "3.333e-1");
        assert_eq!(to_decimal(&x, 4, true), "3.334e-1");
        assert_eq!(to_decimal(&rat(999_999, 1000), 3, true), "1.00e3");
        assert_eq!(to_decimal(&rat(999_999, 1000), 3, false), "9.99e2");
        assert_eq!(to_decimal(&rat(12345, 1), 3, false), "1.23e4");
    }

    #[test]
    fn directed_f64_brackets() {
        let x = rat(1, 3);
        let e = Enclosure::new(BigInt::from(1), BigInt::from(1), 0);
        assert_eq!(e.lower_f64(), 1.0);
        let lo = directed_f64(&x, Ordering::Less);
        let hi = directed_f64(&x, Ordering::Greater);
        assert!(BigRational::from_float(lo).unwrap() <= x);
        assert!(BigRational::from_float(hi).unwrap() >= x);
        assert!(hi > lo);
    }

    #[test]
    fn prime_power_floor_cases() {
        // 5^(3/2) = 11.18..., 3^(1/2) = 1.732..., 2^(-1) exact
        assert_eq!(prime_power_floor(5, &rat(3, 2), 0), (BigInt::from(11), false));
        assert_eq!(prime_power_floor(3, &rat(1, 2), 4), (BigInt::from(27), false));
        assert_eq!(prime_power_floor(2, &rat(-1, 1), 3), (BigInt::from(4), true));
        assert_eq!(prime_power_floor(9, &rat(1, 2), 2), (BigInt::from(12), true));
        assert_eq!(prime_power_floor(3, &rat(-1, 2), 8), (BigInt::from(147), false));
    }
}
