use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// A fixed prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeContext {
    p: u64,
}

impl PrimeContext {
    /// Checks primality by trial division.
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d: &u64| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^exp` as a `u128`, or `None` on overflow.
    pub fn pow_u128(&self, exp: u32) -> Option<u128> {
        (self.p as u128).checked_pow(exp)
    }

    /// `p^exp`, failing with [`Error::OrderOverflow`] when it does not fit a `u128`.
    pub fn order(&self, exp: u32) -> Result<u128> {
        self.pow_u128(exp).ok_or(Error::OrderOverflow {
            p: self.p,
            order_exp: exp as u64,
        })
    }

    pub fn pow_big(&self, exp: u32) -> BigInt {
        num_traits::pow(self.big(), exp as usize)
    }

    /// Exponent of `p` in the nonzero integer `n`.
    pub fn int_valuation(&self, n: u64) -> u32 {
        debug_assert!(n != 0);
        let mut n = n;
        let mut v = 0;
        while n.is_multiple_of(self.p) {
            n /= self.p;
            v += 1;
        }
        v
    }

    pub(crate) fn check_same(&self, other: &PrimeContext) {
        assert_eq!(self.p, other.p, "values over different primes");
    }
}

impl fmt::Display for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}
