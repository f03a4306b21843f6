use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::{PAdicScalar, PrimeContext, Valuation};
use crate::error::Result;

/// A phase `f(x) = a_0 + a_1 x + ... + a_n x^n` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePolynomial {
    ctx: PrimeContext,
    coeffs: Vec<PAdicScalar>,
}

/// The induction data of a phase.
///
/// `m` is the largest index maximising `|j a_j|` over `1 <= j <= n`, `r` is
/// `log_p` of that maximum, and `lambda_exp` is `log_p max |a_j|`. All three
/// are `None` when `a_j = 0` for every `j >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominanceProfile {
    pub m: Option<usize>,
    pub r: Option<i64>,
    pub lambda_exp: Option<i64>,
}

impl PhasePolynomial {
    pub fn new(coeffs: Vec<PAdicScalar>, ctx: PrimeContext) -> Self {
        for c in &coeffs {
            ctx.check_same(&c.ctx());
        }
        Self { ctx, coeffs }
    }

    pub fn from_rationals(coeffs: Vec<BigRational>, ctx: PrimeContext) -> Self {
        let coeffs = coeffs.into_iter().map(|c| PAdicScalar::new(c, ctx)).collect();
        Self { ctx, coeffs }
    }

    /// Parses comma-separated rationals, index 0 first.
    pub fn parse(list: &str, ctx: PrimeContext) -> Result<Self> {
        let coeffs = list
            .split(',')
            .map(|tok| PAdicScalar::parse(tok, ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ctx, coeffs })
    }

    pub fn zero(ctx: PrimeContext) -> Self {
        Self {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[PAdicScalar] {
        &self.coeffs
    }

    /// `a_j`, zero past the end of the stored sequence.
    pub fn coeff(&self, j: usize) -> PAdicScalar {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| PAdicScalar::zero(self.ctx))
    }

    pub fn constant_term(&self) -> PAdicScalar {
        self.coeff(0)
    }

    /// Largest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// The leading coefficient `a_n` for `n = degree()`.
    pub fn leading(&self) -> Option<&PAdicScalar> {
        self.degree().map(|n| &self.coeffs[n])
    }

    /// `f(x)`, by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c.value())
    }

    /// Same polynomial with `a_0` set to zero and trailing zeros dropped.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = PAdicScalar::zero(self.ctx);
        }
        Self::trimmed(coeffs, self.ctx)
    }

    /// Drops `a_0` and every term with `|a_j| <= 1`.
    ///
    /// On the unit ball those terms take values in `Z_p`, where the character
    /// is trivial, so the integral over `|x| <= 1` is unchanged.
    pub fn oscillating_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 || c.is_integral() {
                    PAdicScalar::zero(self.ctx)
                } else {
                    c.clone()
                }
            })
            .collect();
        Self::trimmed(coeffs, self.ctx)
    }

    fn trimmed(mut coeffs: Vec<PAdicScalar>, ctx: PrimeContext) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { ctx, coeffs }
    }

    /// Coefficients `b_j(y)` of `f(y + h)` in `h`, i.e. `f^(j)(y) / j!`.
    ///
    /// Computed by repeated synthetic division, which needs no binomials.
    pub fn taylor_shift(&self, y: &PAdicScalar) -> Self {
        self.ctx.check_same(&y.ctx());
        let mut b: Vec<BigRational> = self.coeffs.iter().map(|c| c.value().clone()).collect();
        if !y.is_zero() {
            let y = y.value();
            let n = b.len();
            for i in 0..n {
                for j in (i..n.saturating_sub(1)).rev() {
                    let carry = &b[j + 1] * y;
                    b[j] += carry;
                }
            }
        }
        Self::from_rationals(b, self.ctx)
    }

    /// `g(x) = f(c x)`, with coefficients `a_j c^j`.
    pub fn scale_argument(&self, c: &PAdicScalar) -> Self {
        self.ctx.check_same(&c.ctx());
        let mut power = PAdicScalar::from_integer(1, self.ctx);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power = &power * c;
        }
        Self {
            ctx: self.ctx,
            coeffs,
        }
    }

    /// `v_p(j a_j)`.
    pub fn weighted_valuation(&self, j: usize) -> Valuation {
        let a = self.coeff(j);
        match a.valuation() {
            Valuation::Finite(v) if j > 0 => {
                Valuation::Finite(v + self.ctx.int_valuation(j as u64) as i64)
            }
            _ => Valuation::Infinite,
        }
    }

    pub fn dominance_profile(&self) -> DominanceProfile {
        let mut best: Option<(usize, i64)> = None;
        let mut lambda: Option<i64> = None;
        for j in 1..self.coeffs.len() {
            if let Valuation::Finite(w) = self.weighted_valuation(j) {
                // `>=` keeps the largest index on ties.
                if best.is_none_or(|(_, r)| -w >= r) {
                    best = Some((j, -w));
                }
            }
            if let Some(e) = self.coeffs[j].norm_exp() {
                lambda = Some(lambda.map_or(e, |l| l.max(e)));
            }
        }
        DominanceProfile {
            m: best.map(|(m, _)| m),
            r: best.map(|(_, r)| r),
            lambda_exp: lambda,
        }
    }

    /// Smallest `N >= 0` with `|a_j| <= p^N` for all `j >= 1`.
    pub fn coset_modulus_exp(&self) -> u32 {
        self.coeffs
            .iter()
            .skip(1)
            .filter_map(|c| c.norm_exp())
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// Comma-separated coefficients, index 0 first.
    pub fn to_coeff_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn poly(p: u64, s: &str) -> PhasePolynomial {
        PhasePolynomial::parse(s, ctx(p)).unwrap()
    }

    fn scalar(p: u64, s: &str) -> PAdicScalar {
        PAdicScalar::parse(s, ctx(p)).unwrap()
    }

    #[test]
    fn taylor_shift_examples() {
        assert_eq!(poly(3, "0,0,1").taylor_shift(&scalar(3, "0")), poly(3, "0,0,1"));
        assert_eq!(poly(3, "0,0,1").taylor_shift(&scalar(3, "1")), poly(3, "1,2,1"));
        assert_eq!(poly(5, "2/5,7").taylor_shift(&scalar(5, "3")), poly(5, "107/5,7"));
        // (x+2)^3 = 8 + 12x + 6x^2 + x^3
        assert_eq!(poly(7, "0,0,0,1").taylor_shift(&scalar(7, "2")), poly(7, "8,12,6,1"));
    }

    #[test]
    fn taylor_shift_constant_is_value() {
        let f = poly(3, "1/3,2/9,-5,1/27");
        let y = scalar(3, "4/5");
        assert_eq!(f.taylor_shift(&y).constant_term().value(), &f.eval(y.value()));
    }

    #[test]
    fn dominance_examples() {
        let d = poly(3, "0,1/3,1/9").dominance_profile();
        assert_eq!((d.m, d.r), (Some(2), Some(2)));
        let d = poly(2, "0,0,1/2").dominance_profile();
        assert_eq!((d.m, d.r, d.lambda_exp), (Some(2), Some(0), Some(1)));
        let d = poly(5, "1,0,0").dominance_profile();
        assert_eq!(d, DominanceProfile { m: None, r: None, lambda_exp: None });
    }

    #[test]
    fn dominance_ties_take_largest_index() {
        // |1 * 1/3| = |2 * 1/3| = 3 for p = 3
        let d = poly(3, "0,1/3,1/3").dominance_profile();
        assert_eq!((d.m, d.r), (Some(2), Some(1)));
    }

    #[test]
    fn scale_argument_examples() {
        let three = scalar(3, "3");
        assert_eq!(poly(3, "0,0,1").scale_argument(&three), poly(3, "0,0,9"));
        assert_eq!(poly(3, "0,1/9,0,1").scale_argument(&three), poly(3, "0,1/3,0,27"));
        let f = poly(5, "3,1/5,-2/25");
        assert_eq!(f.scale_argument(&scalar(5, "1")), f);
    }

    #[test]
    fn degree_and_trimming() {
        assert_eq!(poly(3, "1,2,0,0").degree(), Some(1));
        assert_eq!(poly(3, "0,0").degree(), None);
        assert_eq!(poly(3, "5,1/3,2,1/9,0").oscillating_part(), poly(3, "0,1/3,0,1/9"));
        assert_eq!(poly(3, "5,1,1").oscillating_part().coeffs().len(), 0);
        assert_eq!(poly(3, "5,1/3,2").without_constant(), poly(3, "0,1/3,2"));
    }

    #[test]
    fn coset_modulus() {
        assert_eq!(poly(3, "1/81,1/3,2,1/9").coset_modulus_exp(), 2);
        assert_eq!(poly(3, "1/81,3").coset_modulus_exp(), 0);
    }
}
