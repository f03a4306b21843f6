use std::fmt;

use super::{PAdicScalar, Valuation};

/// The ball `{x : |x - center| <= p^radius_exp}`, of Haar measure `p^radius_exp`.
#[derive(Debug, Clone)]
pub struct Ball {
    center: PAdicScalar,
    radius_exp: i64,
}

impl Ball {
    pub fn new(center: PAdicScalar, radius_exp: i64) -> Self {
        Self { center, radius_exp }
    }

    pub fn unit(ctx: super::PrimeContext) -> Self {
        Self::new(PAdicScalar::zero(ctx), 0)
    }

    pub fn center(&self) -> &PAdicScalar {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    /// `log_p` of the Haar measure.
    pub fn measure_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn contains(&self, x: &PAdicScalar) -> bool {
        (x - &self.center).valuation() >= Valuation::Finite(-self.radius_exp)
    }

    pub fn is_unit_ball(&self) -> bool {
        self.radius_exp == 0 && self.center.is_integral()
    }

    /// The `p` balls of radius exponent `radius_exp - 1` partitioning this one.
    pub fn children(&self) -> Vec<Ball> {
        let ctx = self.center.ctx();
        let step = PAdicScalar::prime_power(-self.radius_exp, ctx);
        (0..ctx.p())
            .map(|k| {
                let offset = &PAdicScalar::from_integer(k, ctx) * &step;
                Ball::new(&self.center + &offset, self.radius_exp - 1)
            })
            .collect()
    }
}

/// Balls are equal as sets: any point of a ball is a center.
impl PartialEq for Ball {
    fn eq(&self, other: &Ball) -> bool {
        self.radius_exp == other.radius_exp && self.contains(&other.center)
    }
}

impl Eq for Ball {}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{x : |x - {}| <= {}^{}}}",
            self.center,
            self.center.ctx().p(),
            self.radius_exp
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn s(v: &str) -> PAdicScalar {
        PAdicScalar::parse(v, PrimeContext::new(3).unwrap()).unwrap()
    }

    #[test]
    fn every_point_is_a_center() {
        assert_eq!(Ball::new(s("0"), 0), Ball::new(s("5"), 0));
        assert_eq!(Ball::new(s("1/3"), 1), Ball::new(s("2/3"), 1));
        assert_ne!(Ball::new(s("1/3"), 0), Ball::new(s("2/3"), 0));
        assert_ne!(Ball::new(s("0"), 0), Ball::new(s("0"), 1));
        assert!(Ball::new(s("7"), 0).is_unit_ball());
    }

    #[test]
    fn children_partition() {
        let b = Ball::new(s("1/9"), 2);
        let kids = b.children();
        assert_eq!(kids.len(), 3);
        for (i, k) in kids.iter().enumerate() {
            assert!(b.contains(k.center()));
            for other in &kids[i + 1..] {
                assert_ne!(k, other);
            }
        }
    }
}
