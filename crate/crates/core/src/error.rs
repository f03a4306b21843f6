use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("malformed rational `{token}`")]
    Parse { token: String },

    #[error("angle denominator {0} is not a power of the prime")]
    NotPrimePower(String),

    #[error("root-of-unity order {p}^{order_exp} exceeds the supported range")]
    OrderOverflow { p: u64, order_exp: u64 },

    #[error("oracle too coarse: modulus {p}^{required_exp} exceeds the cap of {cap} terms; use the recursive method")]
    OracleTooLarge { p: u64, required_exp: u32, cap: u64 },

    #[error("recursion depth cap {0} exceeded")]
    DepthExceeded(u32),

    #[error("termination measure did not decrease ({parent} -> {child})")]
    TerminationViolated { parent: i64, child: i64 },

    #[error("polynomial has no leading coefficient")]
    NoLeadingCoefficient,

    #[error("the dominant-index bound is stated on the unit ball only")]
    MainBoundNeedsUnitBall,

    #[error("oracle and recursive evaluator disagree")]
    OracleMismatch,

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
}

impl Error {
    /// True for errors caused by a configurable size limit rather than a
    /// defect or bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::OracleTooLarge { .. } | Error::DepthExceeded(_) | Error::OrderOverflow { .. }
        )
    }
}
