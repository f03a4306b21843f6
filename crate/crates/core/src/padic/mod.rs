//! Exact arithmetic on the rational points of `Q_p`.
//!
//! Every p-adic quantity here is a rational number together with a fixed
//! prime; norms are compared through integer valuations only.

mod angle;
mod ball;
mod poly;
mod prime;
mod scalar;

pub use angle::{character_angle, Angle};
pub use ball::Ball;
pub use poly::{DominanceProfile, PhasePolynomial};
pub use prime::PrimeContext;
pub use scalar::{fractional_part, norm_exp, parse_rational, valuation, PAdicScalar, Valuation};
