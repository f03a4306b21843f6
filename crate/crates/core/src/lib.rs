//! Exact evaluation of p-adic oscillatory integrals `∫ χ(f(x)) dx` over balls
//! in `Q_p`, and certified checks of van der Corput type bounds on them.
//!
//! * [`padic`]: valuations, characters, Taylor shifts and dominance data.
//! * [`cyclotomic`]: exact values in `Z[ζ_{p^M}][1/p]` with certified magnitudes.
//! * [`integrator`]: a brute-force oracle and a recursive evaluator built on
//!   vanishing, rescaling and coset-splitting rules.
//! * [`bounds`]: the three bounds and PASS/FAIL verdicts.
//! * [`harness`]: deterministic randomized campaigns and benchmarks.

pub mod bounds;
pub mod cyclotomic;
pub mod error;
pub mod harness;
pub mod integrator;
pub mod padic;

pub use error::{Error, Result};
