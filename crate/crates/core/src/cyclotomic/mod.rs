//! Exact sums of p-power roots of unity, the value domain of every integral.

mod magnitude;
mod value;

pub use magnitude::{prime_power_floor, Enclosure, TrigContext};
pub use value::{CyclotomicValue, ValueRecord};
