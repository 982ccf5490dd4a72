//! Exact rational arithmetic, interval sets with exact Lebesgue measure, and
//! canonical witness points.

mod enclosure;
mod interval;
mod quadratic;
mod rational;
mod set;
mod witness;

pub use enclosure::{inv_sqrt_enclosure, sqrt_enclosure, Enclosure};
pub use interval::Interval;
pub use quadratic::QuadraticIrrational;
pub use rational::Rational;
pub use set::{IntervalSet, SetOp};
pub use witness::{
    irrational_in, simplest_rational_avoiding, simplest_rational_in, simplicity_cmp,
};
