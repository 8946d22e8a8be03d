//! Exact and certified numerics.

pub mod algebraic;
pub mod dyadic;
pub mod elementary;
pub mod field;
pub mod poly;
pub mod rational;
pub mod roots;

pub use dyadic::{ComplexInterval, Dyadic, Interval};
pub use poly::PolyQ;
pub use rational::{parse_rational, rat, Rational};
