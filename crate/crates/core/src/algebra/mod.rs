//! Exact arithmetic: big rationals, rational functions in the equivariant
//! parameter `t`, graded rings given by a monomial basis, and classes with
//! formal nilpotent cotangent variables adjoined.

mod class;
mod local;
mod poly;
mod ratfunc;
mod rational;
mod ring;

pub use class::RingClass;
pub use local::{p_eval, LocalClass};
pub use poly::Poly;
pub use ratfunc::RationalFunctionT;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use ring::{GradedRing, TableEntry};
