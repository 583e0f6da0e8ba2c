//! Arity gap of finite functions: classifiers, extensions, order-preserving
//! functions and a brute-force verification harness.

pub mod boolfn;
pub mod error;
pub mod extend;
pub mod fnalg;
pub mod harness;
pub mod order;
pub mod rational;

pub use error::{Error, Result};
pub use fnalg::{arity_gap, gap_via_characterization, Carrier, Codomain, FiniteFunction, GapReport};
pub use rational::Rational;
