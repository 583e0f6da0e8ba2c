//! Brute-force oracles, enumeration and sampling of function spaces, sweeps,
//! file formats and the command line.

pub mod cli;
pub mod enumerate;
pub mod fixtures;
pub mod format;
pub mod oracle;
pub mod rng;
pub mod sweep;
