//! Exact arithmetic for regular self-maps of affine space: degree gaps,
//! behaviour at infinity, local multiplicities, height and place machinery,
//! and the orbit-level experiments built on top.
//!
//! Everything is exact: coefficients live in Q or a prime field, heights
//! and local terms are kept as formal combinations of logarithms of primes,
//! and numeric evaluation happens only at the final comparison step, with
//! controlled precision.

pub mod cli;
pub mod curve;
pub mod endo;
pub mod error;
pub mod factor;
pub mod dml;
pub mod heights;
pub mod intutil;
pub mod job;
pub mod linalg;
pub mod localalg;
pub mod parse;
pub mod point;
pub mod poly;
pub mod scalar;
pub mod weil;

pub use cli::cli_main;
pub use error::{Error, Result};
