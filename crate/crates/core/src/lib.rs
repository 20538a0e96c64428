//! Surrogate-assisted multi-objective optimization.
//!
//! The crate combines an elitist genetic optimizer ([`moea`]), feed-forward
//! neural surrogates with adaptive architecture search ([`surrogate`],
//! [`adapt`]), approximation-quality indicators ([`indicators`]), benchmark
//! and application cost functions ([`problems`]), and a CSV-backed store of
//! evaluated designs ([`databank`]).

pub mod adapt;
pub mod databank;
pub mod error;
pub mod indicators;
pub mod moea;
pub mod problems;
pub mod surrogate;

pub use error::{Error, Result};
