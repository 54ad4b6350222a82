//! Multiplicative and additive structure of finite field extensions: `r`-primitive and
//! `k`-normal elements, freeness, character sums, existence sieves and witness searches.

// Polynomials carry an `Arc<Fq>` whose lazily filled caches do not take part in ordering.
#![allow(clippy::mutable_key_type)]

pub mod charsum;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod fqpoly;
pub mod intarith;
pub mod search;
pub mod sieve;
pub mod structure;

pub use error::{Error, Result};
