//! Rosen continued fractions over Hecke groups.

// Ring elements share a lock-guarded cache of λ powers, but Eq and Hash only see coefficients.
#![allow(clippy::mutable_key_type)]

pub mod cf;
pub mod enumerate;
pub mod error;
pub mod lab;
pub mod moebius;
pub mod real;
pub mod ring;
pub mod run;

pub use error::{Error, Result};
