//! Monte Carlo statistics over sampled orbits.

pub mod cdf;
pub mod constants;
pub mod entropy;
pub mod legendre;
pub mod sampling;

pub use cdf::{bjw_check, lenstra_breakpoint, theta_cdf, BjwRow, Breakpoint, EmpiricalCdf};
pub use constants::{bjw_cdf, ConstantsTarget};
pub use entropy::{entropy_estimate, EntropyEstimate};
