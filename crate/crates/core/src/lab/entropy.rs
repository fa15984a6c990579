//! Entropy estimates from the growth rate of convergent denominators.

use super::cdf::MAX_FAILURE_RATE;
use super::sampling::{sample_point, seed_bits};
use crate::cf::{Family, Orbit, OrbitConfig};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Mean of (2/n)·ln q_n over sampled seeds.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    pub family: String,
    pub n: usize,
    pub h_hat: f64,
    pub stderr: f64,
    /// Per-sample values in sample order; failed samples are omitted.
    pub values: Vec<f64>,
    pub failures: u64,
}

/// (2/n)·ln q_n for one seed, or an error if the orbit ends or hits the precision cap first.
pub fn sample_entropy(family: &Family, seed: u64, index: u64, n: usize) -> Result<f64> {
    let x = sample_point(family, seed, index, seed_bits(n));
    let cfg =
        OrbitConfig { work_bits: if n > 2000 { 1024 } else { 320 }, track_convergents: true, ..OrbitConfig::default() };
    let mut orbit = Orbit::new(family, &x, cfg)?;
    for _ in 0..n {
        if orbit.next_step()?.is_none() {
            return Err(Error::Budget(format!("orbit terminated before {n} steps")));
        }
    }
    let m = orbit.convergent_matrix().expect("convergents are tracked");
    let q = m[3].enclose_rel(64)?;
    Ok(2.0 * q.ln_f64() / n as f64)
}

/// Estimate the entropy with its standard error across `samples` seeds.
pub fn entropy_estimate(family: &Family, samples: u64, n: usize, seed: u64) -> Result<EntropyEstimate> {
    if samples == 0 || n == 0 {
        return Err(Error::InvalidConfig("samples and iterations must be positive".into()));
    }
    let results: Vec<Result<f64>> = (0..samples).into_par_iter().map(|i| sample_entropy(family, seed, i, n)).collect();
    let values: Vec<f64> = results.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let failures = samples - values.len() as u64;
    if failures as f64 > MAX_FAILURE_RATE * samples as f64 || values.is_empty() {
        return Err(Error::PrecisionCap { cap: 0, context: "too many failed expansions in an entropy run" });
    }
    let len = values.len() as f64;
    let h_hat = values.iter().sum::<f64>() / len;
    let stderr = if values.len() > 1 {
        (values.iter().map(|v| (v - h_hat).powi(2)).sum::<f64>() / (len - 1.0) / len).sqrt()
    } else {
        f64::NAN
    };
    Ok(EntropyEstimate { family: family.tag(), n, h_hat, stderr, values, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::constants::ConstantsTarget;

    #[test]
    fn regular_entropy_rough() {
        let e = entropy_estimate(&Family::regular(), 24, 400, 1).unwrap();
        let target = ConstantsTarget::for_family(&Family::regular()).unwrap().entropy_target;
        assert_eq!(e.values.len(), 24);
        assert!((e.h_hat - target).abs() < 5.0 * e.stderr + 0.05, "{} vs {target}", e.h_hat);
    }

    #[test]
    fn deterministic() {
        let f = Family::rosen(5).unwrap();
        let a = entropy_estimate(&f, 4, 100, 9).unwrap();
        let b = entropy_estimate(&f, 4, 100, 9).unwrap();
        assert_eq!(a.values, b.values);
        assert!(entropy_estimate(&f, 0, 100, 9).is_err());
    }

    #[test]
    fn matches_exact_convergents() {
        let f = Family::rosen(4).unwrap();
        let x = sample_point(&f, 3, 0, seed_bits(60));
        let e = crate::cf::expand(&f, &x, 60).unwrap();
        let q = e.convergents[60].1.enclose_rel(64).unwrap();
        let direct = 2.0 * q.ln_f64() / 60.0;
        assert!((sample_entropy(&f, 3, 0, 60).unwrap() - direct).abs() < 1e-12);
    }
}
