//! Pooled Θ distributions, breakpoint detection and the regular-CF distribution check.

use super::constants::bjw_cdf;
use super::sampling::{sample_point, seed_bits};
use crate::cf::{Family, OrbitConfig, ThetaStream};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Fraction of failed samples above which a run is declared invalid.
pub const MAX_FAILURE_RATE: f64 = 1e-3;

/// Empirical distribution of pooled Θ_1..Θ_iters values.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalCdf {
    pub family: String,
    pub t_grid: Vec<f64>,
    /// Fraction of pooled values with Θ < t for each grid point.
    pub mass: Vec<f64>,
    /// Number of pooled Θ values.
    pub sample_count: u64,
    pub seeds: u64,
    pub failures: u64,
    pub max_theta: f64,
}

/// Evenly spaced grid step, 2·step, ..., up to `max` inclusive.
pub fn uniform_grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step).round() as usize;
    (1..=n).map(|i| i as f64 * step).collect()
}

/// Validate a grid: nonempty, positive, strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|t| !t.is_finite())
    {
        return Err(Error::InvalidConfig("grid must be nonempty, positive and strictly increasing".into()));
    }
    Ok(())
}

struct Partial {
    bins: Vec<u64>,
    values: u64,
    failures: u64,
    max_theta: f64,
}

impl Partial {
    fn empty(n: usize) -> Self {
        Partial { bins: vec![0; n + 1], values: 0, failures: 0, max_theta: 0.0 }
    }

    fn merge(mut self, o: Partial) -> Partial {
        for (a, b) in self.bins.iter_mut().zip(o.bins) {
            *a += b;
        }
        self.values += o.values;
        self.failures += o.failures;
        self.max_theta = self.max_theta.max(o.max_theta);
        self
    }
}

fn orbit_config(iters: usize) -> OrbitConfig {
    OrbitConfig { work_bits: if iters > 2000 { 1024 } else { 320 }, ..OrbitConfig::default() }
}

/// Θ_1..Θ_iters of one sampled seed.
pub fn sample_thetas(family: &Family, seed: u64, index: u64, iters: usize) -> Result<Vec<f64>> {
    let x = sample_point(family, seed, index, seed_bits(iters + 1));
    ThetaStream::new(family, &x, orbit_config(iters))?.take_f64(iters)
}

/// Pooled empirical distribution of Θ_1..Θ_iters over `samples` uniform seeds.
pub fn theta_cdf(family: &Family, samples: u64, iters: usize, seed: u64, t_grid: &[f64]) -> Result<EmpiricalCdf> {
    if samples == 0 || iters == 0 {
        return Err(Error::InvalidConfig("samples and iterations must be positive".into()));
    }
    check_grid(t_grid)?;
    let n = t_grid.len();
    let total = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut p = Partial::empty(n);
            match sample_thetas(family, seed, i, iters) {
                Ok(v) => {
                    for th in v {
                        let idx = t_grid.partition_point(|&t| t <= th);
                        p.bins[idx] += 1;
                        p.values += 1;
                        p.max_theta = p.max_theta.max(th);
                    }
                }
                Err(_) => p.failures += 1,
            }
            p
        })
        .reduce(|| Partial::empty(n), Partial::merge);
    if total.failures as f64 > MAX_FAILURE_RATE * samples as f64 {
        return Err(Error::PrecisionCap { cap: 0, context: "too many failed expansions in a Θ run" });
    }
    if total.values == 0 {
        return Err(Error::InvalidConfig("no Θ values produced".into()));
    }
    let mut cum = 0u64;
    let mass = total.bins[..n]
        .iter()
        .map(|c| {
            cum += c;
            cum as f64 / total.values as f64
        })
        .collect();
    Ok(EmpiricalCdf {
        family: family.tag(),
        t_grid: t_grid.to_vec(),
        mass,
        sample_count: total.values,
        seeds: samples,
        failures: total.failures,
        max_theta: total.max_theta,
    })
}

/// Result of a breakpoint search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Breakpoint {
    pub t_star: f64,
    pub slope: f64,
}

/// Width of the trailing window whose mean density is compared with the fitted slope.
pub const BREAK_WINDOW: f64 = 0.04;

/// Binomial standard deviations a density deficit must exceed before it counts.
pub const BREAK_Z: f64 = 4.0;

/// Default relative tolerance of the breakpoint search.
pub const BREAK_TOL: f64 = 1e-2;

/// Grow the window [0, t] rightward while the distribution stays linear through the origin.
///
/// The window is split into a prefix [0, t − w], fitted by least squares through the origin,
/// and a trailing piece [t − w, t] of width w = `BREAK_WINDOW`. The residual is the relative
/// deficit of the mean density on the trailing piece against the fitted slope. The window is
/// rejected once that deficit exceeds `tol` and `BREAK_Z` binomial standard deviations of the
/// pooled count. `t_star` is the centre of the trailing piece of the last accepted window.
pub fn lenstra_breakpoint(cdf: &EmpiricalCdf, tol: f64) -> Result<Breakpoint> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    let mut t = vec![0.0];
    t.extend_from_slice(&cdf.t_grid);
    let mut m = vec![0.0];
    m.extend_from_slice(&cdf.mass);
    let n = cdf.sample_count.max(1) as f64;
    let (mut stm, mut stt) = (0.0, 0.0);
    let mut i = 0;
    let mut best = None;
    for j in 1..t.len() {
        if t[j] < 2.0 * BREAK_WINDOW {
            continue;
        }
        while t[i + 1] <= t[j] - BREAK_WINDOW + 1e-12 {
            i += 1;
            stm += t[i] * m[i];
            stt += t[i] * t[i];
        }
        if stt == 0.0 || stm <= 0.0 {
            return Err(Error::NoLinearRegime);
        }
        let s = stm / stt;
        let dt = t[j] - t[i];
        let p = (m[j] - m[i]).clamp(0.0, 1.0);
        let density = (m[j] - m[i]) / dt;
        let sd = (p * (1.0 - p) / n).sqrt() / dt;
        if s - density > (BREAK_Z * sd).max(tol * s) {
            break;
        }
        best = Some(Breakpoint { t_star: (t[i] + t[j]) / 2.0, slope: s });
    }
    best.ok_or(Error::NoLinearRegime)
}

/// One row of the regular-CF distribution table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BjwRow {
    pub t: f64,
    pub empirical: f64,
    pub f: f64,
}

/// Empirical Θ distribution of the regular continued fraction against its closed form.
pub fn bjw_check(samples: u64, iters: usize, seed: u64, t_grid: &[f64]) -> Result<Vec<BjwRow>> {
    let cdf = theta_cdf(&Family::regular(), samples, iters, seed, t_grid)?;
    Ok(cdf.t_grid.iter().zip(&cdf.mass).map(|(&t, &e)| BjwRow { t, empirical: e, f: bjw_cdf(t) }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> EmpiricalCdf {
        let t_grid = uniform_grid(0.005, 1.0);
        let mass = t_grid.iter().map(|&t| f(t)).collect();
        EmpiricalCdf {
            family: "synthetic".into(),
            t_grid,
            mass,
            sample_count: 1 << 40,
            seeds: 1,
            failures: 0,
            max_theta: 1.0,
        }
    }

    #[test]
    fn synthetic_kink() {
        let c = synthetic(|t| if t <= 0.4 { 2.0 * t } else { 0.8 + 0.2 * (t - 0.4) });
        let b = lenstra_breakpoint(&c, BREAK_TOL).unwrap();
        assert!((b.t_star - 0.4).abs() <= BREAK_WINDOW / 2.0 + 1e-9, "{b:?}");
        assert!((b.slope - 2.0).abs() < 1e-9);
    }

    #[test]
    fn smooth_onset() {
        // Linear up to 0.45, then the density falls off linearly.
        let c = synthetic(|t| if t <= 0.45 { 1.5 * t } else { 1.5 * t - 3.0 * (t - 0.45).powi(2) });
        let b = lenstra_breakpoint(&c, BREAK_TOL).unwrap();
        assert!((b.t_star - 0.45).abs() <= 0.015, "{b:?}");
    }

    #[test]
    fn pure_line_runs_to_the_end() {
        let c = synthetic(|t| 0.9 * t);
        let b = lenstra_breakpoint(&c, BREAK_TOL).unwrap();
        assert!((b.t_star - (1.0 - BREAK_WINDOW / 2.0)).abs() < 1e-9, "{b:?}");
    }

    #[test]
    fn no_linear_part() {
        let c = synthetic(|t| t.sqrt().min(1.0));
        assert_eq!(lenstra_breakpoint(&c, BREAK_TOL), Err(Error::NoLinearRegime));
    }

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[]).is_err());
        assert!(check_grid(&[0.2, 0.1]).is_err());
        assert!(check_grid(&[0.0, 0.1]).is_err());
        assert_eq!(uniform_grid(0.25, 1.0), vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn small_run_is_deterministic_and_monotone() {
        let f = Family::rosen(4).unwrap();
        let g = uniform_grid(0.05, 1.0);
        let a = theta_cdf(&f, 20, 50, 3, &g).unwrap();
        let b = theta_cdf(&f, 20, 50, 3, &g).unwrap();
        assert_eq!(a.mass, b.mass);
        assert_eq!(a.sample_count, 1000);
        assert!(a.mass.windows(2).all(|w| w[0] <= w[1]));
        assert!(theta_cdf(&f, 0, 50, 3, &g).is_err());
    }
}
