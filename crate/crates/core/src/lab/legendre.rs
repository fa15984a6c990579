//! Search for solutions of |x − p/q| < c/q² that are not convergents of x.

use super::sampling::{sample_point, sample_seed};
use crate::cf::{expand, Family};
use crate::enumerate::{points_near, solution_sign, DEFAULT_MAX_NODES};
use crate::error::{Error, Result};
use crate::moebius::ParabolicPoint;
use crate::ring::{LambdaInt, LambdaRational};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;

/// Bits of the dyadic seeds used by the scan.
pub const SCAN_SEED_BITS: u64 = 256;

/// Witnesses kept per grid value.
pub const MAX_WITNESSES: usize = 16;

/// How sample points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeedMode {
    /// Uniform on [−λ/2, λ/2).
    Uniform,
    /// x = 1/(M·λ + w) with w uniform and first digit (+1, M), M uniform in [m_min, max_digit].
    LeadingDigit { max_digit: u64 },
}

/// A non-convergent solution, with everything needed to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct LegendreWitness {
    pub sample: u64,
    #[serde(skip)]
    pub x: LambdaRational,
    pub x_exact: String,
    pub x_approx: f64,
    #[serde(skip)]
    pub p: LambdaInt,
    #[serde(skip)]
    pub q: LambdaInt,
    pub point: String,
    pub q_approx: f64,
    /// q²·|x − p/q|.
    pub coefficient: f64,
}

/// Violations at one grid value c.
#[derive(Clone, Debug, Serialize)]
pub struct LegendreRow {
    pub c: f64,
    pub violations: u64,
    pub witnesses: Vec<LegendreWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LegendreScanReport {
    pub family: String,
    pub c_grid: Vec<f64>,
    pub rows: Vec<LegendreRow>,
    pub q_bound: u64,
    pub x_samples: u64,
    pub seed: u64,
    pub mode: SeedMode,
    /// Samples rejected for lying outside the domain (leading-digit mode only).
    pub rejected_samples: u64,
    /// Candidate pairs whose strict inequality could not be decided.
    pub undecided: u64,
    /// Every stored witness was re-derived from scratch and confirmed.
    pub replayed: bool,
}

/// Smallest M with M·λ − λ/2 ≥ 2/λ, so every x = 1/(Mλ + w) lies in the domain.
fn min_leading_digit(lambda: f64) -> u64 {
    (2.0 / (lambda * lambda) + 0.5).ceil().max(1.0) as u64
}

/// Sample number `index` of a scan, or None if it falls outside the domain.
pub fn scan_point(family: &Family, seed: u64, index: u64, mode: SeedMode) -> Result<Option<LambdaRational>> {
    match mode {
        SeedMode::Uniform => Ok(Some(sample_point(family, seed, index, SCAN_SEED_BITS))),
        SeedMode::LeadingDigit { max_digit } => {
            let ring = family.ring();
            let m_min = min_leading_digit(ring.lambda_f64());
            if max_digit < m_min {
                return Err(Error::InvalidConfig(format!("leading digit bound must be at least {m_min}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed ^ 0x4c45_4744, index));
            let m = m_min + rng.next_u64() % (max_digit - m_min + 1);
            let w = sample_point(family, seed, index, SCAN_SEED_BITS);
            let a = LambdaRational::from_elem(family.digit_value(m));
            let x = a.add(&w)?.recip()?;
            Ok(if family.in_domain(&x)? { Some(x) } else { None })
        }
    }
}

/// Normalized convergents p_n/q_n, n ≥ 0, of x with q_n up to beyond `q_bound`.
pub fn convergent_set(family: &Family, x: &LambdaRational, q_bound: u64) -> Result<HashSet<ParabolicPoint>> {
    let mut n = 64;
    loop {
        let e = expand(family, x, n)?;
        let last = e.convergents.last().expect("n = 0 convergent").1.approx_f64();
        if e.terminated || last > q_bound as f64 * 2.0 + 2.0 {
            return Ok(e.convergents.into_iter().map(|(p, q)| ParabolicPoint::from_pair(p, q)).collect());
        }
        if e.truncated {
            return Err(Error::PrecisionCap { cap: 0, context: "convergent list for a scan point" });
        }
        n *= 2;
    }
}

/// Decide whether (x, p/q) is a violation at c: a solution that is not a convergent.
pub fn is_violation(
    family: &Family,
    x: &LambdaRational,
    p: &LambdaInt,
    q: &LambdaInt,
    c: &LambdaRational,
    q_bound: u64,
) -> Result<bool> {
    if solution_sign(x, p, q, c)? <= 0 {
        return Ok(false);
    }
    let conv = convergent_set(family, x, q_bound)?;
    Ok(!conv.contains(&ParabolicPoint::from_pair(p.clone(), q.clone())))
}

struct SampleOutcome {
    rejected: bool,
    undecided: u64,
    /// Per grid value: violations found at this sample.
    hits: Vec<Vec<LegendreWitness>>,
}

fn scan_one(
    family: &Family,
    c_grid: &[LambdaRational],
    q_bound: u64,
    seed: u64,
    index: u64,
    mode: SeedMode,
) -> Result<SampleOutcome> {
    let mut out = SampleOutcome { rejected: false, undecided: 0, hits: vec![Vec::new(); c_grid.len()] };
    let Some(x) = scan_point(family, seed, index, mode)? else {
        out.rejected = true;
        return Ok(out);
    };
    let ring = family.ring();
    let c_max = c_grid.iter().map(|c| c.to_f64()).fold(0.0, f64::max);
    let near = points_near(ring, &x, c_max, q_bound as f64, DEFAULT_MAX_NODES)?;
    if !near.complete {
        return Err(Error::Budget("candidate search exceeded its node budget".into()));
    }
    let conv = convergent_set(family, &x, q_bound)?;
    let bound = LambdaRational::from_int(ring, q_bound);
    for e in &near.points {
        if LambdaRational::from_elem(e.c_abs.clone()).compare(&bound)? == std::cmp::Ordering::Greater {
            continue;
        }
        if conv.contains(&e.point) {
            continue;
        }
        for (i, c) in c_grid.iter().enumerate() {
            match solution_sign(&x, e.p(), &e.c_abs, c) {
                Ok(1) => out.hits[i].push(LegendreWitness {
                    sample: index,
                    x: x.clone(),
                    x_exact: x.to_string(),
                    x_approx: x.to_f64(),
                    p: e.p().clone(),
                    q: e.c_abs.clone(),
                    point: e.point.to_string(),
                    q_approx: e.c_abs.approx_f64(),
                    coefficient: {
                        let qf = e.c_abs.approx_f64();
                        (x.to_f64() - e.point.approx_f64()).abs() * qf * qf
                    },
                }),
                Ok(_) => {}
                Err(Error::PrecisionCap { .. }) => out.undecided += 1,
                Err(err) => return Err(err),
            }
        }
    }
    Ok(out)
}

/// Scan `x_samples` points for non-convergent solutions with q ≤ q_bound at each c.
pub fn legendre_scan(
    family: &Family,
    c_grid: &[LambdaRational],
    q_bound: u64,
    x_samples: u64,
    seed: u64,
    mode: SeedMode,
) -> Result<LegendreScanReport> {
    if c_grid.is_empty() || q_bound == 0 || x_samples == 0 {
        return Err(Error::InvalidConfig("c grid, q bound and sample count must be nonempty/positive".into()));
    }
    for c in c_grid {
        if c.sign()? < 0 {
            return Err(Error::InvalidConfig("c values must be nonnegative".into()));
        }
    }
    let outcomes = (0..x_samples)
        .into_par_iter()
        .map(|i| scan_one(family, c_grid, q_bound, seed, i, mode))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<LegendreRow> =
        c_grid.iter().map(|c| LegendreRow { c: c.to_f64(), violations: 0, witnesses: Vec::new() }).collect();
    let (mut rejected, mut undecided) = (0, 0);
    for o in outcomes {
        rejected += o.rejected as u64;
        undecided += o.undecided;
        for (row, hits) in rows.iter_mut().zip(o.hits) {
            row.violations += hits.len() as u64;
            for h in hits {
                if row.witnesses.len() < MAX_WITNESSES {
                    row.witnesses.push(h);
                }
            }
        }
    }
    let mut report = LegendreScanReport {
        family: family.tag(),
        c_grid: c_grid.iter().map(|c| c.to_f64()).collect(),
        rows,
        q_bound,
        x_samples,
        seed,
        mode,
        rejected_samples: rejected,
        undecided,
        replayed: false,
    };
    report.replayed = replay(family, c_grid, &report)?;
    Ok(report)
}

/// Re-derive every stored witness: recompute the expansion of x and the strict inequality.
pub fn replay(family: &Family, c_grid: &[LambdaRational], report: &LegendreScanReport) -> Result<bool> {
    for (row, c) in report.rows.iter().zip(c_grid) {
        for w in &row.witnesses {
            if !is_violation(family, &w.x, &w.p, &w.q, c, report.q_bound)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::constants::ConstantsTarget;

    fn grid(f: &Family, cs: &[f64]) -> Vec<LambdaRational> {
        cs.iter().map(|&c| LambdaRational::from_f64(f.ring(), c).unwrap()).collect()
    }

    #[test]
    fn leading_digit_seeds_start_with_that_digit() {
        let f = Family::rosen(4).unwrap();
        for i in 0..20 {
            if let Some(x) = scan_point(&f, 1, i, SeedMode::LeadingDigit { max_digit: 6 }).unwrap() {
                let e = expand(&f, &x, 3).unwrap();
                assert_eq!(e.digits[0].epsilon, 1);
                assert!(e.digits[0].b >= 2 && e.digits[0].b <= 6, "{}", e.digits[0]);
            }
        }
    }

    #[test]
    fn zero_c_is_vacuous() {
        let f = Family::rosen(3).unwrap();
        let r = legendre_scan(&f, &grid(&f, &[0.0]), 50, 20, 1, SeedMode::Uniform).unwrap();
        assert_eq!(r.rows[0].violations, 0);
    }

    #[test]
    fn below_and_above_the_constant() {
        for k in [3, 4] {
            let f = Family::rosen(k).unwrap();
            let le = ConstantsTarget::rosen(k).lenstra_target;
            let cs = grid(&f, &[0.5 * le, 0.9 * le, 1.3 * le]);
            let r = legendre_scan(&f, &cs, 60, 150, 3, SeedMode::LeadingDigit { max_digit: 8 }).unwrap();
            assert_eq!(r.rows[0].violations, 0, "k={k}");
            assert_eq!(r.rows[1].violations, 0, "k={k}");
            assert!(r.rows[2].violations > 0, "k={k}");
            assert!(r.replayed);
            assert!(r.rows.windows(2).all(|w| w[0].violations <= w[1].violations));
            for w in &r.rows[2].witnesses {
                assert!(w.coefficient < 1.3 * le && w.coefficient >= 0.9 * le, "{}", w.coefficient);
            }
        }
    }
}
