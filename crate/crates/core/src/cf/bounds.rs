//! Two-sided error bounds and denominator growth for Rosen convergents, decided exactly.
//!
//! For x = u0/v0 and N_n = q_n·u0 − p_n·v0:
//! lower   1/(q_n(q_{n+1} + q_n)) ≤ |x − p_n/q_n|   ⇔  v0 ≤ |N_n|(q_{n+1} + q_n)
//! even    |x − p_n/q_n| ≤ 1/(q_n²(1 − λ/2))        ⇔  |N_n|·q_n·(2 − λ) ≤ 2·v0
//! odd     |x − p_n/q_n| ≤ 1/(q_n²(1/R − λ/2))      ⇔  Z ≥ 0 and Z² + (2−λ)Z − 1 ≥ 0,
//!         where Z = 1/Θ_n − 2 + 3λ/2 and R² + (2−λ)R − 1 = 0.

use super::{Expansion, Family};
use crate::error::{Error, Result};
use crate::ring::{LambdaInt, LambdaRational};
use serde::Serialize;

/// Which inequality failed at index n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BoundFailure {
    Lower { n: usize },
    Upper { n: usize },
    Ratio { n: usize },
    NonPositiveDenominator { n: usize },
}

/// Outcome of checking one expansion.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundReport {
    pub checked: usize,
    pub failures: Vec<BoundFailure>,
    /// Smallest q_{n+1}/q_n seen.
    pub min_ratio: f64,
}

/// Check every n ≥ 1 with x ≠ p_n/q_n. The lower bound needs q_{n+1}, so it stops one index
/// earlier than the upper bound. The ratio test asserts q_{n+1} > q_n for even k and
/// q_{n+1} > q_n/R for odd k, i.e. q_{n+1}² − (2−λ)q_{n+1}q_n − q_n² > 0.
pub fn check_denominator_bounds(e: &Expansion) -> Result<BoundReport> {
    let Family::Rosen(ring) = &e.family else {
        return Err(Error::InvalidConfig("the sandwich bounds concern Rosen expansions".into()));
    };
    let even = ring.k().is_even();
    let lam = ring.lambda();
    let two = ring.from_int(2);
    let two_minus_l = &two - &lam;
    let v0 = e.x0.den();
    let mut rep = BoundReport { min_ratio: f64::INFINITY, ..Default::default() };
    for n in 0..=e.len() {
        let q = &e.convergents[n].1;
        if q.sign()? <= 0 {
            rep.failures.push(BoundFailure::NonPositiveDenominator { n });
        }
        if n < e.len() {
            let q1 = &e.convergents[n + 1].1;
            rep.min_ratio = rep.min_ratio.min(q1.approx_f64() / q.approx_f64());
            let s = if even {
                (q1 - q).sign()?
            } else {
                (&(&(q1 * q1) - &(&two_minus_l * &(q1 * q))) - &(q * q)).sign()?
            };
            if n >= 1 && s <= 0 {
                rep.failures.push(BoundFailure::Ratio { n });
            }
        }
        if n == 0 {
            continue;
        }
        let big_n = e.error_numerator(n).abs();
        if big_n.is_zero() {
            continue;
        }
        rep.checked += 1;
        if n < e.len() {
            let q1 = &e.convergents[n + 1].1;
            if (&(&big_n * &(q1 + q)) - v0).sign()? < 0 {
                rep.failures.push(BoundFailure::Lower { n });
            }
        }
        if !upper_holds(&big_n, q, v0, even, &two_minus_l)? {
            rep.failures.push(BoundFailure::Upper { n });
        }
    }
    Ok(rep)
}

fn upper_holds(big_n: &LambdaInt, q: &LambdaInt, v0: &LambdaInt, even: bool, two_minus_l: &LambdaInt) -> Result<bool> {
    let ring = q.ring();
    if even {
        return Ok((&(v0 * &ring.from_int(2)) - &(&(big_n * q) * two_minus_l)).sign()? >= 0);
    }
    // Z = v0/(q|N|) − 2 + 3λ/2 = (2·v0 + q|N|(3λ − 4)) / (2·q|N|)
    let qn = q * big_n;
    let shift = &ring.lambda().mul_i64(3) - &ring.from_int(4);
    let z = LambdaRational::new(&v0.mul_i64(2) + &(&qn * &shift), qn.mul_i64(2))?;
    if z.sign()? < 0 {
        return Ok(false);
    }
    let f = z.mul(&z.add(&LambdaRational::from_elem(two_minus_l.clone()))?)?.sub(&LambdaRational::from_int(ring, 1))?;
    Ok(f.sign()? >= 0)
}
