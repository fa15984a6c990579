use super::{Family, Orbit, OrbitConfig, RosenDigit};
use crate::error::{Error, Result};
use crate::real::RealEnclosure;
use crate::ring::{LambdaInt, LambdaRational};

/// Digits and exact convergents of a seed.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub family: Family,
    pub x0: LambdaRational,
    pub digits: Vec<RosenDigit>,
    /// (p_n, q_n) for n = 0..=digits.len().
    pub convergents: Vec<(LambdaInt, LambdaInt)>,
    /// The orbit reached 0 exactly.
    pub terminated: bool,
    /// Expansion stopped early at the precision cap.
    pub truncated: bool,
}

/// Expand `x0` for at most `n_max` digits.
pub fn expand(family: &Family, x0: &LambdaRational, n_max: usize) -> Result<Expansion> {
    let mut orbit = Orbit::new(family, x0, OrbitConfig::default())?;
    let mut digits = Vec::new();
    let mut truncated = false;
    while digits.len() < n_max {
        match orbit.next_step() {
            Ok(Some(s)) => digits.push(s.digit),
            Ok(None) => break,
            Err(Error::PrecisionCap { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let terminated = orbit.is_terminated();
    let convergents = family.convergents(&digits);
    Ok(Expansion { family: family.clone(), x0: x0.clone(), digits, convergents, terminated, truncated })
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `q_n·x0 − p_n` scaled by the seed denominator: q_n·u0 − p_n·v0.
    pub fn error_numerator(&self, n: usize) -> LambdaInt {
        let (p, q) = &self.convergents[n];
        &(q * self.x0.num()) - &(p * self.x0.den())
    }

    /// Θ_n = q_n²|x0 − p_n/q_n| = q_n·|q_n u0 − p_n v0| / v0 as an enclosure with `rel_bits`
    /// relative bits.
    pub fn theta(&self, n: usize, rel_bits: u64) -> Result<RealEnclosure> {
        let num = self.error_numerator(n);
        if num.is_zero() {
            return Ok(RealEnclosure::from_int(0, rel_bits));
        }
        let q = &self.convergents[n].1;
        let top = (q * &num).abs().enclose_rel(rel_bits + 4)?;
        let den = self.x0.den().enclose_rel(rel_bits + 4)?;
        Ok(top.div(&den, rel_bits + 8).expect("positive denominator"))
    }

    /// Digits as `+3,-2`.
    pub fn digit_string(&self) -> String {
        self.digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Convergents n ≥ 1 as `1/3, 2/5`.
    pub fn convergent_string(&self) -> String {
        self.convergents[1..]
            .iter()
            .map(|(p, q)| crate::moebius::ParabolicPoint::from_pair(p.clone(), q.clone()).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Approximation coefficients Θ_1..Θ_len of an expansion.
#[derive(Clone, Debug)]
pub struct ThetaSeries {
    pub family: String,
    pub x0: LambdaRational,
    pub thetas: Vec<f64>,
}

/// Θ_n for n = 1..=len, computed directly from the exact convergents.
pub fn theta_series(e: &Expansion) -> Result<ThetaSeries> {
    let thetas = (1..=e.len()).map(|n| e.theta(n, 64).map(|t| t.to_f64())).collect::<Result<Vec<_>>>()?;
    Ok(ThetaSeries { family: e.family.tag(), x0: e.x0.clone(), thetas })
}
