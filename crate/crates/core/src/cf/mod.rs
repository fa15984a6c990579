//! Digit maps (Rosen λ-nearest, α-expansions, Gauss), exact orbits and approximation coefficients.

mod bounds;
mod expansion;
mod orbit;

pub use bounds::{check_denominator_bounds, BoundFailure, BoundReport};
pub use expansion::{expand, theta_series, Expansion, ThetaSeries};
pub use orbit::{Orbit, OrbitConfig, OrbitStep, ThetaStream};

use crate::error::{Error, Result};
use crate::real::RealEnclosure;
use crate::ring::{make_ring, HeckeIndex, LambdaInt, LambdaRational, LambdaRing};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::cmp::Ordering;
use std::fmt;

/// One digit (ε, b); the digit value is a = b·L with L = λ for Rosen maps and L = 1 for α-maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RosenDigit {
    pub epsilon: i8,
    pub b: u64,
}

impl fmt::Display for RosenDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.epsilon > 0 { '+' } else { '-' }, self.b)
    }
}

/// A continued-fraction map: the λₖ-nearest Rosen map or the α-map with rational α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Rosen(LambdaRing),
    Alpha { ring: LambdaRing, num: u64, den: u64 },
}

/// Interval constants of a family at a working precision.
#[derive(Clone, Debug)]
pub(crate) struct FamilyConsts {
    prec: u64,
    /// Digit unit L.
    l: RealEnclosure,
    /// Offset θ: digit b covers w ∈ [bL − θ, bL − θ + L).
    theta: RealEnclosure,
    unit_is_one: bool,
}

impl Family {
    pub fn rosen(k: u32) -> Result<Self> {
        Ok(Family::Rosen(make_ring(HeckeIndex::new(k)?)))
    }

    /// α-map for α = num/den ∈ (0, 1].
    pub fn alpha(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidConfig(format!("alpha = {num}/{den} must lie in (0, 1]")));
        }
        let g = num.gcd(&den);
        let ring = make_ring(HeckeIndex::new(3)?);
        Ok(Family::Alpha { ring, num: num / g, den: den / g })
    }

    /// Parse α from a decimal or fraction string.
    pub fn alpha_from_str(s: &str) -> Result<Self> {
        let ring = make_ring(HeckeIndex::new(3)?);
        let q = LambdaRational::parse(&ring, s)?;
        let n = q.num().as_integer().and_then(|v| v.to_u64());
        let d = q.den().as_integer().and_then(|v| v.to_u64());
        match (n, d) {
            (Some(n), Some(d)) => Self::alpha(n, d),
            _ => Err(Error::InvalidConfig(format!("alpha {s:?} must be a rational in (0, 1]"))),
        }
    }

    /// The regular continued fraction (Gauss map), α = 1.
    pub fn regular() -> Self {
        Self::alpha(1, 1).unwrap()
    }

    pub fn ring(&self) -> &LambdaRing {
        match self {
            Family::Rosen(r) => r,
            Family::Alpha { ring, .. } => ring,
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, Family::Alpha { num: 1, den: 1, .. })
    }

    /// Short tag such as `rosen(k=4)`, `regular` or `alpha(1/2)`.
    pub fn tag(&self) -> String {
        match self {
            Family::Rosen(r) => format!("rosen(k={})", r.k().value()),
            Family::Alpha { num: 1, den: 1, .. } => "regular".to_string(),
            Family::Alpha { num, den, .. } => format!("alpha({num}/{den})"),
        }
    }

    /// Domain [lo, hi).
    pub fn domain(&self) -> (LambdaRational, LambdaRational) {
        let r = self.ring();
        match self {
            Family::Rosen(_) => {
                let hi = LambdaRational::new(r.lambda(), r.from_int(2)).unwrap();
                (hi.neg(), hi)
            }
            Family::Alpha { num, den, .. } => {
                let lo = LambdaRational::from_ratio(r, BigInt::from(*num) - BigInt::from(*den), BigInt::from(*den));
                let hi = LambdaRational::from_ratio(r, BigInt::from(*num), BigInt::from(*den));
                (lo.unwrap(), hi.unwrap())
            }
        }
    }

    pub fn in_domain(&self, x: &LambdaRational) -> Result<bool> {
        let (lo, hi) = self.domain();
        Ok(x.compare(&lo)? != Ordering::Less && x.compare(&hi)? == Ordering::Less)
    }

    /// Digit value a = b·L in the ring.
    pub fn digit_value(&self, b: u64) -> LambdaInt {
        match self {
            Family::Rosen(r) => r.lambda().mul_int(&BigInt::from(b)),
            Family::Alpha { ring, .. } => ring.from_int(b),
        }
    }

    /// x·a for the digit value a = b·L.
    pub(crate) fn mul_digit(&self, x: &LambdaInt, b: u64) -> LambdaInt {
        let bb = BigInt::from(b);
        match self {
            Family::Rosen(_) => x.mul_lambda().mul_int(&bb),
            Family::Alpha { .. } => x.mul_int(&bb),
        }
    }

    /// Lower edge of digit j written as N_j / D with D a positive integer.
    fn edge(&self, j: u64) -> (LambdaInt, BigInt) {
        match self {
            Family::Rosen(r) => (r.lambda().mul_int(&(BigInt::from(j) * 2 - 1)), BigInt::from(2)),
            Family::Alpha { ring, num, den } => {
                let n = BigInt::from(*den) * (BigInt::from(j) - 1) + BigInt::from(*num);
                (ring.from_bigint(n), BigInt::from(*den))
            }
        }
    }

    pub(crate) fn consts(&self, prec: u64) -> FamilyConsts {
        match self {
            Family::Rosen(r) => {
                let l = r.lambda().enclose(prec + 8).with_precision(prec);
                let theta = l.mul_pow2(-1);
                FamilyConsts { prec, l, theta, unit_is_one: r.degree() == 1 }
            }
            Family::Alpha { num, den, .. } => {
                let l = RealEnclosure::from_int(1, prec);
                let n = RealEnclosure::from_int(*den - *num, prec);
                let d = RealEnclosure::from_int(*den, prec);
                FamilyConsts { prec, l, theta: n.div(&d, prec).unwrap(), unit_is_one: true }
            }
        }
    }

    /// Digit from an enclosure of the current point, or `None` if the enclosure does not
    /// determine it. Returns the enclosure of the next point as well.
    pub(crate) fn interval_digit(&self, x: &RealEnclosure, c: &FamilyConsts) -> Option<(RosenDigit, RealEnclosure)> {
        let p = c.prec;
        let eps = match x.sign()? {
            0 => return None,
            s => s,
        };
        let w = x.abs().recip(p)?;
        let y = if c.unit_is_one { w.add(&c.theta, p) } else { w.add(&c.theta, p).div(&c.l, p)? };
        let (f0, f1) = y.floor_bounds();
        if f0 != f1 {
            return None;
        }
        let b = f0.to_u64().filter(|&b| b >= 1)?;
        let next = w.sub(&c.l.mul_int(&BigInt::from(b), p), p);
        Some((RosenDigit { epsilon: eps as i8, b }, next))
    }

    /// Exact digit of the point u/v (v > 0, u ≠ 0), using a numerical guess checked against
    /// exact edge comparisons; the left edge of each digit interval belongs to it.
    pub(crate) fn exact_digit(&self, u: &LambdaInt, v: &LambdaInt) -> Result<RosenDigit> {
        let eps = u.sign()?;
        debug_assert!(eps != 0);
        let au = if eps < 0 { -u } else { u.clone() };
        let c = self.consts(96);
        let xe = au.enclose_rel(96)?.div(&v.enclose_rel(96)?, 96).expect("positive denominator");
        let w = xe.recip(96).expect("nonzero point");
        let y = w.add(&c.theta, 96).div(&c.l, 96).unwrap();
        let guess = y.midpoint().floor();
        let mut b = guess.to_u64().ok_or(Error::DigitOverflow)?.max(1);
        let at_or_above = |j: u64| -> Result<bool> {
            let (n, d) = self.edge(j);
            Ok((v.mul_int(&d) - &n * &au).sign()? >= 0)
        };
        while !at_or_above(b)? {
            b -= 1;
            if b == 0 {
                return Err(Error::OutOfDomain);
            }
        }
        while at_or_above(b.checked_add(1).ok_or(Error::DigitOverflow)?)? {
            b += 1;
        }
        Ok(RosenDigit { epsilon: eps as i8, b })
    }

    /// One exact step of the map.
    pub fn step(&self, x: &LambdaRational) -> Result<DigitStep> {
        self.ring().check(x.ring())?;
        if x.is_zero() {
            return Ok(DigitStep::Terminated);
        }
        let (u, v) = (x.num(), x.den());
        let d = self.exact_digit(u, v)?;
        let au = if d.epsilon < 0 { -u } else { u.clone() };
        let next_num = v - &self.mul_digit(&au, d.b);
        Ok(DigitStep::Digit { digit: d, next: LambdaRational::new(next_num, au)? })
    }

    /// Convergents (p_n, q_n), n = 0..=len, of a digit string.
    pub fn convergents(&self, digits: &[RosenDigit]) -> Vec<(LambdaInt, LambdaInt)> {
        let vals: Vec<(i32, LambdaInt)> = digits.iter().map(|d| (d.epsilon as i32, self.digit_value(d.b))).collect();
        crate::moebius::convergents_from_values(self.ring(), &vals)
    }
}

/// Result of one application of a digit map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitStep {
    Terminated,
    Digit { digit: RosenDigit, next: LambdaRational },
}

/// One step of the λₖ-nearest map S.
pub fn rosen_digit(x: &LambdaRational, ring: &LambdaRing) -> Result<DigitStep> {
    let f = Family::Rosen(ring.clone());
    if !f.in_domain(x)? {
        return Err(Error::OutOfDomain);
    }
    f.step(x)
}

/// One step of the Gauss map on [0, 1): returns the partial quotient.
pub fn gauss_digit(x: &LambdaRational) -> Result<DigitStep> {
    alpha_digit(x, &Family::regular())
}

/// One step of an α-map.
pub fn alpha_digit(x: &LambdaRational, family: &Family) -> Result<DigitStep> {
    if !family.in_domain(x)? {
        return Err(Error::OutOfDomain);
    }
    family.step(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(f: &Family, s: &str) -> LambdaRational {
        LambdaRational::parse(f.ring(), s).unwrap()
    }

    fn unwrap_digit(s: DigitStep) -> (RosenDigit, LambdaRational) {
        match s {
            DigitStep::Digit { digit, next } => (digit, next),
            DigitStep::Terminated => panic!("terminated"),
        }
    }

    #[test]
    fn rosen_k3_tie_resolution() {
        let f = Family::rosen(3).unwrap();
        let (d, next) = unwrap_digit(rosen_digit(&rat(&f, "0.4"), f.ring()).unwrap());
        assert_eq!(d, RosenDigit { epsilon: 1, b: 3 });
        assert_eq!(next, rat(&f, "-1/2"));
        let (d, next) = unwrap_digit(f.step(&next).unwrap());
        assert_eq!(d, RosenDigit { epsilon: -1, b: 2 });
        assert!(next.is_zero());
        assert_eq!(f.step(&next).unwrap(), DigitStep::Terminated);
    }

    #[test]
    fn rosen_k4_half() {
        let f = Family::rosen(4).unwrap();
        let (d, next) = unwrap_digit(f.step(&rat(&f, "0.5")).unwrap());
        assert_eq!(d, RosenDigit { epsilon: 1, b: 1 });
        assert!((next.to_f64() - (2.0 - std::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn gauss_examples() {
        let f = Family::regular();
        let (d, next) = unwrap_digit(gauss_digit(&rat(&f, "0.4")).unwrap());
        assert_eq!(d.b, 2);
        assert_eq!(next, rat(&f, "0.5"));
        let (d, next) = unwrap_digit(gauss_digit(&next).unwrap());
        assert_eq!(d.b, 2);
        assert!(next.is_zero());
    }

    #[test]
    fn out_of_domain_rejected() {
        let f = Family::rosen(3).unwrap();
        assert_eq!(rosen_digit(&rat(&f, "0.5"), f.ring()), Err(Error::OutOfDomain));
        assert!(gauss_digit(&rat(&f, "-0.1")).is_err());
    }

    #[test]
    fn alpha_parse() {
        assert_eq!(Family::alpha_from_str("0.5").unwrap(), Family::alpha(1, 2).unwrap());
        assert!(Family::alpha_from_str("1.5").is_err());
        assert!(Family::alpha_from_str("0").is_err());
        assert_eq!(Family::regular().tag(), "regular");
    }

    #[test]
    fn interval_digit_agrees_with_exact() {
        let f = Family::rosen(5).unwrap();
        let c = f.consts(128);
        let x = rat(&f, "0.123456789");
        let e = x.enclose_rel(120).unwrap();
        let (d, _) = f.interval_digit(&e, &c).unwrap();
        let (d2, next) = unwrap_digit(f.step(&x).unwrap());
        assert_eq!(d, d2);
        assert!(f.in_domain(&next).unwrap());
    }
}
