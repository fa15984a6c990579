use super::{LambdaInt, LambdaRing};
use crate::error::{Error, Result};
use crate::real::{pow2, Dyadic, RealEnclosure};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// An exact element `num/den` of Q(λₖ) with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRational {
    num: LambdaInt,
    den: LambdaInt,
}

impl LambdaRational {
    pub fn new(num: LambdaInt, den: LambdaInt) -> Result<Self> {
        num.ring().check(den.ring())?;
        match den.sign()? {
            0 => Err(Error::ZeroDenominator),
            1 => Ok(LambdaRational { num, den }),
            _ => Ok(LambdaRational { num: -num, den: -den }),
        }
    }

    pub fn from_int(ring: &LambdaRing, v: impl Into<BigInt>) -> Self {
        LambdaRational { num: ring.from_int(v), den: ring.one() }
    }

    pub fn from_elem(v: LambdaInt) -> Self {
        let den = v.ring().one();
        LambdaRational { num: v, den }
    }

    /// The rational number `p/q` reduced to lowest terms.
    pub fn from_ratio(ring: &LambdaRing, p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = if g.is_zero() { (p, q) } else { (p / &g, q / &g) };
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(LambdaRational { num: ring.from_bigint(p), den: ring.from_bigint(q) })
    }

    pub fn from_dyadic(ring: &LambdaRing, d: &Dyadic) -> Self {
        if d.exponent() >= 0 {
            Self::from_int(ring, d.mantissa() << (d.exponent() as u64))
        } else {
            Self::from_ratio(ring, d.mantissa().clone(), pow2((-d.exponent()) as u64)).unwrap()
        }
    }

    pub fn from_f64(ring: &LambdaRing, x: f64) -> Result<Self> {
        let d = Dyadic::from_f64(x).ok_or_else(|| Error::Parse(x.to_string()))?;
        Ok(Self::from_dyadic(ring, &d))
    }

    /// Parse an exact rational: `-0.125`, `3/7`, `1.5e-3`, `-2`.
    pub fn parse(ring: &LambdaRing, s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let t = s.trim();
        if let Some((a, b)) = t.split_once('/') {
            let p: BigInt = a.trim().parse().map_err(|_| err())?;
            let q: BigInt = b.trim().parse().map_err(|_| err())?;
            return Self::from_ratio(ring, p, q);
        }
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, body) = match mant.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if (ip.is_empty() && fp.is_empty()) || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{ip}{fp}");
        let mut p: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
        if neg {
            p = -p;
        }
        let scale = exp - fp.len() as i64;
        if scale.unsigned_abs() > 100_000 {
            return Err(err());
        }
        let ten_pow = |n: u64| num_traits::pow(BigInt::from(10), n as usize);
        if scale >= 0 {
            Self::from_ratio(ring, p * ten_pow(scale as u64), BigInt::one())
        } else {
            Self::from_ratio(ring, p, ten_pow((-scale) as u64))
        }
    }

    pub fn ring(&self) -> &LambdaRing {
        self.num.ring()
    }

    pub fn num(&self) -> &LambdaInt {
        &self.num
    }

    pub fn den(&self) -> &LambdaInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn sign(&self) -> Result<i32> {
        self.num.sign()
    }

    pub fn neg(&self) -> Self {
        LambdaRational { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let num = self.num.checked_mul(&o.den)?.checked_add(&o.num.checked_mul(&self.den)?)?;
        let den = self.den.checked_mul(&o.den)?;
        Ok(LambdaRational { num, den })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(LambdaRational { num: self.num.checked_mul(&o.num)?, den: self.den.checked_mul(&o.den)? })
    }

    pub fn mul_elem(&self, v: &LambdaInt) -> Result<Self> {
        Ok(LambdaRational { num: self.num.checked_mul(v)?, den: self.den.clone() })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Exact comparison.
    pub fn compare(&self, o: &Self) -> Result<Ordering> {
        let diff = self.num.checked_mul(&o.den)?.checked_sub(&o.num.checked_mul(&self.den)?)?;
        Ok(diff.sign()?.cmp(&0))
    }

    /// Enclosure with at least `rel_bits` relative bits.
    pub fn enclose_rel(&self, rel_bits: u64) -> Result<RealEnclosure> {
        if self.is_zero() {
            return Ok(RealEnclosure::exact(Dyadic::zero(), rel_bits));
        }
        let n = self.num.enclose_rel(rel_bits + 4)?;
        let d = self.den.enclose_rel(rel_bits + 4)?;
        Ok(n.div(&d, rel_bits + 8).expect("positive denominator"))
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose_rel(60).map(|e| e.to_f64()).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for LambdaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_integer().is_some_and(|d| d.is_one()) {
            write!(f, "{}", self.num)
        } else {
            let wrap = |e: &LambdaInt| {
                let s = e.to_string();
                if e.as_integer().is_some() {
                    s
                } else {
                    format!("({s})")
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}
