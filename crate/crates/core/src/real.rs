//! Dyadic numbers and outward-rounded interval arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for inexact dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// The exact value `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, shift: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => m >> shift,
        Round::Up => -((-m) >> shift),
    }
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic { mant: v.into(), exp: 0 }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Some(Dyadic { mant: BigInt::from(m) * sign, exp: ex })
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u64, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        Dyadic { mant: shr_round(&self.mant, shift, dir), exp: self.exp + shift as i64 }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        match a.exp.cmp(&b.exp) {
            Ordering::Equal => (a.mant.clone(), b.mant.clone(), a.exp),
            Ordering::Less => (a.mant.clone(), &b.mant << ((b.exp - a.exp) as u64), a.exp),
            Ordering::Greater => (&a.mant << ((a.exp - b.exp) as u64), b.mant.clone(), b.exp),
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (x, y, e) = Self::align(self, o);
        Dyadic { mant: x + y, exp: e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &o.mant, exp: self.exp + o.exp }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic { mant: &self.mant * k, exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Quotient rounded to about `prec` significant bits in direction `dir`.
    pub fn div(&self, o: &Dyadic, prec: u64, dir: Round) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let want = prec as i64 + o.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let s = want.max(0) as u64;
        let q = div_round(&(&self.mant << s), &o.mant, dir);
        Dyadic { mant: q, exp: self.exp - o.exp - s as i64 }
    }

    /// `floor(x)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            &self.mant >> ((-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Nearest `f64` (may overflow to infinity or underflow to zero).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let m = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        let e = self.exp + shift as i64;
        if e > 4000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -4000 {
            return 0.0;
        }
        let mut v = m;
        let mut e = e as i32;
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
        }
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
        }
        v * 2f64.powi(e)
    }

    /// Natural logarithm of a positive value, as `f64`, without overflow.
    pub fn ln_f64(&self) -> f64 {
        assert!(self.signum() > 0, "ln of non-positive dyadic");
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let m = (&self.mant >> shift).to_f64().unwrap();
        m.ln() + (self.exp + shift as i64) as f64 * std::f64::consts::LN_2
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (s1, s2) = (self.signum(), o.signum());
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        if s1 == 0 {
            return Ordering::Equal;
        }
        let (t1, t2) = (self.top(), o.top());
        if t1 != t2 {
            let by_mag = t1.cmp(&t2);
            return if s1 > 0 { by_mag } else { by_mag.reverse() };
        }
        let (x, y, _) = Self::align(self, o);
        x.cmp(&y)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// A closed interval `[lower, upper]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub precision_bits: u64,
}

impl RealEnclosure {
    pub fn new(lower: Dyadic, upper: Dyadic, precision_bits: u64) -> Self {
        debug_assert!(lower <= upper, "inverted enclosure");
        RealEnclosure { lower, upper, precision_bits }
    }

    pub fn exact(v: Dyadic, precision_bits: u64) -> Self {
        RealEnclosure { lower: v.clone(), upper: v, precision_bits }
    }

    pub fn from_int(v: impl Into<BigInt>, precision_bits: u64) -> Self {
        Self::exact(Dyadic::from_int(v), precision_bits)
    }

    /// Point enclosure of a finite `f64`.
    pub fn from_f64(x: f64, precision_bits: u64) -> Option<Self> {
        Dyadic::from_f64(x).map(|d| Self::exact(d, precision_bits))
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u64) -> Self {
        RealEnclosure { lower: lo.round(prec, Round::Down), upper: hi.round(prec, Round::Up), precision_bits: prec }
    }

    pub fn with_precision(&self, prec: u64) -> Self {
        Self::rounded(self.lower.clone(), self.upper.clone(), prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.lower.signum() <= 0 && self.upper.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &RealEnclosure) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    /// Sign if the interval excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<i32> {
        if self.lower.signum() > 0 {
            Some(1)
        } else if self.upper.signum() < 0 {
            Some(-1)
        } else if self.lower.is_zero() && self.upper.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RealEnclosure { lower: self.upper.neg(), upper: self.lower.neg(), precision_bits: self.precision_bits }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            Some(s) if s >= 0 => self.clone(),
            Some(_) => self.neg(),
            None => {
                let m = std::cmp::max(self.lower.abs(), self.upper.abs());
                RealEnclosure { lower: Dyadic::zero(), upper: m, precision_bits: self.precision_bits }
            }
        }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        Self::rounded(self.lower.add(&o.lower), self.upper.add(&o.upper), prec)
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        Self::rounded(self.lower.sub(&o.upper), self.upper.sub(&o.lower), prec)
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        if self.lower.signum() >= 0 && o.lower.signum() >= 0 {
            return Self::rounded(self.lower.mul(&o.lower), self.upper.mul(&o.upper), prec);
        }
        let c =
            [self.lower.mul(&o.lower), self.lower.mul(&o.upper), self.upper.mul(&o.lower), self.upper.mul(&o.upper)];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::rounded(lo, hi, prec)
    }

    pub fn mul_int(&self, k: &BigInt, prec: u64) -> Self {
        if k.is_negative() {
            return self.neg().mul_int(&-k, prec);
        }
        Self::rounded(self.lower.mul_int(k), self.upper.mul_int(k), prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RealEnclosure {
            lower: self.lower.mul_pow2(k),
            upper: self.upper.mul_pow2(k),
            precision_bits: self.precision_bits,
        }
    }

    /// `1/self`; `None` when the interval contains zero.
    pub fn recip(&self, prec: u64) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::from_int(1);
        let lo = one.div(&self.upper, prec, Round::Down);
        let hi = one.div(&self.lower, prec, Round::Up);
        Some(RealEnclosure { lower: lo, upper: hi, precision_bits: prec })
    }

    /// `self / o`; `None` when the divisor contains zero.
    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        if self.lower.signum() >= 0 && o.lower.signum() > 0 {
            let lo = self.lower.div(&o.upper, prec, Round::Down);
            let hi = self.upper.div(&o.lower, prec, Round::Up);
            return Some(RealEnclosure { lower: lo, upper: hi, precision_bits: prec });
        }
        let c = [(&self.lower, &o.lower), (&self.lower, &o.upper), (&self.upper, &o.lower), (&self.upper, &o.upper)];
        let lo = c.iter().map(|(a, b)| a.div(b, prec, Round::Down)).min().unwrap();
        let hi = c.iter().map(|(a, b)| a.div(b, prec, Round::Up)).max().unwrap();
        Some(RealEnclosure { lower: lo, upper: hi, precision_bits: prec })
    }

    /// Floors of both endpoints.
    pub fn floor_bounds(&self) -> (BigInt, BigInt) {
        (self.lower.floor(), self.upper.floor())
    }

    pub fn width(&self) -> Dyadic {
        self.upper.sub(&self.lower)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lower.add(&self.upper).mul_pow2(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Number of correct relative bits, roughly `log2(|x| / width)`.
    /// Zero when the interval touches zero; `u64::MAX` for a point enclosure.
    pub fn relative_bits(&self) -> u64 {
        if self.contains_zero() {
            return if self.lower.is_zero() && self.upper.is_zero() { u64::MAX } else { 0 };
        }
        let w = self.width();
        if w.is_zero() {
            return u64::MAX;
        }
        let mag = std::cmp::min(self.lower.abs(), self.upper.abs());
        (mag.top() - w.top() - 1).max(0) as u64
    }

    /// Midpoint of `ln(self)` for a positive interval.
    pub fn ln_f64(&self) -> f64 {
        0.5 * (self.lower.ln_f64() + self.upper.ln_f64())
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower.to_f64(), self.upper.to_f64())
    }
}

/// `2^k` as a big integer.
pub(crate) fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}
