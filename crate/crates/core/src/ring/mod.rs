//! Exact arithmetic in Z[λₖ], λₖ = 2cos(π/k), with rigorous sign determination.

mod minpoly;
mod rational;

pub use rational::LambdaRational;

use crate::error::{Error, Result};
use crate::real::{pow2, Dyadic, RealEnclosure};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

/// Largest supported Hecke index unless configured otherwise.
pub const DEFAULT_K_MAX: u32 = 20;

/// Default hard cap on the extra bits of the sign ladder.
pub const DEFAULT_PRECISION_CAP: u64 = 8192;

/// Hecke group index k, 3 ≤ k ≤ k_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeckeIndex(u32);

impl HeckeIndex {
    pub fn new(k: u32) -> Result<Self> {
        Self::with_max(k, DEFAULT_K_MAX)
    }

    pub fn with_max(k: u32, k_max: u32) -> Result<Self> {
        if (3..=k_max).contains(&k) {
            Ok(HeckeIndex(k))
        } else {
            Err(Error::IndexOutOfRange { k, k_max })
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

/// Enclosures of λ^0..λ^{d−1} on the grid 2^{−prec}: λ^j ∈ [lo_j, hi_j]·2^{−prec}.
struct PowerTable {
    prec: u64,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

struct RingInner {
    k: HeckeIndex,
    min_poly: Vec<BigInt>,
    lambda: f64,
    powers_f64: Vec<f64>,
    precision_cap: u64,
    table: RwLock<Arc<PowerTable>>,
}

/// The ring Z[λₖ]. Cheap to clone; all clones share one cache of λ-power enclosures.
#[derive(Clone)]
pub struct LambdaRing {
    inner: Arc<RingInner>,
}

impl fmt::Debug for LambdaRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaRing(k={})", self.k().value())
    }
}

impl PartialEq for LambdaRing {
    fn eq(&self, o: &Self) -> bool {
        self.k() == o.k()
    }
}

impl Eq for LambdaRing {}

fn registry() -> &'static Mutex<HashMap<u32, LambdaRing>> {
    static REG: OnceLock<Mutex<HashMap<u32, LambdaRing>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch the shared instance of) the ring for index k.
pub fn make_ring(k: HeckeIndex) -> LambdaRing {
    let mut reg = registry().lock().unwrap();
    reg.entry(k.value()).or_insert_with(|| LambdaRing::build(k, DEFAULT_PRECISION_CAP)).clone()
}

/// Exact value of `f(num / 2^prec)·2^{prec·d}` for the monic integer polynomial f.
fn scaled_poly_value(poly: &[BigInt], num: &BigInt, prec: u64) -> BigInt {
    let d = poly.len() - 1;
    let mut acc = BigInt::one();
    for j in (0..d).rev() {
        acc = acc * num + (&poly[j] << (prec * (d - j) as u64));
    }
    acc
}

/// `floor(λ·2^prec)`, certified by an exact sign change of the minimal polynomial.
fn lambda_floor(poly: &[BigInt], lambda: f64, prec: u64) -> BigInt {
    let d = poly.len() - 1;
    if d == 1 {
        return -&poly[0] << prec;
    }
    let deriv: Vec<BigInt> = (1..=d).map(|j| &poly[j] * BigInt::from(j)).collect();
    let fixed_eval = |p: &[BigInt], x: &BigInt, s: u64| -> BigInt {
        let mut acc = BigInt::zero();
        for c in p.iter().rev() {
            acc = ((acc * x) >> s) + (c << s);
        }
        acc
    };
    let mut s: u64 = 52;
    let mut x = BigInt::from((lambda * 2f64.powi(52)).round() as i64);
    let target = prec + 16;
    loop {
        let next = (s * 2).min(target);
        x <<= next - s;
        s = next;
        let f = fixed_eval(poly, &x, s);
        let fp = fixed_eval(&deriv, &x, s);
        x -= (f << s) / fp;
        if s == target {
            let f = fixed_eval(poly, &x, s);
            let fp = fixed_eval(&deriv, &x, s);
            x -= (f << s) / fp;
            break;
        }
    }
    let guess = x >> 16u64;
    let sign_at = |n: &BigInt| scaled_poly_value(poly, n, prec).sign();
    for off in 0..8i64 {
        for cand in [&guess - off, &guess + off] {
            let s0 = sign_at(&cand);
            let s1 = sign_at(&(&cand + 1));
            if s0 != s1 && s0 != num_bigint::Sign::NoSign {
                let approx = cand.to_f64().unwrap_or(0.0) * 2f64.powi(-(prec.min(1000) as i32));
                debug_assert!(prec > 1000 || (approx - lambda).abs() < 1e-9);
                return cand;
            }
        }
    }
    panic!("failed to certify an enclosure of lambda at {prec} bits");
}

impl PowerTable {
    fn build(poly: &[BigInt], lambda: f64, prec: u64) -> PowerTable {
        let d = poly.len() - 1;
        let l = lambda_floor(poly, lambda, prec);
        let one = pow2(prec);
        let mut lo = vec![one.clone()];
        let mut hi = vec![one];
        if d >= 2 {
            let (l0, h0): (BigInt, BigInt) = (l.clone(), &l + 1u32);
            lo.push(l0.clone());
            hi.push(h0.clone());
            for j in 2..d {
                let a = (&lo[j - 1] * &l0) >> prec;
                let b = -((-(&hi[j - 1] * &h0)) >> prec);
                lo.push(a);
                hi.push(b);
            }
        }
        PowerTable { prec, lo, hi }
    }
}

impl LambdaRing {
    fn build(k: HeckeIndex, precision_cap: u64) -> LambdaRing {
        let min_poly = minpoly::lambda_min_poly(k.value());
        let lambda = 2.0 * (std::f64::consts::PI / k.value() as f64).cos();
        let d = min_poly.len() - 1;
        let powers_f64 = (0..d).map(|j| lambda.powi(j as i32)).collect();
        let table = PowerTable::build(&min_poly, lambda, 128);
        LambdaRing {
            inner: Arc::new(RingInner {
                k,
                min_poly,
                lambda,
                powers_f64,
                precision_cap,
                table: RwLock::new(Arc::new(table)),
            }),
        }
    }

    /// A private ring instance with its own sign-ladder cap.
    pub fn with_precision_cap(k: HeckeIndex, cap: u64) -> LambdaRing {
        Self::build(k, cap)
    }

    pub fn k(&self) -> HeckeIndex {
        self.inner.k
    }

    pub fn degree(&self) -> usize {
        self.inner.min_poly.len() - 1
    }

    /// Monic minimal polynomial, lowest degree first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.inner.min_poly
    }

    pub fn lambda_f64(&self) -> f64 {
        self.inner.lambda
    }

    pub fn precision_cap(&self) -> u64 {
        self.inner.precision_cap
    }

    /// Enclosure of λ with `prec` fractional bits.
    pub fn lambda_value(&self, prec: u64) -> RealEnclosure {
        self.lambda().enclose_abs(prec)
    }

    fn table(&self, prec: u64) -> Arc<PowerTable> {
        {
            let t = self.inner.table.read().unwrap();
            if t.prec >= prec {
                return t.clone();
            }
        }
        let mut t = self.inner.table.write().unwrap();
        if t.prec < prec {
            let p = prec.max(t.prec + t.prec / 2).div_ceil(64) * 64;
            *t = Arc::new(PowerTable::build(&self.inner.min_poly, self.inner.lambda, p));
        }
        t.clone()
    }

    pub fn check(&self, other: &LambdaRing) -> Result<()> {
        if self.k() == other.k() {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.k().value(), right: other.k().value() })
        }
    }

    pub fn zero(&self) -> LambdaInt {
        LambdaInt { coeffs: vec![BigInt::zero(); self.degree()], ring: self.clone() }
    }

    pub fn one(&self) -> LambdaInt {
        self.from_int(1)
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> LambdaInt {
        self.from_bigint(v.into())
    }

    pub fn from_bigint(&self, v: BigInt) -> LambdaInt {
        let mut z = self.zero();
        z.coeffs[0] = v;
        z
    }

    /// The element λ.
    pub fn lambda(&self) -> LambdaInt {
        let mut c = vec![BigInt::zero(); self.degree() + 1];
        c[1] = BigInt::one();
        self.from_coeffs(c)
    }

    /// Element from an arbitrary-length coefficient vector, reduced to canonical form.
    pub fn from_coeffs(&self, mut c: Vec<BigInt>) -> LambdaInt {
        let d = self.degree();
        if c.len() < d {
            c.resize(d, BigInt::zero());
        }
        self.reduce_in_place(&mut c);
        LambdaInt { coeffs: c, ring: self.clone() }
    }

    fn reduce_in_place(&self, c: &mut Vec<BigInt>) {
        let d = self.degree();
        let m = &self.inner.min_poly;
        while c.len() > d {
            let t = c.pop().unwrap();
            if t.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for j in 0..d {
                c[base + j] -= &t * &m[j];
            }
        }
    }

    fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut r = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        self.reduce_in_place(&mut r);
        r
    }

    fn mul_lambda_raw(&self, a: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * (-&self.inner.min_poly[0])];
        }
        let mut r = Vec::with_capacity(d + 1);
        r.push(BigInt::zero());
        r.extend(a.iter().cloned());
        self.reduce_in_place(&mut r);
        r
    }
}

/// An element of Z[λₖ] in canonical form: coefficients of λ^0..λ^{d−1}.
#[derive(Clone)]
pub struct LambdaInt {
    coeffs: Vec<BigInt>,
    ring: LambdaRing,
}

impl PartialEq for LambdaInt {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.coeffs == o.coeffs
    }
}

impl Eq for LambdaInt {}

impl Hash for LambdaInt {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ring.k().hash(h);
        self.coeffs.hash(h);
    }
}

impl fmt::Debug for LambdaInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaInt[k={}]({})", self.ring.k().value(), self)
    }
}

impl fmt::Display for LambdaInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "λ")?;
                    if j > 1 {
                        write!(f, "^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl LambdaInt {
    pub fn ring(&self) -> &LambdaRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Bit length of the largest coefficient.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Integer value when the element lies in Z.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn checked_add(&self, o: &LambdaInt) -> Result<LambdaInt> {
        self.ring.check(&o.ring)?;
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(LambdaInt { coeffs: c, ring: self.ring.clone() })
    }

    pub fn checked_sub(&self, o: &LambdaInt) -> Result<LambdaInt> {
        self.ring.check(&o.ring)?;
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Ok(LambdaInt { coeffs: c, ring: self.ring.clone() })
    }

    pub fn checked_mul(&self, o: &LambdaInt) -> Result<LambdaInt> {
        self.ring.check(&o.ring)?;
        Ok(LambdaInt { coeffs: self.ring.mul_raw(&self.coeffs, &o.coeffs), ring: self.ring.clone() })
    }

    pub fn mul_int(&self, k: &BigInt) -> LambdaInt {
        LambdaInt { coeffs: self.coeffs.iter().map(|c| c * k).collect(), ring: self.ring.clone() }
    }

    pub fn mul_i64(&self, k: i64) -> LambdaInt {
        self.mul_int(&BigInt::from(k))
    }

    pub fn mul_lambda(&self) -> LambdaInt {
        LambdaInt { coeffs: self.ring.mul_lambda_raw(&self.coeffs), ring: self.ring.clone() }
    }

    /// Quick floating-point value; not rigorous.
    pub fn approx_f64(&self) -> f64 {
        self.coeffs.iter().zip(&self.ring.inner.powers_f64).map(|(c, p)| c.to_f64().unwrap_or(f64::NAN) * p).sum()
    }

    /// Enclosure on the grid 2^{−prec}: absolute error at most about d·2^{max_bits+1−prec}.
    pub fn enclose_abs(&self, prec: u64) -> RealEnclosure {
        if self.ring.degree() == 1 {
            let v = Dyadic::from_int(self.coeffs[0].clone());
            return RealEnclosure::exact(v, prec);
        }
        let t = self.ring.table(prec);
        let shift = t.prec - prec;
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j == 0 {
                let v = c << prec;
                lo += &v;
                hi += v;
                continue;
            }
            let lj = &t.lo[j] >> shift;
            let hj = -((-&t.hi[j]) >> shift);
            if c.is_positive() {
                lo += c * lj;
                hi += c * hj;
            } else {
                lo += c * hj;
                hi += c * lj;
            }
        }
        let e = -(prec as i64);
        RealEnclosure::new(Dyadic::new(lo, e), Dyadic::new(hi, e), prec)
    }

    /// Enclosure whose width is at most about 2^{−precision_bits} times the coefficient magnitude.
    pub fn enclose(&self, precision_bits: u64) -> RealEnclosure {
        let mut r = self.enclose_abs(precision_bits + self.max_bits() + 8);
        r.precision_bits = precision_bits;
        r
    }

    /// Extra bits (beyond the coefficient size) that always separate a nonzero element from 0.
    fn guaranteed_extra_bits(&self) -> u64 {
        let d = self.ring.degree() as u64;
        (d - 1) * (self.max_bits() + d + 2) + 16
    }

    fn ladder_cap(&self) -> u64 {
        self.ring.precision_cap().max(self.guaranteed_extra_bits())
    }

    /// Enclosure with at least `rel_bits` correct relative bits (exact zero for the zero element).
    pub fn enclose_rel(&self, rel_bits: u64) -> Result<RealEnclosure> {
        if self.is_zero() {
            return Ok(RealEnclosure::exact(Dyadic::zero(), rel_bits));
        }
        if self.ring.degree() == 1 {
            return Ok(RealEnclosure::exact(Dyadic::from_int(self.coeffs[0].clone()), rel_bits));
        }
        let base = self.max_bits();
        let cap = self.ladder_cap() + rel_bits;
        let mut extra = rel_bits + 32;
        loop {
            let e = self.enclose_abs(base + extra);
            if e.relative_bits() >= rel_bits {
                return Ok(e.with_precision(rel_bits + 8));
            }
            if extra >= cap {
                return Err(Error::PrecisionCap { cap, context: "enclosing a ring element" });
            }
            extra = (extra * 2).min(cap);
        }
    }

    /// Exact sign. Zero is decided from the coefficients; otherwise the precision ladder
    /// 64, 128, ... extra bits beyond the coefficient size is climbed until the enclosure
    /// excludes zero.
    pub fn sign(&self) -> Result<i32> {
        if self.is_zero() {
            return Ok(0);
        }
        if self.ring.degree() == 1 {
            return Ok(if self.coeffs[0].is_positive() { 1 } else { -1 });
        }
        let base = self.max_bits();
        let cap = self.ladder_cap();
        let mut extra = 64;
        loop {
            if let Some(s) = self.enclose_abs(base + extra).sign() {
                return Ok(s);
            }
            if extra >= cap {
                return Err(Error::PrecisionCap { cap, context: "deciding a sign" });
            }
            extra = (extra * 2).min(cap);
        }
    }

    /// Sign, panicking at the precision cap (which cannot happen below the guaranteed bound).
    pub fn signum(&self) -> i32 {
        self.sign().expect("sign determination exceeded the guaranteed precision bound")
    }

    pub fn abs(&self) -> LambdaInt {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&LambdaInt> for &LambdaInt {
            type Output = LambdaInt;
            fn $m(self, o: &LambdaInt) -> LambdaInt {
                self.$checked(o).expect("ring mismatch")
            }
        }
        impl $tr<LambdaInt> for LambdaInt {
            type Output = LambdaInt;
            fn $m(self, o: LambdaInt) -> LambdaInt {
                self.$checked(&o).expect("ring mismatch")
            }
        }
        impl $tr<&LambdaInt> for LambdaInt {
            type Output = LambdaInt;
            fn $m(self, o: &LambdaInt) -> LambdaInt {
                self.$checked(o).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &LambdaInt {
    type Output = LambdaInt;
    fn neg(self) -> LambdaInt {
        LambdaInt { coeffs: self.coeffs.iter().map(|c| -c).collect(), ring: self.ring.clone() }
    }
}

impl Neg for LambdaInt {
    type Output = LambdaInt;
    fn neg(mut self) -> LambdaInt {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(k: u32) -> LambdaRing {
        make_ring(HeckeIndex::new(k).unwrap())
    }

    fn el(r: &LambdaRing, c: &[i64]) -> LambdaInt {
        r.from_coeffs(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn index_range() {
        assert!(HeckeIndex::new(2).is_err());
        assert!(HeckeIndex::new(21).is_err());
        assert!(HeckeIndex::with_max(21, 30).is_ok());
        assert!(HeckeIndex::new(4).unwrap().is_even());
    }

    #[test]
    fn degrees() {
        assert_eq!(ring(3).degree(), 1);
        assert_eq!(ring(4).degree(), 2);
        assert_eq!(ring(5).degree(), 2);
        assert_eq!(ring(7).degree(), 3);
    }

    #[test]
    fn lambda_squared() {
        let r4 = ring(4);
        assert_eq!(&r4.lambda() * &r4.lambda(), el(&r4, &[2, 0]));
        let r5 = ring(5);
        assert_eq!(&r5.lambda() * &r5.lambda(), el(&r5, &[1, 1]));
        assert_eq!(r5.lambda().mul_lambda(), el(&r5, &[1, 1]));
        let r3 = ring(3);
        assert_eq!(r3.lambda(), r3.one());
    }

    #[test]
    fn additive_inverse() {
        let r = ring(7);
        let a = el(&r, &[3, -4, 9]);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(ring(4).one().checked_add(&ring(5).one()).is_err());
    }

    #[test]
    fn enclosures() {
        let r4 = ring(4);
        let e = r4.lambda().enclose(64);
        assert!(e.contains(&Dyadic::from_f64(std::f64::consts::SQRT_2).unwrap()) || e.width().to_f64() < 1e-15);
        assert!(e.width().to_f64() < 2f64.powi(-60));
        assert!((e.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let z = r4.zero().enclose(64);
        assert!(z.lower.is_zero() && z.upper.is_zero());
        let five = ring(3).from_int(5).enclose(64);
        assert_eq!(five.lower, Dyadic::from_int(5));
        assert_eq!(five.upper, Dyadic::from_int(5));
    }

    #[test]
    fn signs() {
        let r4 = ring(4);
        assert_eq!(r4.zero().sign().unwrap(), 0);
        assert_eq!((r4.lambda() - r4.one()).sign().unwrap(), 1);
        let r5 = ring(5);
        assert_eq!((r5.from_int(2) - r5.lambda()).sign().unwrap(), 1);
        assert_eq!((r5.lambda() - r5.from_int(2)).sign().unwrap(), -1);
    }

    #[test]
    fn sign_of_tiny_unit() {
        // (√2 − 1)^200 is a unit of size about 2^−254 with coefficients near 2^253.
        let r4 = ring(4);
        let u = r4.lambda() - r4.one();
        let mut p = r4.one();
        for _ in 0..200 {
            p = &p * &u;
        }
        assert_eq!(p.sign().unwrap(), 1);
        let e = p.enclose_rel(64).unwrap();
        let expect = 200.0 * (std::f64::consts::SQRT_2 - 1.0).ln();
        assert!((e.ln_f64() - expect).abs() < 1e-9);
        assert_eq!((-p).sign().unwrap(), -1);
    }

    #[test]
    fn precision_cap_is_reported() {
        let r4 = LambdaRing::with_precision_cap(HeckeIndex::new(4).unwrap(), 64);
        let u = r4.lambda() - r4.one();
        let mut p = r4.one();
        for _ in 0..200 {
            p = &p * &u;
        }
        // The guaranteed bound still lifts the cap above the pathological size.
        assert_eq!(p.sign().unwrap(), 1);
    }

    #[test]
    fn lambda_enclosure_high_precision() {
        for k in [4u32, 5, 7, 9, 20] {
            let r = ring(k);
            let e = r.lambda_value(4000);
            let w = e.width();
            assert!(w.to_f64() <= 2f64.powi(-3990) || w.is_zero(), "k={k}");
            assert!((e.to_f64() - r.lambda_f64()).abs() < 1e-14);
        }
    }

    #[test]
    fn display() {
        let r = ring(7);
        assert_eq!(el(&r, &[1, -2, 1]).to_string(), "1-2λ+λ^2");
        assert_eq!(el(&r, &[0, 1, 0]).to_string(), "λ");
        assert_eq!(r.zero().to_string(), "0");
    }
}
