//! 2×2 matrices over Z[λₖ], their Möbius action, and convergent recurrences.

use crate::cf::RosenDigit;
use crate::error::{Error, Result};
use crate::real::RealEnclosure;
use crate::ring::{LambdaInt, LambdaRational, LambdaRing};
use std::fmt;

/// The matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoebiusMatrix {
    pub a: LambdaInt,
    pub b: LambdaInt,
    pub c: LambdaInt,
    pub d: LambdaInt,
}

impl MoebiusMatrix {
    pub fn new(a: LambdaInt, b: LambdaInt, c: LambdaInt, d: LambdaInt) -> Result<Self> {
        a.ring().check(b.ring())?;
        a.ring().check(c.ring())?;
        a.ring().check(d.ring())?;
        Ok(MoebiusMatrix { a, b, c, d })
    }

    pub fn identity(ring: &LambdaRing) -> Self {
        MoebiusMatrix { a: ring.one(), b: ring.zero(), c: ring.zero(), d: ring.one() }
    }

    /// S = [[0, 1], [−1, 0]].
    pub fn s_gen(ring: &LambdaRing) -> Self {
        MoebiusMatrix { a: ring.zero(), b: ring.one(), c: -ring.one(), d: ring.zero() }
    }

    /// T = [[1, λ], [0, 1]].
    pub fn t_gen(ring: &LambdaRing) -> Self {
        Self::t_pow(ring, 1)
    }

    /// T^m = [[1, mλ], [0, 1]].
    pub fn t_pow(ring: &LambdaRing, m: i64) -> Self {
        MoebiusMatrix { a: ring.one(), b: ring.lambda().mul_i64(m), c: ring.zero(), d: ring.one() }
    }

    /// The digit matrix [[0, ε], [1, a]].
    pub fn digit(eps: i32, a: LambdaInt) -> Self {
        let r = a.ring().clone();
        MoebiusMatrix { a: r.zero(), b: r.from_int(eps), c: r.one(), d: a }
    }

    pub fn ring(&self) -> &LambdaRing {
        self.a.ring()
    }

    pub fn det(&self) -> LambdaInt {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// `true` when det = ±1 exactly.
    pub fn is_unimodular(&self) -> bool {
        let det = self.det();
        let one = self.ring().one();
        det == one || det == -one
    }

    pub fn neg(&self) -> Self {
        MoebiusMatrix { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// Matrix product `self · h`.
    pub fn compose(&self, h: &MoebiusMatrix) -> Result<Self> {
        self.ring().check(h.ring())?;
        let out = MoebiusMatrix {
            a: &(&self.a * &h.a) + &(&self.b * &h.c),
            b: &(&self.a * &h.b) + &(&self.b * &h.d),
            c: &(&self.c * &h.a) + &(&self.d * &h.c),
            d: &(&self.c * &h.b) + &(&self.d * &h.d),
        };
        debug_assert!(
            !(self.is_unimodular() && h.is_unimodular()) || out.is_unimodular(),
            "determinant corrupted in compose"
        );
        Ok(out)
    }

    /// g(∞) = a/c, normalized so that the denominator is positive.
    pub fn act_on_infinity(&self) -> ParabolicPoint {
        ParabolicPoint::from_pair(self.a.clone(), self.c.clone())
    }

    /// Exact action on an element of Q(λ); `None` at the pole.
    pub fn apply_exact(&self, x: &LambdaRational) -> Result<Option<LambdaRational>> {
        self.ring().check(x.ring())?;
        let num = &(&self.a * x.num()) + &(&self.b * x.den());
        let den = &(&self.c * x.num()) + &(&self.d * x.den());
        if den.is_zero() {
            return Ok(None);
        }
        LambdaRational::new(num, den).map(Some)
    }

    /// Rigorous enclosure of (a·x + b)/(c·x + d), escalating the entry precision when the
    /// denominator cannot be separated from zero.
    pub fn apply(&self, x: &RealEnclosure, prec: u64) -> Result<RealEnclosure> {
        let cap = prec + self.ring().precision_cap();
        let mut p = prec + 16;
        loop {
            let a = self.a.enclose(p);
            let b = self.b.enclose(p);
            let c = self.c.enclose(p);
            let d = self.d.enclose(p);
            let num = a.mul(x, p).add(&b, p);
            let den = c.mul(x, p).add(&d, p);
            if let Some(q) = num.div(&den, p) {
                return Ok(q.with_precision(prec));
            }
            if p >= cap {
                return Err(Error::PrecisionCap { cap, context: "applying a Moebius map" });
            }
            p = (p * 2).min(cap);
        }
    }
}

/// Free-function form of [`MoebiusMatrix::compose`].
pub fn compose(g: &MoebiusMatrix, h: &MoebiusMatrix) -> Result<MoebiusMatrix> {
    g.compose(h)
}

/// Free-function form of [`MoebiusMatrix::act_on_infinity`].
pub fn act_on_infinity(g: &MoebiusMatrix) -> ParabolicPoint {
    g.act_on_infinity()
}

/// Free-function form of [`MoebiusMatrix::apply`].
pub fn moebius_apply(g: &MoebiusMatrix, x: &RealEnclosure, prec: u64) -> Result<RealEnclosure> {
    g.apply(x, prec)
}

impl fmt::Display for MoebiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A cusp g(∞): either ∞ or p/q with q > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParabolicPoint {
    Infinity,
    Finite { p: LambdaInt, q: LambdaInt },
}

impl ParabolicPoint {
    /// Normalize the column (p, q): ∞ when q = 0, otherwise flip signs so that q > 0.
    pub fn from_pair(p: LambdaInt, q: LambdaInt) -> Self {
        match q.signum() {
            0 => ParabolicPoint::Infinity,
            1 => ParabolicPoint::Finite { p, q },
            _ => ParabolicPoint::Finite { p: -p, q: -q },
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ParabolicPoint::Infinity)
    }

    pub fn to_rational(&self) -> Option<LambdaRational> {
        match self {
            ParabolicPoint::Infinity => None,
            ParabolicPoint::Finite { p, q } => Some(LambdaRational::new(p.clone(), q.clone()).unwrap()),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            ParabolicPoint::Infinity => f64::INFINITY,
            ParabolicPoint::Finite { p, q } => p.approx_f64() / q.approx_f64(),
        }
    }
}

impl fmt::Display for ParabolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParabolicPoint::Infinity => write!(f, "∞"),
            ParabolicPoint::Finite { p, q } => {
                let w = |e: &LambdaInt| {
                    let s = e.to_string();
                    if e.as_integer().is_some() {
                        s
                    } else {
                        format!("({s})")
                    }
                };
                write!(f, "{}/{}", w(p), w(q))
            }
        }
    }
}

/// Convergents (p_n, q_n) for n = 0..=len from digit values (ε_n, a_n), via
/// (p_{n−1} p_n; q_{n−1} q_n) = Π (0 ε_i; 1 a_i).
pub fn convergents_from_values(ring: &LambdaRing, digits: &[(i32, LambdaInt)]) -> Vec<(LambdaInt, LambdaInt)> {
    let mut out = Vec::with_capacity(digits.len() + 1);
    let (mut pm, mut p) = (ring.one(), ring.zero());
    let (mut qm, mut q) = (ring.zero(), ring.one());
    out.push((p.clone(), q.clone()));
    for (eps, a) in digits {
        let pn = &(a * &p) + &pm.mul_i64(*eps as i64);
        let qn = &(a * &q) + &qm.mul_i64(*eps as i64);
        pm = std::mem::replace(&mut p, pn);
        qm = std::mem::replace(&mut q, qn);
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Rosen convergents (a_n = b_n·λ) including (p_0, q_0) = (0, 1).
pub fn convergent_chain(ring: &LambdaRing, digits: &[RosenDigit]) -> Vec<(LambdaInt, LambdaInt)> {
    let vals: Vec<(i32, LambdaInt)> =
        digits.iter().map(|d| (d.epsilon as i32, ring.lambda().mul_i64(d.b as i64))).collect();
    convergents_from_values(ring, &vals)
}

/// The convergent matrix (p_{n−1} p_n; q_{n−1} q_n) for the chain `conv` at index n ≥ 1.
pub fn convergent_matrix(conv: &[(LambdaInt, LambdaInt)], n: usize) -> MoebiusMatrix {
    let (pm, qm) = &conv[n - 1];
    let (p, q) = &conv[n];
    MoebiusMatrix { a: pm.clone(), b: p.clone(), c: qm.clone(), d: q.clone() }
}
