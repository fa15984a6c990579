//! Exact orbits with interval look-ahead.
//!
//! The current point is x_n = u/v with u, v ∈ Z[λ] and v > 0. Digits are read from an
//! interval enclosure of x_n; the exact pair is only updated in blocks through the
//! accumulated step matrix, and re-enclosed when the interval has lost too much
//! relative precision. Digits the interval cannot decide fall back to exact edge tests.

use super::{Family, FamilyConsts, RosenDigit};
use crate::error::{Error, Result};
use crate::real::{Dyadic, RealEnclosure};
use crate::ring::{LambdaInt, LambdaRational};

/// Tuning of the interval look-ahead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitConfig {
    /// Precision (significant bits) of the interval iteration.
    pub work_bits: u64,
    /// Re-enclose from the exact state once fewer relative bits remain.
    pub min_rel_bits: u64,
    /// Track the convergent matrix exactly.
    pub track_convergents: bool,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { work_bits: 320, min_rel_bits: 48, track_convergents: false }
    }
}

/// One emitted digit together with an enclosure of the point reached.
#[derive(Clone, Debug)]
pub struct OrbitStep {
    pub digit: RosenDigit,
    pub point: RealEnclosure,
}

/// 2×2 matrix over Z[λ] as [m00, m01, m10, m11].
type Mat = [LambdaInt; 4];

fn identity(f: &Family) -> Mat {
    let r = f.ring();
    [r.one(), r.zero(), r.zero(), r.one()]
}

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        &(&x[0] * &y[0]) + &(&x[1] * &y[2]),
        &(&x[0] * &y[1]) + &(&x[1] * &y[3]),
        &(&x[2] * &y[0]) + &(&x[3] * &y[2]),
        &(&x[2] * &y[1]) + &(&x[3] * &y[3]),
    ]
}

/// Streaming exact orbit of a seed under a family's map.
pub struct Orbit {
    family: Family,
    consts: FamilyConsts,
    cfg: OrbitConfig,
    u: LambdaInt,
    v: LambdaInt,
    /// Product of step matrices [[−εa, 1], [ε, 0]] not yet applied to (u, v).
    pending_state: Option<Mat>,
    /// Convergent matrix (p_{n−1} p_n; q_{n−1} q_n) as of the last flush.
    conv: Option<Mat>,
    /// Product of digit matrices [[0, ε], [1, a]] not yet applied to `conv`.
    pending_conv: Option<Mat>,
    x: Option<RealEnclosure>,
    fresh: bool,
    n: usize,
    terminated: bool,
}

impl Orbit {
    pub fn new(family: &Family, x0: &LambdaRational, cfg: OrbitConfig) -> Result<Self> {
        family.ring().check(x0.ring())?;
        if !family.in_domain(x0)? {
            return Err(Error::OutOfDomain);
        }
        let conv = cfg.track_convergents.then(|| identity(family));
        Ok(Orbit {
            family: family.clone(),
            consts: family.consts(cfg.work_bits),
            cfg,
            u: x0.num().clone(),
            v: x0.den().clone(),
            pending_state: None,
            conv,
            pending_conv: None,
            x: None,
            fresh: false,
            n: 0,
            terminated: x0.is_zero(),
        })
    }

    /// Number of digits emitted so far.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn flush(&mut self) {
        if let Some(p) = self.pending_state.take() {
            let u = &(&p[0] * &self.u) + &(&p[1] * &self.v);
            let v = &(&p[2] * &self.u) + &(&p[3] * &self.v);
            self.u = u;
            self.v = v;
        }
        if let (Some(c), Some(p)) = (self.conv.as_ref(), self.pending_conv.take()) {
            self.conv = Some(mat_mul(c, &p));
        }
    }

    fn reseed(&mut self) -> Result<()> {
        self.flush();
        if self.u.is_zero() {
            self.terminated = true;
            self.x = None;
            return Ok(());
        }
        let w = self.cfg.work_bits;
        let nu = self.u.enclose_rel(w)?;
        let dv = self.v.enclose_rel(w)?;
        self.x = Some(nu.div(&dv, w).expect("positive denominator"));
        self.fresh = true;
        Ok(())
    }

    fn push_pending(&mut self, d: RosenDigit) {
        let eps = d.epsilon as i64;
        let f = &self.family;
        let p = self.pending_state.take().unwrap_or_else(|| identity(f));
        let a0 = f.mul_digit(&p[0], d.b).mul_i64(-eps);
        let a1 = f.mul_digit(&p[1], d.b).mul_i64(-eps);
        let next = [a0 + &p[2], a1 + &p[3], p[0].mul_i64(eps), p[1].mul_i64(eps)];
        self.pending_state = Some(next);
        if self.conv.is_some() {
            let r = self.pending_conv.take().unwrap_or_else(|| identity(f));
            let c01 = &r[0].mul_i64(eps) + &f.mul_digit(&r[1], d.b);
            let c11 = &r[2].mul_i64(eps) + &f.mul_digit(&r[3], d.b);
            let [_, r1, _, r3] = r;
            self.pending_conv = Some([r1, c01, r3, c11]);
        }
    }

    fn exact_step(&mut self) -> Result<OrbitStep> {
        self.flush();
        let d = self.family.exact_digit(&self.u, &self.v)?;
        self.push_pending(d);
        self.flush();
        self.n += 1;
        self.x = None;
        if self.u.is_zero() {
            self.terminated = true;
            return Ok(OrbitStep { digit: d, point: RealEnclosure::exact(Dyadic::zero(), self.cfg.work_bits) });
        }
        self.reseed()?;
        Ok(OrbitStep { digit: d, point: self.x.clone().unwrap() })
    }

    /// Next digit, or `None` once the orbit has reached 0.
    pub fn next_step(&mut self) -> Result<Option<OrbitStep>> {
        if self.terminated {
            return Ok(None);
        }
        if self.x.as_ref().is_none_or(|x| x.relative_bits() < self.cfg.min_rel_bits) {
            self.reseed()?;
            if self.terminated {
                return Ok(None);
            }
        }
        loop {
            let x = self.x.as_ref().unwrap();
            if let Some((d, next)) = self.family.interval_digit(x, &self.consts) {
                self.push_pending(d);
                self.n += 1;
                self.fresh = false;
                self.x = Some(next.clone());
                return Ok(Some(OrbitStep { digit: d, point: next }));
            }
            if self.fresh {
                return self.exact_step().map(Some);
            }
            self.reseed()?;
            if self.terminated {
                return Ok(None);
            }
        }
    }

    /// Whether the current point is exactly 0.
    pub fn is_terminated(&mut self) -> bool {
        if !self.terminated {
            self.flush();
            if self.u.is_zero() {
                self.terminated = true;
            }
        }
        self.terminated
    }

    /// Exact current point x_n.
    pub fn current_point(&mut self) -> LambdaRational {
        self.flush();
        LambdaRational::new(self.u.clone(), self.v.clone()).expect("positive denominator")
    }

    /// Exact (p_{n−1}, p_n, q_{n−1}, q_n) when convergents are tracked.
    pub fn convergent_matrix(&mut self) -> Option<[LambdaInt; 4]> {
        self.flush();
        self.conv.clone()
    }
}

/// Approximation coefficients Θ_1, Θ_2, ... of one seed through
/// Θ_n = 1/|q_{n+1}/q_n + x_{n+1}|, with q_{n+1}/q_n = a_{n+1} + ε_{n+1}·q_{n−1}/q_n.
pub struct ThetaStream {
    orbit: Orbit,
    ratio: Option<RealEnclosure>,
    prec: u64,
    done: bool,
}

impl ThetaStream {
    pub fn new(family: &Family, x0: &LambdaRational, cfg: OrbitConfig) -> Result<Self> {
        let mut orbit = Orbit::new(family, x0, cfg)?;
        // Θ_0 = |x_0| is skipped; the first step only primes the ratio q_1/q_0 = a_1.
        let ratio = match orbit.next_step()? {
            Some(s) => Some(Self::digit_interval(&orbit, s.digit)),
            None => None,
        };
        let done = ratio.is_none();
        Ok(ThetaStream { orbit, ratio, prec: 96, done })
    }

    fn digit_interval(orbit: &Orbit, d: RosenDigit) -> RealEnclosure {
        orbit.consts.l.mul_int(&d.b.into(), 96)
    }

    /// Next Θ_n as an enclosure; `None` after the terminal Θ = 0 of a finite expansion.
    pub fn next_theta(&mut self) -> Result<Option<RealEnclosure>> {
        if self.done {
            return Ok(None);
        }
        let p = self.prec;
        let prev = self.ratio.take().unwrap();
        match self.orbit.next_step()? {
            None => {
                self.done = true;
                Ok(Some(RealEnclosure::exact(Dyadic::zero(), p)))
            }
            Some(step) => {
                let a = Self::digit_interval(&self.orbit, step.digit);
                let inv = prev.recip(p).expect("ratio exceeds 1/2");
                let inv = if step.digit.epsilon < 0 { inv.neg() } else { inv };
                let r = a.add(&inv, p);
                let denom = r.add(&step.point, p).abs();
                let theta = denom.recip(p).expect("q-ratio bounded away from the orbit point");
                self.ratio = Some(r);
                Ok(Some(theta))
            }
        }
    }

    /// Collect up to `n` values as `f64`.
    pub fn take_f64(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            match self.next_theta()? {
                Some(t) => out.push(t.to_f64()),
                None => break,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits(f: &Family, x: &str, n: usize, cfg: OrbitConfig) -> Vec<RosenDigit> {
        let x0 = LambdaRational::parse(f.ring(), x).unwrap();
        let mut o = Orbit::new(f, &x0, cfg).unwrap();
        let mut out = vec![];
        while out.len() < n {
            match o.next_step().unwrap() {
                Some(s) => out.push(s.digit),
                None => break,
            }
        }
        out
    }

    fn exact_digits(f: &Family, x: &str, n: usize) -> Vec<RosenDigit> {
        let mut x = LambdaRational::parse(f.ring(), x).unwrap();
        let mut out = vec![];
        while out.len() < n {
            match f.step(&x).unwrap() {
                super::super::DigitStep::Digit { digit, next } => {
                    out.push(digit);
                    x = next;
                }
                super::super::DigitStep::Terminated => break,
            }
        }
        out
    }

    #[test]
    fn matches_exact_stepping() {
        let seeds =
            ["0.31415926535897932384626433832795028841971", "-0.2718281828459045235360287471352662497757", "0.0001234"];
        for k in [3u32, 4, 5, 7, 12] {
            let f = Family::rosen(k).unwrap();
            for s in seeds {
                for cfg in
                    [OrbitConfig::default(), OrbitConfig { work_bits: 80, min_rel_bits: 20, track_convergents: true }]
                {
                    assert_eq!(digits(&f, s, 60, cfg), exact_digits(&f, s, 60), "k={k} x={s}");
                }
            }
        }
        for f in [Family::regular(), Family::alpha(1, 2).unwrap(), Family::alpha(2, 3).unwrap()] {
            for s in ["0.4142135623730950488016887242096980785696", "0.1"] {
                assert_eq!(digits(&f, s, 60, OrbitConfig::default()), exact_digits(&f, s, 60));
            }
        }
    }

    #[test]
    fn tie_terminates() {
        let f = Family::rosen(3).unwrap();
        let d = digits(&f, "0.4", 10, OrbitConfig::default());
        assert_eq!(d, vec![RosenDigit { epsilon: 1, b: 3 }, RosenDigit { epsilon: -1, b: 2 }]);
    }

    #[test]
    fn tracked_convergents_match_chain() {
        let f = Family::rosen(5).unwrap();
        let x0 = LambdaRational::parse(f.ring(), "0.2024101812345678901234567").unwrap();
        let cfg = OrbitConfig { track_convergents: true, ..Default::default() };
        let mut o = Orbit::new(&f, &x0, cfg).unwrap();
        let mut ds = vec![];
        for _ in 0..25 {
            ds.push(o.next_step().unwrap().unwrap().digit);
        }
        let m = o.convergent_matrix().unwrap();
        let c = f.convergents(&ds);
        assert_eq!(m[1], c[25].0);
        assert_eq!(m[3], c[25].1);
        assert_eq!(m[2], c[24].1);
    }

    #[test]
    fn theta_stream_k3_tie() {
        let f = Family::rosen(3).unwrap();
        let x0 = LambdaRational::parse(f.ring(), "0.4").unwrap();
        let mut t = ThetaStream::new(&f, &x0, OrbitConfig::default()).unwrap();
        let v = t.take_f64(5).unwrap();
        assert_eq!(v.len(), 2);
        assert!((v[0] - 0.6).abs() < 1e-15);
        assert_eq!(v[1], 0.0);
    }
}
