//! Enumeration of parabolic points with bounded |c|, the constant t₀, and solution counts.
//!
//! Points are reached by breadth-first search over normal-form words g·Tᵐ·S. The Rosen
//! convergents of a point P* = a/c form one such path, with nondecreasing |c| and every
//! ancestor P_j satisfying |P* − P_j| ≤ 2/(c_j²κ). Branches violating that bound, or with
//! |c| above the search bound, are cut. Pruning uses f64 with slack; acceptance is exact.

use crate::error::{Error, Result};
use crate::lab::constants::{r_root, ConstantsTarget};
use crate::moebius::{MoebiusMatrix, ParabolicPoint};
use crate::ring::{make_ring, HeckeIndex, LambdaInt, LambdaRational, LambdaRing};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

/// Default bound on the number of distinct nodes a search may visit.
pub const DEFAULT_MAX_NODES: usize = 2_000_000;

/// Relative f64 slack used by pruning tests.
const SLACK: f64 = 1e-9;

/// Search parameters: |c| ≤ c_bound and value in the half-open window [lo, hi).
#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub ring: LambdaRing,
    pub c_bound: LambdaRational,
    pub lo: LambdaRational,
    pub hi: LambdaRational,
    pub max_nodes: usize,
}

impl EnumConfig {
    pub fn new(k: u32, c_bound: LambdaRational, lo: LambdaRational, hi: LambdaRational) -> Result<Self> {
        let ring = ring_for(k)?;
        if c_bound.compare(&LambdaRational::from_int(&ring, 1))? == Ordering::Less {
            return Err(Error::InvalidConfig("c bound must be at least 1".into()));
        }
        if lo.compare(&hi)? != Ordering::Less {
            return Err(Error::InvalidConfig("window must satisfy lo < hi".into()));
        }
        Ok(EnumConfig { ring, c_bound, lo, hi, max_nodes: DEFAULT_MAX_NODES })
    }
}

/// A parabolic point with its |c| and a det-1 group element mapping ∞ to it.
#[derive(Clone, Debug)]
pub struct EnumeratedPoint {
    pub point: ParabolicPoint,
    pub c_abs: LambdaInt,
    pub witness: MoebiusMatrix,
}

impl EnumeratedPoint {
    pub fn p(&self) -> &LambdaInt {
        match &self.point {
            ParabolicPoint::Finite { p, .. } => p,
            ParabolicPoint::Infinity => unreachable!("enumerated points are finite"),
        }
    }

    pub fn value_f64(&self) -> f64 {
        self.point.approx_f64()
    }
}

/// Output of a search.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub points: Vec<EnumeratedPoint>,
    /// False when the node budget ran out; the point list is then partial.
    pub complete: bool,
    pub nodes_visited: usize,
}

fn ring_for(k: u32) -> Result<LambdaRing> {
    Ok(make_ring(HeckeIndex::new(k)?))
}

/// Constant κ of the ancestor bound |P* − P_j| ≤ 2/(c_j²κ).
pub fn prune_kappa(ring: &LambdaRing) -> f64 {
    let l = ring.lambda_f64();
    if ring.k().is_even() {
        1.0 - l / 2.0
    } else {
        1.0 / r_root(l) - l / 2.0
    }
}

#[derive(Clone)]
struct Node {
    g: MoebiusMatrix,
    af: f64,
    bf: f64,
    cf: f64,
    df: f64,
}

impl Node {
    fn point_f64(&self) -> f64 {
        self.af / self.cf
    }
}

enum Region {
    /// dist(P, [lo, hi]) ≤ margin/c².
    Window { lo: f64, hi: f64, margin: f64 },
    /// |P − x| ≤ radius/c².
    Around { x: f64, radius: f64 },
}

impl Region {
    fn keeps(&self, p: f64, c: f64) -> bool {
        let c2 = c * c;
        match *self {
            Region::Window { lo, hi, margin } => {
                let d = if p < lo {
                    lo - p
                } else if p > hi {
                    p - hi
                } else {
                    0.0
                };
                d * c2 <= margin * (1.0 + SLACK) + SLACK
            }
            Region::Around { x, radius } => (p - x).abs() * c2 <= radius * (1.0 + SLACK) + SLACK,
        }
    }
}

/// Closed intervals of y with |A·y² + B·y| ≤ r.
fn quadratic_band(a: f64, b: f64, r: f64) -> Vec<(f64, f64)> {
    let (a, b) = if a < 0.0 { (-a, -b) } else { (a, b) };
    if a * r < 1e-30 * b * b {
        let w = r / b.abs();
        return vec![(-w, w)];
    }
    let roots = |s: f64| -> Option<(f64, f64)> {
        // A y² + B y − s = 0
        let disc = b * b + 4.0 * a * s;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        let (y1, y2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, -s / q) };
        Some((y1.min(y2), y1.max(y2)))
    };
    let (o1, o2) = roots(r).expect("positive discriminant");
    match roots(-r) {
        Some((i1, i2)) if i1 > o1 && i2 < o2 => vec![(o1, i1), (i2, o2)],
        _ => vec![(o1, o2)],
    }
}

struct Search<'a> {
    ring: &'a LambdaRing,
    lambda: f64,
    c_max: f64,
    region: Region,
    max_nodes: usize,
}

impl Search<'_> {
    fn child(&self, n: &Node, m: i64) -> Node {
        let ml = self.ring.lambda().mul_i64(m);
        let (a, b, c, d) = (&n.g.a, &n.g.b, &n.g.c, &n.g.d);
        let g = MoebiusMatrix { a: &(a * &ml) + b, b: -a, c: &(c * &ml) + d, d: -c };
        let mlf = m as f64 * self.lambda;
        Node { g, af: n.af * mlf + n.bf, bf: -n.af, cf: n.cf * mlf + n.df, df: -n.cf }
    }

    /// Candidate m for the children of a node with c ≠ 0.
    fn child_range(&self, n: &Node) -> Vec<(i64, i64)> {
        let (c, d) = (n.cf, n.df);
        let cap = self.c_max * (1.0 + SLACK) + SLACK;
        let bands = match self.region {
            Region::Window { .. } => vec![(-cap, cap)],
            Region::Around { x, radius } => {
                // Child point P − 1/(c·y) with y = c·m·λ + d.
                let delta = n.point_f64() - x;
                quadratic_band(delta, -1.0 / c, radius * (1.0 + SLACK) + SLACK)
            }
        };
        let step = c * self.lambda;
        bands
            .into_iter()
            .filter_map(|(lo, hi)| {
                let (lo, hi) = (lo.max(-cap), hi.min(cap));
                if lo > hi {
                    return None;
                }
                let pad = 1e-6 * (lo.abs().max(hi.abs()) + 1.0);
                let (e1, e2) = ((lo - pad - d) / step, (hi + pad - d) / step);
                Some((e1.min(e2).ceil() as i64, e1.max(e2).floor() as i64))
            })
            .collect()
    }

    fn root_range(&self) -> (i64, i64) {
        let (lo, hi) = match self.region {
            Region::Window { lo, hi, margin } => (lo - margin, hi + margin),
            Region::Around { x, radius } => (x - radius, x + radius),
        };
        let pad = 1e-9 * (lo.abs() + hi.abs() + 1.0);
        (((lo - pad) / self.lambda).ceil() as i64, ((hi + pad) / self.lambda).floor() as i64)
    }

    /// All distinct nodes reached; the identity root is not included.
    fn run(&self) -> (Vec<Node>, bool) {
        let id = Node { g: MoebiusMatrix::identity(self.ring), af: 1.0, bf: 0.0, cf: 0.0, df: 1.0 };
        let mut seen: HashSet<ParabolicPoint> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let s_root = {
            let s = MoebiusMatrix::s_gen(self.ring).neg();
            Node { g: s, af: 0.0, bf: -1.0, cf: 1.0, df: 0.0 }
        };
        let (m0, m1) = self.root_range();
        for m in m0..=m1 {
            let n = if m == 0 { s_root.clone() } else { self.child(&id, m) };
            if seen.insert(n.g.act_on_infinity()) {
                queue.push_back(n);
            }
        }
        while let Some(n) = queue.pop_front() {
            if out.len() >= self.max_nodes {
                return (out, false);
            }
            for (m0, m1) in self.child_range(&n) {
                for m in m0..=m1 {
                    if m == 0 {
                        continue;
                    }
                    let ch = self.child(&n, m);
                    if ch.cf.abs() < 0.5 || ch.cf.abs() > self.c_max * (1.0 + SLACK) + SLACK {
                        continue;
                    }
                    if !self.region.keeps(ch.point_f64(), ch.cf) {
                        continue;
                    }
                    if seen.insert(ch.g.act_on_infinity()) {
                        queue.push_back(ch);
                    }
                }
            }
            out.push(n);
        }
        (out, true)
    }
}

fn to_point(n: &Node) -> Result<EnumeratedPoint> {
    let point = n.g.act_on_infinity();
    let c_abs = n.g.c.abs();
    Ok(EnumeratedPoint { point, c_abs, witness: n.g.clone() })
}

fn sort_points(points: &mut [EnumeratedPoint]) {
    points.sort_by(|x, y| {
        let cx = x.c_abs.approx_f64();
        let cy = y.c_abs.approx_f64();
        cx.total_cmp(&cy)
            .then_with(|| x.value_f64().total_cmp(&y.value_f64()))
            .then_with(|| x.c_abs.coeffs().cmp(y.c_abs.coeffs()))
            .then_with(|| x.p().coeffs().cmp(y.p().coeffs()))
    });
}

fn c_within(c_abs: &LambdaInt, bound: &LambdaRational) -> Result<bool> {
    Ok(LambdaRational::from_elem(c_abs.clone()).compare(bound)? != Ordering::Greater)
}

/// Every distinct g(∞) with 0 < |c(g)| ≤ N in [lo, hi), once each, ordered by |c| then value.
pub fn enumerate_points(cfg: &EnumConfig) -> Result<Enumeration> {
    let ring = &cfg.ring;
    let search = Search {
        ring,
        lambda: ring.lambda_f64(),
        c_max: cfg.c_bound.to_f64(),
        region: Region::Window { lo: cfg.lo.to_f64(), hi: cfg.hi.to_f64(), margin: 2.0 / prune_kappa(ring) },
        max_nodes: cfg.max_nodes,
    };
    let (nodes, complete) = search.run();
    let mut points = Vec::new();
    for n in &nodes {
        let e = to_point(n)?;
        if !c_within(&e.c_abs, &cfg.c_bound)? {
            continue;
        }
        let v = e.point.to_rational().expect("finite point");
        if v.compare(&cfg.lo)? != Ordering::Less && v.compare(&cfg.hi)? == Ordering::Less {
            points.push(e);
        }
    }
    sort_points(&mut points);
    Ok(Enumeration { points, complete, nodes_visited: nodes.len() })
}

/// Points P with |c| ≤ N and |x − P| ≤ (t + 2/κ)/c²: a superset of all solutions of
/// |x − P| < t/c², |c| ≤ N.
pub fn points_near(
    ring: &LambdaRing,
    x: &LambdaRational,
    t: f64,
    c_bound: f64,
    max_nodes: usize,
) -> Result<Enumeration> {
    let search = Search {
        ring,
        lambda: ring.lambda_f64(),
        c_max: c_bound,
        region: Region::Around { x: x.to_f64(), radius: t + 2.0 / prune_kappa(ring) },
        max_nodes,
    };
    let (nodes, complete) = search.run();
    let mut points = nodes.iter().map(to_point).collect::<Result<Vec<_>>>()?;
    sort_points(&mut points);
    Ok(Enumeration { points, complete, nodes_visited: nodes.len() })
}

/// Sign of t·c⁻² − |x − P| for P = p/q with q = |c| > 0: positive when P solves |x − P| < t/q².
///
/// With x = u/v and t = tn/td this is sign(tn·v − td·|u·q − v·p|·q).
pub fn solution_sign(x: &LambdaRational, p: &LambdaInt, q: &LambdaInt, t: &LambdaRational) -> Result<i32> {
    let e = (&(x.num() * q) - &(x.den() * p)).abs() * q.clone();
    let lhs = t.num() * x.den();
    let rhs = t.den() * &e;
    (&lhs - &rhs).sign()
}

/// t₀ = ½·min |c(g)| over group elements with c ≠ 0.
#[derive(Clone, Debug, Serialize)]
pub struct T0Report {
    pub k: u32,
    pub t0: f64,
    pub min_abs_c: f64,
    pub probe_bound: u64,
    pub elements_checked: usize,
    /// Elements with 0 < |c| < 1, decided exactly.
    pub below_one: usize,
}

/// Probe all elements reachable by words in S, T, T⁻¹ whose entries stay within `probe_bound`.
pub fn compute_t0(k: u32, probe_bound: u64) -> Result<T0Report> {
    if probe_bound < 1 {
        return Err(Error::InvalidConfig("probe bound must be at least 1".into()));
    }
    let ring = ring_for(k)?;
    let bound = probe_bound as f64;
    let gens = [MoebiusMatrix::s_gen(&ring), MoebiusMatrix::t_gen(&ring), MoebiusMatrix::t_pow(&ring, -1)];
    let normalize = |g: &MoebiusMatrix| -> Result<MoebiusMatrix> {
        let s = if g.c.is_zero() { g.d.sign()? } else { g.c.sign()? };
        Ok(if s < 0 { g.neg() } else { g.clone() })
    };
    let mut seen = HashSet::new();
    let id = MoebiusMatrix::identity(&ring);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    let mut min_c = f64::INFINITY;
    let mut below_one = 0;
    let one = ring.one();
    while let Some(g) = queue.pop_front() {
        if !g.c.is_zero() {
            let c = g.c.abs();
            min_c = min_c.min(c.approx_f64());
            if (&c - &one).sign()? < 0 {
                below_one += 1;
            }
        }
        for h in &gens {
            let n = normalize(&g.compose(h)?)?;
            let within = [&n.a, &n.b, &n.c, &n.d].iter().all(|e| e.approx_f64().abs() <= bound);
            if within && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Ok(T0Report { k, t0: min_c / 2.0, min_abs_c: min_c, probe_bound, elements_checked: seen.len(), below_one })
}

/// A count that may be uncertain when a strict inequality could not be decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountInterval {
    pub lo: u64,
    pub hi: u64,
}

impl CountInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> f64 {
        (self.lo + self.hi) as f64 / 2.0
    }
}

/// Solution counts on a t × N grid for one x, with the asymptotic slope for comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub k: u32,
    pub x: String,
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<u64>,
    /// counts[i][j] for t_grid[i], n_grid[j].
    pub counts: Vec<Vec<CountInterval>>,
    /// count / ln N.
    pub slope_estimate: Vec<Vec<f64>>,
    pub target_slope: Vec<f64>,
    pub t0: f64,
    /// t ≥ t₀ lies outside the regime of the asymptotic law.
    pub beyond_t0: Vec<bool>,
    pub complete: bool,
}

/// Count distinct P = g(∞) with |x − P| < t/c(g)² and |c(g)| ≤ N for each grid pair.
pub fn count_solutions(
    k: u32,
    x: &LambdaRational,
    t_grid: &[LambdaRational],
    n_grid: &[u64],
) -> Result<CountingReport> {
    let ring = ring_for(k)?;
    if x.ring() != &ring {
        return Err(Error::RingMismatch { left: x.ring().k().value(), right: k });
    }
    if t_grid.is_empty() || n_grid.is_empty() {
        return Err(Error::InvalidConfig("t and N grids must be nonempty".into()));
    }
    if n_grid.iter().any(|&n| n < 2) {
        return Err(Error::InvalidConfig("N values must be at least 2".into()));
    }
    for t in t_grid {
        if t.sign()? <= 0 {
            return Err(Error::InvalidConfig("t values must be positive".into()));
        }
    }
    let t_max = t_grid.iter().map(|t| t.to_f64()).fold(0.0, f64::max);
    let n_max = *n_grid.iter().max().expect("nonempty");
    let near = points_near(&ring, x, t_max, n_max as f64, DEFAULT_MAX_NODES)?;
    // Per point: exact |c| test against each N, and a sign per t (None if undecidable).
    let mut rows = Vec::new();
    for e in &near.points {
        let q = &e.c_abs;
        let c_ok: Vec<bool> =
            n_grid.iter().map(|&n| c_within(q, &LambdaRational::from_int(&ring, n))).collect::<Result<_>>()?;
        if !c_ok.iter().any(|&b| b) {
            continue;
        }
        let signs: Vec<Option<i32>> = t_grid
            .iter()
            .map(|t| match solution_sign(x, e.p(), q, t) {
                Ok(s) => Ok(Some(s)),
                Err(Error::PrecisionCap { .. }) => Ok(None),
                Err(err) => Err(err),
            })
            .collect::<Result<_>>()?;
        rows.push((c_ok, signs));
    }
    let mut counts = vec![vec![CountInterval { lo: 0, hi: 0 }; n_grid.len()]; t_grid.len()];
    for (c_ok, signs) in &rows {
        for (i, s) in signs.iter().enumerate() {
            for (j, &ok) in c_ok.iter().enumerate() {
                if !ok {
                    continue;
                }
                match s {
                    Some(1) => {
                        counts[i][j].lo += 1;
                        counts[i][j].hi += 1;
                    }
                    None => counts[i][j].hi += 1,
                    _ => {}
                }
            }
        }
    }
    let target = ConstantsTarget::rosen(k);
    let t_f: Vec<f64> = t_grid.iter().map(|t| t.to_f64()).collect();
    let slope_estimate =
        counts.iter().map(|row| row.iter().zip(n_grid).map(|(c, &n)| c.mid() / (n as f64).ln()).collect()).collect();
    let t0 = 0.5;
    Ok(CountingReport {
        k,
        x: x.to_string(),
        target_slope: t_f.iter().map(|&t| target.count_slope(t).expect("Rosen target")).collect(),
        beyond_t0: t_f.iter().map(|&t| t >= t0).collect(),
        t_grid: t_f,
        n_grid: n_grid.to_vec(),
        counts,
        slope_estimate,
        t0,
        complete: near.complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn q(ring: &LambdaRing, s: &str) -> LambdaRational {
        LambdaRational::parse(ring, s).unwrap()
    }

    fn cfg(k: u32, n: &str, lo: &str, hi: &str) -> EnumConfig {
        let r = ring_for(k).unwrap();
        EnumConfig::new(k, q(&r, n), q(&r, lo), q(&r, hi)).unwrap()
    }

    fn as_pairs(e: &Enumeration) -> Vec<(i64, i64)> {
        e.points
            .iter()
            .map(|p| match &p.point {
                ParabolicPoint::Finite { p, q } => {
                    (p.as_integer().unwrap().try_into().unwrap(), q.as_integer().unwrap().try_into().unwrap())
                }
                _ => unreachable!(),
            })
            .collect()
    }

    /// Reduced fractions p/q with q ≤ n in [lo, hi), sorted by q then value.
    fn farey(n: i64, lo: f64, hi: f64) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for qq in 1..=n {
            for p in ((lo * qq as f64).floor() as i64 - 1)..=((hi * qq as f64).ceil() as i64 + 1) {
                let x = p as f64 / qq as f64;
                if p.gcd(&qq) == 1 && x >= lo && x < hi {
                    v.push((p, qq));
                }
            }
        }
        v.sort_by(|a, b| a.1.cmp(&b.1).then((a.0 as f64 / a.1 as f64).total_cmp(&(b.0 as f64 / b.1 as f64))));
        v
    }

    #[test]
    fn small_windows_k3() {
        assert_eq!(as_pairs(&enumerate_points(&cfg(3, "1", "-0.5", "0.5")).unwrap()), vec![(0, 1)]);
        assert_eq!(as_pairs(&enumerate_points(&cfg(3, "2", "-0.5", "0.5")).unwrap()), vec![(0, 1), (-1, 2)]);
    }

    #[test]
    fn k3_matches_farey_oracle() {
        for (n, lo, hi) in [(30, "-0.5", "0.5"), (50, "0.1", "0.35"), (25, "-2.3", "1.7")] {
            let e = enumerate_points(&cfg(3, &n.to_string(), lo, hi)).unwrap();
            assert!(e.complete);
            let want = farey(n, lo.parse().unwrap(), hi.parse().unwrap());
            assert_eq!(as_pairs(&e), want, "N={n} [{lo}, {hi})");
        }
    }

    #[test]
    fn witnesses_have_det_one() {
        for k in [3, 4, 5, 7] {
            let e = enumerate_points(&cfg(k, "12", "-1", "1")).unwrap();
            assert!(!e.points.is_empty());
            let r = ring_for(k).unwrap();
            for p in &e.points {
                assert_eq!(p.witness.det(), r.one());
                assert_eq!(p.witness.act_on_infinity(), p.point);
            }
        }
    }

    #[test]
    fn filtering_matches_direct_enumeration() {
        for k in [4, 5, 6] {
            let big = enumerate_points(&cfg(k, "20", "-0.7", "0.9")).unwrap();
            let small = enumerate_points(&cfg(k, "9", "-0.7", "0.9")).unwrap();
            let r = ring_for(k).unwrap();
            let bound = LambdaRational::from_int(&r, 9);
            let filtered: Vec<_> =
                big.points.iter().filter(|p| c_within(&p.c_abs, &bound).unwrap()).map(|p| p.point.clone()).collect();
            assert_eq!(filtered, small.points.iter().map(|p| p.point.clone()).collect::<Vec<_>>(), "k={k}");
        }
    }

    #[test]
    fn wider_margin_finds_nothing_new() {
        for k in [4, 5, 7, 8] {
            let c = cfg(k, "15", "-0.4", "0.6");
            let ring = c.ring.clone();
            let normal = enumerate_points(&c).unwrap();
            let search = Search {
                ring: &ring,
                lambda: ring.lambda_f64(),
                c_max: 15.0,
                region: Region::Window { lo: -0.4, hi: 0.6, margin: 40.0 / prune_kappa(&ring) },
                max_nodes: DEFAULT_MAX_NODES,
            };
            let (nodes, complete) = search.run();
            assert!(complete);
            let lo = q(&ring, "-0.4");
            let hi = q(&ring, "0.6");
            let mut wide: Vec<ParabolicPoint> = nodes
                .iter()
                .map(|n| to_point(n).unwrap())
                .filter(|e| {
                    let v = e.point.to_rational().unwrap();
                    c_within(&e.c_abs, &q(&ring, "15")).unwrap()
                        && v.compare(&lo).unwrap() != Ordering::Less
                        && v.compare(&hi).unwrap() == Ordering::Less
                })
                .map(|e| e.point)
                .collect();
            let mut got: Vec<_> = normal.points.iter().map(|p| p.point.clone()).collect();
            wide.sort_by(|a, b| a.approx_f64().total_cmp(&b.approx_f64()));
            got.sort_by(|a, b| a.approx_f64().total_cmp(&b.approx_f64()));
            assert_eq!(got, wide, "k={k}");
        }
    }

    #[test]
    fn budget_flags_partial_result() {
        let mut c = cfg(3, "200", "-0.5", "0.5");
        c.max_nodes = 50;
        let e = enumerate_points(&c).unwrap();
        assert!(!e.complete);
    }

    #[test]
    fn t0_is_one_half() {
        for k in [3, 4, 5, 6] {
            let r = compute_t0(k, 12).unwrap();
            assert_eq!(r.t0, 0.5, "k={k}");
            assert_eq!(r.below_one, 0);
            assert!(r.elements_checked > 20);
        }
    }

    fn brute_count(x: f64, t: f64, n: i64) -> u64 {
        let mut c = 0;
        for qq in 1..=n {
            let lo = ((x - t) * qq as f64).floor() as i64 - 1;
            for p in lo..=lo + (2.0 * t * qq as f64) as i64 + 3 {
                if p.gcd(&qq) == 1 && (x - p as f64 / qq as f64).abs() * ((qq * qq) as f64) < t {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn k3_count_matches_brute_force() {
        let r = ring_for(3).unwrap();
        let x = q(&r, "0.31830988618379067153776752674502872406891929148091");
        let ts = ["0.05", "0.25", "0.4", "0.6"];
        let tg: Vec<_> = ts.iter().map(|s| q(&r, s)).collect();
        let ns = [2, 5, 10, 30, 50];
        let rep = count_solutions(3, &x, &tg, &ns).unwrap();
        for (i, t) in ts.iter().enumerate() {
            for (j, &n) in ns.iter().enumerate() {
                let c = rep.counts[i][j];
                assert!(c.is_exact());
                assert_eq!(c.lo, brute_count(x.to_f64(), t.parse().unwrap(), n as i64), "t={t} N={n}");
            }
        }
        assert_eq!(rep.beyond_t0, vec![false, false, false, true]);
    }

    #[test]
    fn counts_monotone() {
        let r = ring_for(5).unwrap();
        let x = q(&r, "0.1234567");
        let tg: Vec<_> = ["0.1", "0.2", "0.3"].iter().map(|s| q(&r, s)).collect();
        let rep = count_solutions(5, &x, &tg, &[10, 100, 1000]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i > 0 {
                    assert!(rep.counts[i][j].lo >= rep.counts[i - 1][j].lo);
                }
                if j > 0 {
                    assert!(rep.counts[i][j].lo >= rep.counts[i][j - 1].lo);
                }
            }
        }
    }

    #[test]
    fn quadratic_band_cases() {
        let b = quadratic_band(0.0, 1.0, 2.0);
        assert_eq!(b, vec![(-2.0, 2.0)]);
        // |y² − 10y| ≤ 1: two bands near 0 and 10.
        let b = quadratic_band(1.0, -10.0, 1.0);
        assert_eq!(b.len(), 2);
        assert!(b[0].0 < 0.0 && b[0].1 > 0.0 && b[1].0 < 10.0 && b[1].1 > 10.0);
    }
}
