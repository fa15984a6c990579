use num_bigint::BigInt;
use proptest::prelude::*;
use rosen::cf::{expand, Family, Orbit, OrbitConfig};
use rosen::enumerate::count_solutions;
use rosen::lab::cdf::{theta_cdf, uniform_grid};
use rosen::lab::sampling::{sample_point, seed_bits};
use rosen::moebius::{convergent_matrix, MoebiusMatrix, ParabolicPoint};
use rosen::ring::{make_ring, HeckeIndex, LambdaInt, LambdaRational, LambdaRing};
use std::cmp::Ordering;

fn ring(k: u32) -> LambdaRing {
    make_ring(HeckeIndex::new(k).unwrap())
}

fn elem(k: u32, coeffs: &[i64]) -> LambdaInt {
    let r = ring(k);
    r.from_coeffs(coeffs.iter().take(r.degree()).map(|&c| BigInt::from(c)).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1_000_000i64..1_000_000, 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(k in 3u32..=16, a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (elem(k, &a), elem(k, &b), elem(k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &ring(k).one(), a);
    }

    #[test]
    fn squares_are_positive(k in 3u32..=16, a in coeffs()) {
        let a = elem(k, &a);
        prop_assume!(!a.is_zero());
        prop_assert_eq!((&a * &a).sign().unwrap(), 1);
        prop_assert_eq!((-&(&a * &a)).sign().unwrap(), -1);
    }

    #[test]
    fn sign_matches_float_when_clear(k in 3u32..=16, a in coeffs()) {
        let a = elem(k, &a);
        let f = a.approx_f64();
        prop_assume!(f.abs() > 1e-3);
        prop_assert_eq!(a.sign().unwrap(), if f > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn enclosures_nest(k in 3u32..=16, a in coeffs(), lo in 8u64..64, extra in 1u64..200) {
        let a = elem(k, &a);
        let coarse = a.enclose(lo);
        let fine = a.enclose(lo + extra);
        prop_assert!(coarse.lower <= fine.upper && fine.lower <= coarse.upper);
        let r = a.enclose_rel(lo).unwrap();
        prop_assert!(r.contains_zero() == a.is_zero() || r.sign().is_some());
    }

    #[test]
    fn normalization_is_sign_invariant(k in 3u32..=10, p in coeffs(), q in coeffs()) {
        let (p, q) = (elem(k, &p), elem(k, &q));
        let a = ParabolicPoint::from_pair(p.clone(), q.clone());
        let b = ParabolicPoint::from_pair(-&p, -&q);
        prop_assert_eq!(&a, &b);
        if let ParabolicPoint::Finite { q, .. } = a {
            prop_assert_eq!(q.sign().unwrap(), 1);
        }
    }

    #[test]
    fn composition_multiplies_determinants(k in 3u32..=10, m1 in -5i64..5, m2 in -5i64..5, m3 in -5i64..5) {
        let r = ring(k);
        let s = MoebiusMatrix::s_gen(&r);
        let g = MoebiusMatrix::t_pow(&r, m1).compose(&s).unwrap().compose(&MoebiusMatrix::t_pow(&r, m2)).unwrap();
        let h = s.compose(&MoebiusMatrix::t_pow(&r, m3)).unwrap();
        prop_assert!(g.is_unimodular() && h.is_unimodular());
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.det(), &g.det() * &h.det());
        let x = LambdaRational::from_ratio(&r, BigInt::from(1), BigInt::from(7)).unwrap();
        if let (Some(hx), Some(ghx)) = (h.apply_exact(&x).unwrap(), gh.apply_exact(&x).unwrap()) {
            if let Some(ghx2) = g.apply_exact(&hx).unwrap() {
                prop_assert_eq!(ghx2.compare(&ghx).unwrap(), Ordering::Equal);
            }
        }
    }

    #[test]
    fn convergents_are_unimodular_and_reconstruct(k in 3u32..=12, index in 0u64..10_000) {
        let f = Family::rosen(k).unwrap();
        let x = sample_point(&f, 11, index, seed_bits(20));
        let e = expand(&f, &x, 20).unwrap();
        let mut orbit = Orbit::new(&f, &x, OrbitConfig::default()).unwrap();
        for n in 1..=e.len() {
            orbit.next_step().unwrap();
            let m = convergent_matrix(&e.convergents, n);
            prop_assert!(m.is_unimodular());
            prop_assert_eq!(e.convergents[n].1.sign().unwrap(), 1);
            let back = m.apply_exact(&orbit.current_point()).unwrap().unwrap();
            prop_assert_eq!(back.compare(&x).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn expansion_digits_are_admissible(k in 3u32..=12, index in 0u64..10_000) {
        let f = Family::rosen(k).unwrap();
        let x = sample_point(&f, 5, index, seed_bits(15));
        let e = expand(&f, &x, 15).unwrap();
        for d in &e.digits {
            prop_assert!(d.b >= 1 && (d.epsilon == 1 || d.epsilon == -1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cdf_is_monotone(k in 3u32..=8, seed in 0u64..1000) {
        let f = Family::rosen(k).unwrap();
        let c = theta_cdf(&f, 10, 20, seed, &uniform_grid(0.02, 2.0)).unwrap();
        prop_assert!(c.mass.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(c.mass.iter().all(|&m| (0.0..=1.0).contains(&m)));
        prop_assert_eq!(*c.mass.last().unwrap(), 1.0);
    }

    #[test]
    fn counts_grow_with_n_and_t(index in 0u64..1000) {
        let f = Family::rosen(3).unwrap();
        let r = f.ring();
        let x = sample_point(&f, 13, index, 128);
        let ts: Vec<LambdaRational> = ["0.1", "0.3", "0.5"].iter().map(|s| LambdaRational::parse(r, s).unwrap()).collect();
        let rep = count_solutions(3, &x, &ts, &[5, 50, 500]).unwrap();
        for row in &rep.counts {
            prop_assert!(row.windows(2).all(|w| w[0].lo <= w[1].lo));
        }
        for j in 0..3 {
            prop_assert!(rep.counts.windows(2).all(|w| w[0][j].lo <= w[1][j].lo));
        }
    }
}
