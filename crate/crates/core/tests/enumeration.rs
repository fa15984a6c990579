#![allow(clippy::mutable_key_type)]

use rosen::cf::{expand, Family};
use rosen::enumerate::{enumerate_points, points_near, solution_sign, EnumConfig, DEFAULT_MAX_NODES};
use rosen::lab::sampling::sample_point;
use rosen::moebius::ParabolicPoint;
use rosen::ring::LambdaRational;
use std::collections::HashSet;

fn solutions(
    points: &[rosen::enumerate::EnumeratedPoint],
    x: &LambdaRational,
    t: &LambdaRational,
) -> HashSet<ParabolicPoint> {
    points.iter().filter(|e| solution_sign(x, e.p(), &e.c_abs, t).unwrap() > 0).map(|e| e.point.clone()).collect()
}

#[test]
fn targeted_search_agrees_with_window_enumeration() {
    for k in [3, 4, 5, 6, 8] {
        let f = Family::rosen(k).unwrap();
        let r = f.ring();
        let one = LambdaRational::from_int(r, 1);
        for i in 0..4 {
            let x = sample_point(&f, 21, i, 128);
            let t = LambdaRational::parse(r, "0.6").unwrap();
            let cfg = EnumConfig::new(k, LambdaRational::from_int(r, 25), x.sub(&one).unwrap(), x.add(&one).unwrap())
                .unwrap();
            let full = enumerate_points(&cfg).unwrap();
            let near = points_near(r, &x, 0.6, 25.0, DEFAULT_MAX_NODES).unwrap();
            assert!(full.complete && near.complete);
            let a = solutions(&full.points, &x, &t);
            let b = solutions(&near.points, &x, &t);
            assert_eq!(a, b, "k={k} sample {i}");
            assert!(!a.is_empty());
        }
    }
}

#[test]
fn good_convergents_are_found() {
    for k in [3, 4, 7] {
        let f = Family::rosen(k).unwrap();
        let r = f.ring();
        let t = LambdaRational::parse(r, "0.5").unwrap();
        let x = sample_point(&f, 5, 0, 256);
        let near = points_near(r, &x, 0.5, 200.0, DEFAULT_MAX_NODES).unwrap();
        let found: HashSet<_> = near.points.iter().map(|e| e.point.clone()).collect();
        let e = expand(&f, &x, 40).unwrap();
        for (p, q) in e.convergents.iter().skip(1) {
            if q.approx_f64() <= 200.0 && solution_sign(&x, p, q, &t).unwrap() > 0 {
                assert!(found.contains(&ParabolicPoint::from_pair(p.clone(), q.clone())), "k={k} {p}/{q}");
            }
        }
    }
}

#[test]
fn witnesses_map_infinity_to_their_point() {
    let f = Family::rosen(5).unwrap();
    let r = f.ring();
    let cfg = EnumConfig::new(
        5,
        LambdaRational::from_int(r, 12),
        LambdaRational::from_int(r, 0),
        LambdaRational::from_int(r, 1),
    )
    .unwrap();
    let en = enumerate_points(&cfg).unwrap();
    assert!(en.points.len() > 10);
    for e in &en.points {
        assert!(e.witness.is_unimodular());
        assert_eq!(e.witness.act_on_infinity(), e.point);
    }
}
