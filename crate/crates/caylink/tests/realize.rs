use caylink::geom::{Point, Tolerances};
use caylink::graph::construction_plan;
use caylink::realize::*;
use caylink::space::{nested_quad_fixture, Q1_SIDES};
use caylink::Error;
use proptest::prelude::*;

#[test]
fn q1_diagonal_at_the_range_ends() {
    let (lk, plan) = nested_quad_fixture(1, 1e-5, Q1_SIDES).unwrap();
    let f2 = |lf: f64| {
        (0..4)
            .filter_map(|b| realize(&lk, &plan, lf, &ForwardType::from_bits(2, b)).ok())
            .map(|r| r.dist(2, 4))
            .fold(f64::NAN, f64::max)
    };
    assert!((f2(7.0) - 8.36).abs() < 0.005, "{}", f2(7.0));
    // the worked example prints 7.42 here; the law of cosines gives 7.40
    assert!((f2(9.0) - 7.40).abs() < 0.005, "{}", f2(9.0));
    let err = realize(&lk, &plan, 20.0, &ForwardType::uniform(2, 1)).unwrap_err();
    assert!(matches!(err, Error::TriangleViolation { step: 1 }));
}

#[test]
fn types_round_trip() {
    let (lk, plan) = nested_quad_fixture(3, 1e-5, Q1_SIDES).unwrap();
    let tol = lk.tolerances();
    let rev = reverse_plans(&plan).unwrap();
    for b in 0..16 {
        let sigma = ForwardType::from_bits(4, b);
        let Ok(r) = realize(&lk, &plan, 7.3, &sigma) else { continue };
        assert!(r.residual(&lk) < 1e-12);
        assert_eq!(forward_type_of(&r, &plan, &tol), sigma);
        let m = minimal_type_of(&r, &plan, &rev, &tol);
        let mm = minimal_type_of(&r.mirrored(), &plan, &rev, &tol);
        assert!(m.reverse.iter().zip(&mm.reverse).all(|(a, b)| a == b), "reverse types are mirror invariant");
    }
}

#[test]
fn bad_base_lengths() {
    let lk = Linkage::from_bars(&[(0, 1, 3.0), (1, 2, 4.0)]).unwrap();
    let plan = construction_plan(lk.graph(), (0, 2)).unwrap();
    let s = ForwardType::uniform(1, 1);
    for lf in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(matches!(realize(&lk, &plan, lf, &s), Err(Error::DomainError(_))));
    }
    assert!(realize(&lk, &plan, 5.0, &ForwardType(vec![])).is_err());
}

#[test]
fn extremes_of_one_triangle() {
    let lk = Linkage::from_bars(&[(0, 1, 3.0), (1, 2, 4.0)]).unwrap();
    let plan = construction_plan(lk.graph(), (0, 2)).unwrap();
    let mut lfs: Vec<f64> = extreme_realizations(&lk, &plan, 1).unwrap().iter().map(|x| x.lf).collect();
    lfs.sort_by(f64::total_cmp);
    lfs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    assert_eq!(lfs.len(), 2);
    assert!((lfs[0] - 1.0).abs() < 1e-12 && (lfs[1] - 7.0).abs() < 1e-12);
}

#[test]
fn orientation_zero_band() {
    let tol = Tolerances::default();
    let (a, b) = (Point::ORIGIN, Point::new(1.0, 0.0));
    assert_eq!(local_orientation(a, b, Point::new(0.5, 1e-12), &tol), 0);
    assert_eq!(local_orientation(a, b, Point::new(0.5, 1e-3), &tol), 1);
    assert_eq!(local_orientation(a, b, Point::new(0.5, -1e-3), &tol), -1);
}

proptest! {
    #[test]
    fn step_hits_both_distances(r1 in 0.1f64..10.0, r2 in 0.1f64..10.0, t in 0.01f64..0.99, s in prop::bool::ANY) {
        let lo = (r1 - r2).abs();
        let d = lo + t * (r1 + r2 - lo);
        let pw = Point::new(d * 0.6, d * 0.8);
        let sigma = if s { 1 } else { -1 };
        let v = realize_step(Point::ORIGIN, pw, r1, r2, sigma, &Tolerances::default()).unwrap();
        prop_assert!((v.dist(Point::ORIGIN) - r1).abs() < 1e-9 * r1.max(1.0));
        prop_assert!((v.dist(pw) - r2).abs() < 1e-9 * r2.max(1.0));
        let o = local_orientation(Point::ORIGIN, pw, v, &Tolerances::default());
        prop_assert!(o == 0 || o == sigma);
    }

    #[test]
    fn beyond_the_range_fails(r1 in 0.1f64..10.0, r2 in 0.1f64..10.0, extra in 0.01f64..5.0) {
        let pw = Point::new(r1 + r2 + extra, 0.0);
        let e = realize_step(Point::ORIGIN, pw, r1, r2, 1, &Tolerances::default());
        let bad = matches!(e, Err(Error::TriangleViolation { .. }));
        prop_assert!(bad);
    }
}
