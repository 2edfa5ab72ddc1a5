mod common;

use caylink::graph::construction_plan;
use caylink::interval::Interval;
use caylink::motion::*;
use caylink::realize::{realize, ForwardType, Linkage};
use caylink::space::{elr_full, nested_quad_fixture, Q1_SIDES};
use caylink::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ft(s: &str) -> ForwardType {
    s.parse().unwrap()
}

/// Checks the hop discipline of a path.
fn check_path(p: &MotionPath) {
    for (w, t) in p.legs.windows(2).zip(&p.transitions) {
        let diff: Vec<usize> = (1..=w[0].sigma.len()).filter(|&k| w[0].sigma.get(k) != w[1].sigma.get(k)).collect();
        assert_eq!(diff, vec![t.step]);
        for iv in [w[0].interval, w[1].interval] {
            assert!(iv.lo == t.lf || iv.hi == t.lf, "{} not an end of {iv}", t.lf);
        }
        assert_eq!(w[0].to, t.lf);
        assert_eq!(w[1].from, t.lf);
    }
    if let (Some(f), Some(l)) = (p.legs.first(), p.legs.last()) {
        assert!(f.interval.contains(p.start.lf) && l.interval.contains(p.target.lf));
    }
}

#[test]
fn flips() {
    assert_eq!(flip_at_endpoint(&ft("++"), 2), ft("+-"));
    assert_eq!(flip_at_endpoint(&flip_at_endpoint(&ft("+-+"), 3), 3), ft("+-+"));
    assert_eq!(flip_at_endpoint(&ft("-"), 1), ft("+"));
}

#[test]
fn triangle_flips_across_the_collinear_point() {
    let lk = Linkage::from_bars(&[(0, 2, 3.0), (2, 1, 5.0)]).unwrap();
    let plan = construction_plan(lk.graph(), (0, 1)).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    let iv = Interval::new(2.0, 8.0);
    let (tau, next, k) = adjacent_interval(&space, &ft("+"), iv, End::Hi, &tol).unwrap().unwrap();
    assert_eq!((tau, next, k), (ft("-"), iv, 1));
    // the two mirror images meet at both ends, so they form one loop with two paths
    let a = realize(&lk, &plan, 5.0, &ft("+")).unwrap();
    let b = realize(&lk, &plan, 5.0, &ft("-")).unwrap();
    let r = find_paths(&space, &plan, &a, &b, &tol).unwrap();
    assert_eq!(r.case, MotionCase::OtherTypeConnected);
    assert_eq!(r.paths.len(), 2);
    r.paths.iter().for_each(check_path);
}

#[test]
fn four_bar_crank_has_two_paths() {
    // a short crank 0-1 turns fully against the rest
    let lk = Linkage::from_bars(&[(0, 1, 1.0), (1, 2, 3.0), (2, 3, 3.0), (3, 0, 3.0)]).unwrap();
    let plan = construction_plan(lk.graph(), (0, 2)).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    let sigma = |b| ForwardType::from_bits(2, b);
    let (a, b) = (realize(&lk, &plan, 3.0, &sigma(0)).unwrap(), realize(&lk, &plan, 3.0, &sigma(1)).unwrap());
    let r = find_paths(&space, &plan, &a, &b, &tol).unwrap();
    assert_eq!(r.paths.len(), 2, "{:?}", space.by_type.keys().collect::<Vec<_>>());
    let lens: Vec<usize> = r.paths.iter().map(|p| p.legs.len()).collect();
    assert_eq!(lens, vec![2, 2]);
}

#[test]
fn identical_and_same_interval() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    let (sigma, o) = space.by_type.iter().next().unwrap();
    let iv = o.set.intervals()[0];
    let a = realize(&lk, &plan, iv.lo + 0.25 * iv.width(), sigma).unwrap();
    let b = realize(&lk, &plan, iv.lo + 0.75 * iv.width(), sigma).unwrap();
    let r = find_paths(&space, &plan, &a, &a, &tol).unwrap();
    assert_eq!(r.case, MotionCase::SameInterval);
    let legs = &r.paths[0].legs;
    assert_eq!(legs.len(), 1);
    assert_eq!(legs[0].from, legs[0].to);
    assert_eq!(sample_motion(&lk, &plan, &r.paths[0], 5).unwrap().len(), 1);
    let p = path_same_minimal_type(&space, &plan, &a, &b, &tol).unwrap();
    assert_eq!(p.legs.len(), 1);
    assert_eq!(p.legs[0].direction, Direction::Up);
    let frames = sample_motion(&lk, &plan, &p, 3).unwrap();
    let lfs: Vec<f64> = frames.iter().map(|f| f.dist(1, 3)).collect();
    assert!(lfs.windows(2).all(|w| w[0] < w[1]), "{lfs:?}");
}

#[test]
fn minimal_type_mismatch_is_refused() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    // one forward type spanning both sides of the gap has two reverse types
    let two = space.by_type.iter().find(|(_, o)| o.set.len() == 2);
    let Some((sigma, o)) = two else { return };
    let a = realize(&lk, &plan, o.set.intervals()[0].mid(), sigma).unwrap();
    let b = realize(&lk, &plan, o.set.intervals()[1].mid(), sigma).unwrap();
    assert!(matches!(path_same_minimal_type(&space, &plan, &a, &b, &tol), Err(Error::TypeMismatch(_))));
}

#[test]
fn outside_the_space_gives_nothing() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    assert!(paths_between_cayley_configs(&space, 3.0, 8.0, &tol).unwrap().is_empty());
    let hi = space.union.hull().unwrap().hi;
    for (s, o) in &space.by_type {
        if o.set.intervals().last().unwrap().hi == hi {
            let iv = *o.set.intervals().last().unwrap();
            let adj = adjacent_interval(&space, s, iv, End::Hi, &tol).unwrap();
            assert!(adj.is_none_or(|(_, next, _)| next.hi == hi));
        }
    }
}

#[test]
fn frames_converge_across_transitions() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let tol = lk.tolerances();
    // I1 and I2 are separate components; inside I1 types change at 7.49
    assert!(paths_between_cayley_configs(&space, 7.2, 8.0, &tol).unwrap().is_empty());
    let paths = paths_between_cayley_configs(&space, 7.2, 7.4, &tol).unwrap();
    let p = paths.iter().find(|p| p.legs.len() >= 2).expect("a path with a transition");
    let jump = |n: usize| {
        let f = sample_motion(&lk, &plan, p, n).unwrap();
        f.windows(2)
            .map(|w| w[0].points.iter().map(|(v, a)| a.dist(w[1].point(*v))).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };
    let (a, b) = (jump(50), jump(5000));
    assert!(b < a && b < 0.1, "{a} {b}");
}

#[test]
fn paths_match_the_connectivity_oracle() {
    let fixtures = vec![
        nested_quad_fixture(1, 1e-5, Q1_SIDES).unwrap(),
        nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap(),
        nested_quad_fixture(1, 1e-5, [3.0, 2.5, 2.0, 1.5]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (lk, plan) in fixtures {
        let space = elr_full(&lk, &plan).unwrap();
        let tol = lk.tolerances();
        let h = space.union.hull().unwrap();
        let mut oracle = common::Oracle::new(&lk, &plan, 0.5 * h.lo, 1.5 * h.hi, 20000);
        let configs: Vec<(ForwardType, Interval)> =
            space.by_type.iter().flat_map(|(s, o)| o.set.iter().map(move |iv| (s.clone(), *iv))).collect();
        let pick = |rng: &mut ChaCha8Rng| {
            let (s, iv) = &configs[rng.gen_range(0..configs.len())];
            let lf = iv.lo + rng.gen_range(0.1..0.9) * iv.width();
            (s.clone(), lf, realize(&lk, &plan, lf, s).unwrap())
        };
        for _ in 0..60 {
            let (s, a, ra) = pick(&mut rng);
            let (t, b, rb) = pick(&mut rng);
            let r = find_paths(&space, &plan, &ra, &rb, &tol).unwrap();
            assert!(r.paths.len() <= 2);
            r.paths.iter().for_each(check_path);
            let want = oracle.connected(&s, a, &t, b).expect("oracle misses a sample");
            assert_eq!(!r.paths.is_empty(), want, "{s}@{a} -> {t}@{b}: {:?}", r.case);
        }
    }
}
