mod common;

use std::collections::BTreeMap;

use caylink::geom::Point;
use caylink::graph::{construction_plan, ConstructionPlan, is_globally_rigid, last_level_and_paths, Edge, Graph};
use caylink::realize::{Linkage, Realization};
use caylink::space::{elr_full, nested_quad_fixture, Q1_SIDES};
use caylink::vector::*;
use caylink::Error;

/// Removing any single entry loses global rigidity.
fn minimal(plan: &ConstructionPlan, ccv: &CompleteCayleyVector) -> bool {
    let g = skeleton(plan);
    (0..ccv.len()).all(|i| {
        let mut less = ccv.clone();
        less.entries.remove(i);
        !is_globally_rigid(&less.augmented(&g))
    })
}

#[test]
fn single_step_is_f_alone() {
    let lk = Linkage::from_bars(&[(0, 2, 3.0), (2, 1, 5.0)]).unwrap();
    let plan = construction_plan(lk.graph(), (0, 1)).unwrap();
    let ccv = minimum_ccv_1path(&plan).unwrap();
    assert_eq!(ccv.entries, vec![Edge::new(0, 1)]);
    assert!(certify(&plan, &ccv));
}

#[test]
fn nested_quads_take_the_far_corner() {
    for k in 2..=7 {
        let (_, plan) = nested_quad_fixture(k, 1e-5, Q1_SIDES).unwrap();
        let ccv = minimum_ccv_1path(&plan).unwrap();
        assert_eq!(ccv.entries, vec![Edge::new(1, 3), Edge::new(1, k as u32 + 3)]);
        assert!(certify(&plan, &ccv), "k = {k}");
        assert!(minimal(&plan, &ccv), "k = {k}");
    }
}

#[test]
fn two_path_graphs_are_refused_by_the_minimum_rule() {
    let g = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]);
    let plan = construction_plan(&g, (1, 3)).unwrap();
    assert!(matches!(minimum_ccv_1path(&plan), Err(Error::NotOnePath { .. })));
    // f separates 2 from 4, so the first phase joins them
    let ccv = minimal_ccv_general(&plan).unwrap();
    assert_eq!(ccv.entries, vec![Edge::new(1, 3), Edge::new(2, 4)]);
    assert!(certify(&plan, &ccv));
}

#[test]
fn general_vector_on_a_two_path_graph() {
    // v2, v3, v5 on f = (0, 1); v4 on (2, 3); v6 on (3, 5)
    let g = Graph::from_edges([(0, 2), (2, 1), (0, 3), (3, 1), (0, 5), (5, 1), (2, 4), (4, 3), (3, 6), (6, 5)]);
    let plan = construction_plan(&g, (0, 1)).unwrap();
    let paths = last_level_and_paths(&plan);
    assert!(!paths.one_path);
    let ccv = minimal_ccv_general(&plan).unwrap();
    assert!(certify(&plan, &ccv), "{:?}", ccv.entries);
    let mut without_f = ccv.clone();
    without_f.entries.remove(0);
    assert!(minimal(&plan, &ccv) || minimal(&plan, &without_f), "{:?}", ccv.entries);
}

#[test]
fn random_one_path_vectors_certify() {
    let mut n = 0;
    for seed in 0..400u64 {
        let Some((_, plan)) = common::random_chain(seed, 8) else { continue };
        n += 1;
        let ccv = minimum_ccv_1path(&plan).unwrap();
        assert!(certify(&plan, &ccv), "seed {seed}: {:?}", ccv.entries);
        assert!(minimal(&plan, &ccv), "seed {seed}: {:?}", ccv.entries);
        let general = minimal_ccv_general(&plan).unwrap();
        assert!(certify(&plan, &general), "seed {seed}: {:?}", general.entries);
        let mut rest = general.clone();
        rest.entries.remove(0);
        assert!(minimal(&plan, &general) || minimal(&plan, &rest), "seed {seed}: {:?}", general.entries);
    }
    assert!(n >= 50);
}

#[test]
fn distance_vector_of_a_unit_square() {
    let pts = [(1, (0.0, 0.0)), (2, (1.0, 0.0)), (3, (1.0, 1.0)), (4, (0.0, 1.0))];
    let r = Realization { points: pts.iter().map(|&(v, (x, y))| (v, Point::new(x, y))).collect::<BTreeMap<_, _>>() };
    let ccv = CompleteCayleyVector { entries: vec![Edge::new(1, 3), Edge::new(2, 4)] };
    let d = cayley_distance_vector(&r, &ccv);
    assert!(d.iter().all(|x| (x - 2f64.sqrt()).abs() < 1e-15));
    assert_eq!(cayley_distance_vector(&r.mirrored(), &ccv), d);
}

#[test]
fn curve_projects_onto_the_space_and_is_injective() {
    for k in 2..=4 {
        let (lk, plan) = nested_quad_fixture(k, 1e-5, Q1_SIDES).unwrap();
        let space = elr_full(&lk, &plan).unwrap();
        let ccv = minimum_ccv_1path(&plan).unwrap();
        let samples = sample_cayley_curve(&lk, &plan, &space, &ccv, 200).unwrap();
        for (p, _) in &samples {
            assert_eq!(p.distances.len(), 2);
            assert!(space.union.contains(p.distances[0]));
        }
        for iv in space.union.iter() {
            assert!(samples.iter().any(|(p, _)| p.lf == iv.lo) && samples.iter().any(|(p, _)| p.lf == iv.hi));
        }
        let rep = injectivity_probe(&plan, &samples, 1e-9, 1e-3);
        assert_eq!(rep.violations, 0, "k = {k}: {rep:?}");
    }
}

#[test]
fn components_follow_motion() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let comps = motion_components(&space, &lk.tolerances()).unwrap();
    let ids: std::collections::BTreeSet<usize> = comps.values().copied().collect();
    // I1 pieces join across 7.49 and I2 pieces across 7.51 and 8.52
    assert!(ids.len() >= 2 && ids.len() < comps.len(), "{comps:?}");
}

#[test]
fn probe_catches_a_vector_that_is_too_short() {
    let (lk, plan) = nested_quad_fixture(2, 1e-5, Q1_SIDES).unwrap();
    let space = elr_full(&lk, &plan).unwrap();
    let f_only = CompleteCayleyVector { entries: vec![Edge::new(1, 3)] };
    assert!(!certify(&plan, &f_only));
    let samples = sample_cayley_curve(&lk, &plan, &space, &f_only, 200).unwrap();
    assert!(injectivity_probe(&plan, &samples, 1e-9, 1e-3).violations > 0);
}
