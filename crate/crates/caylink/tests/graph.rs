use caylink::graph::*;
use caylink::Error;

fn k(n: u32) -> Graph {
    Graph::from_edges((0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

fn k33() -> Graph {
    Graph::from_edges((0..3).flat_map(|a| (3..6).map(move |b| (a, b))))
}

#[test]
fn rigidity_of_small_graphs() {
    assert!(is_minimally_rigid(&k(3)));
    assert!(is_globally_rigid(&k(4)));
    assert!(is_redundantly_rigid(&k(4)));
    let kite = k(4).without_edge(Edge::new(0, 2));
    assert!(is_minimally_rigid(&kite));
    assert!(!is_globally_rigid(&kite));
    assert!(!is_three_connected(&kite));
    assert!(is_minimally_rigid(&k33()));
    assert!(!is_rigid(&Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])));
    assert_eq!(rigidity_rank(&k(5)), 7);
}

#[test]
fn two_separators_of_a_kite() {
    let kite = k(4).without_edge(Edge::new(0, 2));
    assert_eq!(two_separators(&kite), vec![Edge::new(1, 3)]);
}

#[test]
fn tree_decomposability() {
    assert!(is_tree_decomposable(&k(3)).0);
    let quad = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
    assert!(is_tree_decomposable(&quad).0);
    assert!(!is_tree_decomposable(&k33()).0);
}

#[test]
fn plan_errors() {
    let quad = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]);
    assert!(matches!(construction_plan(&quad, (0, 1)), Err(Error::InvalidBase(_))));
    assert!(matches!(construction_plan(&quad, (0, 7)), Err(Error::InvalidBase(_))));
    let kite = k(4).without_edge(Edge::new(0, 2));
    assert!(matches!(construction_plan(&kite, (0, 2)), Err(Error::NotOneDof)));
    let g = k33().without_edge(Edge::new(0, 3));
    assert!(matches!(construction_plan(&g, (0, 3)), Err(Error::NotBaseNonEdge(_))));
}

#[test]
fn quadrilateral_plan() {
    let quad = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]);
    let plan = construction_plan(&quad, (0, 2)).unwrap();
    assert_eq!(plan.len(), 2);
    assert_eq!(plan.base(), (0, 2));
    for (i, s) in plan.steps().iter().enumerate() {
        assert_eq!(s.index, i + 1);
        assert_eq!(s.extreme_edge(), Edge::new(0, 2));
    }
    assert_eq!(plan.step(1).vertex, 1);
    assert_eq!(plan.step(2).vertex, 3);
    let p = last_level_and_paths(&plan);
    assert!(!p.one_path);
    assert_eq!(p.paths.len(), 2);
    assert!(has_low_cayley_complexity(&plan).low);
}

#[test]
fn nested_chain_is_one_path() {
    // Q1 = 4 3 2 1 from (1, 3), then v5 on (4, 3) and v6 on (5, 4)
    let g = Graph::from_edges([(4, 3), (3, 2), (2, 1), (1, 4), (5, 4), (5, 2), (6, 5), (6, 3)]);
    let plan = construction_plan(&g, (1, 3)).unwrap();
    assert_eq!(plan.len(), 4);
    let seq: Vec<Edge> = plan.base_pair_sequence().into_iter().map(|x| x.0).collect();
    assert_eq!(seq, vec![Edge::new(1, 3), Edge::new(2, 4), Edge::new(3, 5)]);
    let p = last_level_and_paths(&plan);
    assert!(p.one_path, "{:?}", p.last_level);
    assert!(has_low_cayley_complexity(&plan).low);
    assert_eq!(plan.dependencies(4), [1, 2, 3, 4].into_iter().collect());
    let x = extreme_graph(&plan, 3);
    assert!(x.is_minimally_rigid && x.is_tree_decomposable);
}

#[test]
fn clusters_cover_every_edge_once() {
    let g = Graph::from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 0)]);
    let cs = cluster_decomposition(&g);
    let mut n = 0;
    for e in g.edges() {
        let owners = cs.iter().filter(|c| c.contains(e.0) && c.contains(e.1)).count();
        assert_eq!(owners, 1, "{e:?}");
        n += 1;
    }
    assert_eq!(n, 6);
    assert_eq!(cs.iter().filter(|c| !c.is_trivial()).count(), 1);
}

#[test]
fn prism_extreme_graph_breaks_low_complexity() {
    // prism a b c / a' b' c' without the rung c c'; f = (a, b'); x hangs on (c, c')
    let (a, b2, b, a2, c, c2, x) = (0, 1, 2, 3, 4, 5, 6);
    let g = Graph::from_edges([(a, b), (b, c), (c, a), (a2, b2), (b2, c2), (c2, a2), (a, a2), (b, b2), (c, x), (x, c2)]);
    let plan = construction_plan(&g, (a, b2)).unwrap();
    let lc = has_low_cayley_complexity(&plan);
    assert_eq!(lc.failing_step, Some(3));
    let eg = extreme_graph(&plan, 3);
    assert_eq!((eg.graph.vertex_count(), eg.graph.edge_count()), (6, 9));
    assert!(eg.is_minimally_rigid && !eg.is_tree_decomposable);
}
