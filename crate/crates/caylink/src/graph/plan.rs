//! Construction plans from a base non-edge, extreme graphs and path structure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{cluster_decomposition, is_minimally_rigid, is_rigid, is_tree_decomposable, Cluster, Edge, Graph, VertexId};
use crate::error::{Error, Result};

/// `v_k ◁ (u_k, w_k)`: two clusters sharing the step vertex are appended, each meeting
/// the previously built graph in one base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    /// 1-based.
    pub index: usize,
    pub vertex: VertexId,
    /// `(u_k, w_k)`.
    pub base: (VertexId, VertexId),
    /// Cluster ids: the first contains `u_k`, the second `w_k`.
    pub clusters: (usize, usize),
}

impl ConstructionStep {
    pub fn extreme_edge(&self) -> Edge {
        Edge::new(self.base.0, self.base.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    graph: Graph,
    base: (VertexId, VertexId),
    clusters: Vec<Cluster>,
    steps: Vec<ConstructionStep>,
    /// Step that places each vertex; 0 for the endpoints of `f`.
    vertex_step: BTreeMap<VertexId, usize>,
}

/// Builds the construction of `g` from the base non-edge `f = (v_0, v'_0)`.
///
/// Among all eligible steps the one with the smallest step vertex is taken. A base pair
/// equal to `f` keeps the order of `f`; other base pairs are listed in ascending order.
pub fn construction_plan(g: &Graph, f: (VertexId, VertexId)) -> Result<ConstructionPlan> {
    let fe = Edge::new(f.0, f.1);
    if f.0 == f.1 || !g.has_vertex(f.0) || !g.has_vertex(f.1) || g.has_edge(f.0, f.1) {
        return Err(Error::InvalidBase(fe));
    }
    if is_rigid(g) {
        return Err(Error::NotOneDof);
    }
    if !is_tree_decomposable(&g.with_edge(f.0, f.1)).0 {
        return Err(Error::NotBaseNonEdge(fe));
    }
    let clusters = cluster_decomposition(g);
    let mut placed: BTreeSet<VertexId> = BTreeSet::from([f.0, f.1]);
    let mut used = vec![false; clusters.len()];
    let mut vertex_step: BTreeMap<VertexId, usize> = BTreeMap::from([(f.0, 0), (f.1, 0)]);
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(VertexId, VertexId, VertexId, usize, usize)> = None;
        for &v in g.vertices() {
            if placed.contains(&v) {
                continue;
            }
            let cs: Vec<usize> = (0..clusters.len()).filter(|&i| !used[i] && clusters[i].contains(v)).collect();
            for (i, &a) in cs.iter().enumerate() {
                for &b in &cs[i + 1..] {
                    let (ta, tb) = (&clusters[a], &clusters[b]);
                    if ta.vertices.intersection(&tb.vertices).count() != 1 {
                        continue;
                    }
                    let pa: Vec<VertexId> = ta.vertices.intersection(&placed).copied().collect();
                    let pb: Vec<VertexId> = tb.vertices.intersection(&placed).copied().collect();
                    if pa.len() != 1 || pb.len() != 1 || pa[0] == pb[0] {
                        continue;
                    }
                    let (u, w, cu, cw) = order_base(fe, f, pa[0], pb[0], a, b);
                    let cand = (v, u.min(w), u.max(w), cu.min(cw), cu.max(cw));
                    if best.is_none_or(|bst| cand < bst) {
                        best = Some(cand);
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        let Some((v, lo, hi, ca, cb)) = best else { break };
        // recover which cluster holds which base vertex
        let (c_lo, c_hi) = if clusters[ca].contains(lo) { (ca, cb) } else { (cb, ca) };
        let (u, w, cu, cw) = order_base(fe, f, lo, hi, c_lo, c_hi);
        let index = steps.len() + 1;
        for c in [cu, cw] {
            used[c] = true;
            for &x in &clusters[c].vertices {
                if placed.insert(x) {
                    vertex_step.insert(x, index);
                }
            }
        }
        steps.push(ConstructionStep { index, vertex: v, base: (u, w), clusters: (cu, cw) });
    }
    if used.iter().any(|u| !u) || placed.len() != g.vertex_count() {
        return Err(Error::NotBaseNonEdge(fe));
    }
    Ok(ConstructionPlan { graph: g.clone(), base: f, clusters, steps, vertex_step })
}

fn order_base(
    fe: Edge,
    f: (VertexId, VertexId),
    a: VertexId,
    b: VertexId,
    ca: usize,
    cb: usize,
) -> (VertexId, VertexId, usize, usize) {
    let first = if Edge::new(a, b) == fe { f.0 } else { a.min(b) };
    if a == first {
        (a, b, ca, cb)
    } else {
        (b, a, cb, ca)
    }
}

impl ConstructionPlan {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `(v_0, v'_0)`.
    pub fn base(&self) -> (VertexId, VertexId) {
        self.base
    }

    pub fn base_edge(&self) -> Edge {
        Edge::new(self.base.0, self.base.1)
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn steps(&self) -> &[ConstructionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step `k`, 1-based.
    ///
    /// # Panics
    ///
    /// Panics when `k` is out of range.
    pub fn step(&self, k: usize) -> &ConstructionStep {
        &self.steps[k - 1]
    }

    /// Step that places `v` (0 for the endpoints of `f`).
    pub fn step_of(&self, v: VertexId) -> Option<usize> {
        self.vertex_step.get(&v).copied()
    }

    /// Last constructed step vertex.
    pub fn last_vertex(&self) -> Option<VertexId> {
        self.steps.last().map(|s| s.vertex)
    }

    /// Vertices of `G_f(k)`.
    pub fn prefix_vertices(&self, k: usize) -> BTreeSet<VertexId> {
        self.vertex_step.iter().filter(|(_, &s)| s <= k).map(|(&v, _)| v).collect()
    }

    /// `G_f(k)`: the endpoints of `f` plus the clusters of steps `1..=k`.
    pub fn prefix_graph(&self, k: usize) -> Graph {
        let mut g = Graph::new();
        g.add_vertex(self.base.0);
        g.add_vertex(self.base.1);
        for s in &self.steps[..k] {
            for c in [s.clusters.0, s.clusters.1] {
                for e in &self.clusters[c].edges {
                    g.add_edge(e.0, e.1);
                }
            }
        }
        g
    }

    /// Steps that step `k` depends on, itself included.
    pub fn dependencies(&self, k: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![k];
        while let Some(j) = stack.pop() {
            if j == 0 || !out.insert(j) {
                continue;
            }
            let s = self.step(j);
            stack.push(self.vertex_step[&s.base.0]);
            stack.push(self.vertex_step[&s.base.1]);
        }
        out
    }

    /// Vertices that must be placed before `v` can be, plus `v` and the endpoints of `f`.
    pub fn ancestors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::from([self.base.0, self.base.1, v]);
        if let Some(k) = self.step_of(v).filter(|&k| k > 0) {
            for j in self.dependencies(k) {
                let s = self.step(j);
                for c in [s.clusters.0, s.clusters.1] {
                    out.extend(self.clusters[c].vertices.iter().copied());
                }
            }
        }
        out
    }

    /// Distinct base pairs in order of first use, with the first step using each.
    pub fn base_pair_sequence(&self) -> Vec<(Edge, usize)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in &self.steps {
            if seen.insert(s.extreme_edge()) {
                out.push((s.extreme_edge(), s.index));
            }
        }
        out
    }

    /// The sub-plan made of the given steps (1-based, ascending), renumbered from 1.
    pub fn restrict(&self, keep: &[usize]) -> ConstructionPlan {
        let mut cluster_map = BTreeMap::new();
        let mut clusters = Vec::new();
        for &k in keep {
            let s = self.step(k);
            for c in [s.clusters.0, s.clusters.1] {
                cluster_map.entry(c).or_insert_with(|| {
                    let mut cl = self.clusters[c].clone();
                    cl.id = clusters.len();
                    clusters.push(cl);
                    clusters.len() - 1
                });
            }
        }
        let mut graph = Graph::new();
        graph.add_vertex(self.base.0);
        graph.add_vertex(self.base.1);
        for c in &clusters {
            for e in &c.edges {
                graph.add_edge(e.0, e.1);
            }
        }
        let mut vertex_step = BTreeMap::from([(self.base.0, 0), (self.base.1, 0)]);
        let steps: Vec<ConstructionStep> = keep
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let s = self.step(k);
                let cs = (cluster_map[&s.clusters.0], cluster_map[&s.clusters.1]);
                for c in [cs.0, cs.1] {
                    for &x in &clusters[c].vertices {
                        vertex_step.entry(x).or_insert(i + 1);
                    }
                }
                ConstructionStep { index: i + 1, vertex: s.vertex, base: s.base, clusters: cs }
            })
            .collect();
        ConstructionPlan { graph, base: self.base, clusters, steps, vertex_step }
    }

    /// Cluster containing both vertices, if any.
    pub fn cluster_with(&self, a: VertexId, b: VertexId) -> Option<&Cluster> {
        self.clusters.iter().find(|c| c.contains(a) && c.contains(b))
    }
}

/// `Ĝ_f(k) = G_f(k-1) ∪ e_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeGraphSpec {
    pub step: usize,
    pub graph: Graph,
    pub extreme_edge: Edge,
    pub is_tree_decomposable: bool,
    pub is_minimally_rigid: bool,
}

/// # Panics
///
/// Panics unless `1 <= k <= plan.len()`.
pub fn extreme_graph(plan: &ConstructionPlan, k: usize) -> ExtremeGraphSpec {
    assert!(k >= 1 && k <= plan.len(), "step {k} out of range");
    let e = plan.step(k).extreme_edge();
    let graph = plan.prefix_graph(k - 1).with_edge(e.0, e.1);
    ExtremeGraphSpec {
        step: k,
        is_tree_decomposable: is_tree_decomposable(&graph).0,
        is_minimally_rigid: is_minimally_rigid(&graph),
        graph,
        extreme_edge: e,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowComplexity {
    pub low: bool,
    /// First step whose extreme graph is not tree-decomposable.
    pub failing_step: Option<usize>,
}

/// Every extreme graph is tree-decomposable.
pub fn has_low_cayley_complexity(plan: &ConstructionPlan) -> LowComplexity {
    let failing_step = (1..=plan.len()).find(|&k| !extreme_graph(plan, k).is_tree_decomposable);
    LowComplexity { low: failing_step.is_none(), failing_step }
}

/// Sub-plan of everything one last-level vertex depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub vertex: VertexId,
    /// Step indices in the parent plan.
    pub steps: Vec<usize>,
    pub plan: ConstructionPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDecomposition {
    /// Last-level vertices, endpoints of `f` included when they qualify.
    pub last_level: Vec<VertexId>,
    /// One path per last-level vertex other than the endpoints of `f`.
    pub paths: Vec<PathPlan>,
    pub one_path: bool,
}

/// Last level: vertices in exactly two clusters, each of which meets the rest of the
/// graph in exactly one further vertex.
pub fn last_level_and_paths(plan: &ConstructionPlan) -> PathDecomposition {
    let clusters = plan.clusters();
    let (v0, v1) = plan.base();
    let mut cdeg: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for c in clusters {
        for &v in &c.vertices {
            cdeg.entry(v).or_default().push(c.id);
        }
    }
    let mut last_level = Vec::new();
    for (&v, cs) in &cdeg {
        if cs.len() != 2 {
            continue;
        }
        let ok = cs.iter().all(|&c| {
            clusters[c]
                .vertices
                .iter()
                .filter(|&&x| x != v && (cdeg[&x].len() > 1 || x == v0 || x == v1))
                .count()
                == 1
        });
        if ok {
            last_level.push(v);
        }
    }
    let paths: Vec<PathPlan> = last_level
        .iter()
        .filter(|&&v| v != v0 && v != v1)
        .filter_map(|&v| {
            let k = plan.step_of(v)?;
            let steps: Vec<usize> = plan.dependencies(k).into_iter().collect();
            Some(PathPlan { vertex: v, plan: plan.restrict(&steps), steps })
        })
        .collect();
    let one_path = paths.len() == 1;
    PathDecomposition { last_level, paths, one_path }
}
