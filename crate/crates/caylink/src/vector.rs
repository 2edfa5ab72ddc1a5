//! Complete Cayley vectors: non-edges that make the graph globally rigid, so that their
//! lengths name each realization exactly once.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Tolerances;
use crate::graph::{is_globally_rigid, is_three_connected, last_level_and_paths, two_separators, ConstructionPlan, Edge, Graph, VertexId};
use crate::interval::Interval;
use crate::motion::{adjacent_interval, End};
use crate::realize::{realize_within, ForwardType, Linkage, Realization};
use crate::space::CayleySpace;

/// Non-edges whose lengths, together with the bars, fix a realization; `entries[0]` is `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteCayleyVector {
    pub entries: Vec<Edge>,
}

impl CompleteCayleyVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn augmented(&self, g: &Graph) -> Graph {
        self.entries.iter().fold(g.clone(), |g, e| g.with_edge(e.0, e.1))
    }
}

/// The graph seen by rigidity tests: every cluster is a rigid body, so it becomes a
/// complete graph on its attachment vertices and its private vertices are dropped.
pub fn skeleton(plan: &ConstructionPlan) -> Graph {
    let (v0, v1) = plan.base();
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for c in plan.clusters() {
        for &v in &c.vertices {
            *count.entry(v).or_default() += 1;
        }
    }
    let mut g = Graph::new();
    for c in plan.clusters() {
        let att: Vec<VertexId> =
            c.vertices.iter().copied().filter(|&v| count[&v] > 1 || v == v0 || v == v1).collect();
        for (i, &a) in att.iter().enumerate() {
            g.add_vertex(a);
            for &b in &att[i + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// The skeleton plus `F` is globally rigid and every entry is a non-edge of `G`.
pub fn certify(plan: &ConstructionPlan, ccv: &CompleteCayleyVector) -> bool {
    let g = plan.graph();
    ccv.entries.iter().all(|e| !g.has_edge(e.0, e.1)) && is_globally_rigid(&ccv.augmented(&skeleton(plan)))
}

/// `⟨f⟩` for one step; otherwise `⟨f, (v0, vn)⟩`, or `⟨f, (v'0, vn)⟩` when `(v0, vn)` is a bar.
pub fn minimum_ccv_1path(plan: &ConstructionPlan) -> Result<CompleteCayleyVector> {
    let paths = last_level_and_paths(plan);
    if !paths.one_path {
        return Err(Error::NotOnePath { paths: paths.paths.len() });
    }
    let (v0, v1) = plan.base();
    let f = Edge::new(v0, v1);
    if plan.len() <= 1 {
        return Ok(CompleteCayleyVector { entries: vec![f] });
    }
    let vn = paths.paths[0].vertex;
    let g = plan.graph();
    let second = if !g.has_edge(v0, vn) {
        Edge::new(v0, vn)
    } else if !g.has_edge(v1, vn) {
        Edge::new(v1, vn)
    } else {
        return Err(Error::InvalidLinkage(format!("last vertex {vn} is joined to both ends of f")));
    };
    Ok(CompleteCayleyVector { entries: vec![f, second] })
}

/// Connected components of `g` without `removed`, as sets of vertices.
fn components_without(g: &Graph, removed: &[VertexId]) -> Vec<BTreeSet<VertexId>> {
    let nb = g.neighbours();
    let mut seen: BTreeSet<VertexId> = removed.iter().copied().collect();
    let mut out = Vec::new();
    for &s in g.vertices() {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in nb.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    comp.insert(w);
                    q.push_back(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Edges added in three phases until `G` is 3-connected and redundantly rigid.
///
/// Where a choice is free the lowest vertex ids are taken.
pub fn minimal_ccv_general(plan: &ConstructionPlan) -> Result<CompleteCayleyVector> {
    let g = plan.graph();
    let (v0, v1) = plan.base();
    let mut gp = skeleton(plan).with_edge(v0, v1);
    let mut entries = vec![Edge::new(v0, v1)];
    let last: Vec<VertexId> =
        last_level_and_paths(plan).last_level.into_iter().filter(|&v| v != v0 && v != v1).collect();
    let mut open: BTreeSet<VertexId> = last.iter().copied().collect();
    let add = |gp: &mut Graph, entries: &mut Vec<Edge>, a: VertexId, b: VertexId| {
        *gp = gp.with_edge(a, b);
        entries.push(Edge::new(a, b));
    };
    // (1) pair last-level vertices that f separates
    while two_separators(&gp).contains(&Edge::new(v0, v1)) {
        let comps = components_without(&gp, &[v0, v1]);
        let side = |v: VertexId| comps.iter().position(|c| c.contains(&v));
        let pair = open
            .iter()
            .flat_map(|&a| open.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a < b && side(a) != side(b));
        let Some((a, b)) = pair else { break };
        add(&mut gp, &mut entries, a, b);
        open.remove(&a);
        open.remove(&b);
    }
    // (2) pair the rest; a lone vertex goes to an end of f, or to another last-level vertex
    while let Some(&a) = open.first() {
        open.remove(&a);
        if let Some(&b) = open.first() {
            open.remove(&b);
            add(&mut gp, &mut entries, a, b);
        } else if !g.has_edge(v0, a) && !gp.has_edge(v0, a) {
            add(&mut gp, &mut entries, v0, a);
        } else if !g.has_edge(v1, a) && !gp.has_edge(v1, a) {
            add(&mut gp, &mut entries, v1, a);
        } else if let Some(&b) = last.iter().find(|&&b| b != a && !gp.has_edge(a, b)) {
            add(&mut gp, &mut entries, a, b);
        }
    }
    // (3) break the remaining 2-separators from a last-level vertex behind both of them
    let mut guard = gp.vertex_count() * gp.vertex_count();
    while !is_three_connected(&gp) && guard > 0 {
        guard -= 1;
        let mut progressed = false;
        for sep in two_separators(&gp) {
            let behind = last.iter().copied().find(|&k| {
                let anc = plan.ancestors(k);
                anc.contains(&sep.0) && anc.contains(&sep.1) && k != sep.0 && k != sep.1
            });
            let Some(k) = behind else { continue };
            let a = if !gp.has_edge(v0, k) { v0 } else { v1 };
            if a == k || gp.has_edge(a, k) {
                continue;
            }
            add(&mut gp, &mut entries, a, k);
            progressed = true;
            break;
        }
        if !progressed {
            break;
        }
    }
    Ok(CompleteCayleyVector { entries })
}

/// Lengths of the entries of `ccv` in `r`.
pub fn cayley_distance_vector(r: &Realization, ccv: &CompleteCayleyVector) -> Vec<f64> {
    ccv.entries.iter().map(|e| r.dist(e.0, e.1)).collect()
}

/// One sample of the Cayley curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CayleyCurvePoint {
    pub distances: Vec<f64>,
    pub sigma: ForwardType,
    pub lf: f64,
    /// Oriented intervals joined by motion share an id.
    pub component: usize,
}

/// Component id of every oriented interval, joining those that motion connects.
pub fn motion_components(space: &CayleySpace, tol: &Tolerances) -> Result<BTreeMap<(ForwardType, usize), usize>> {
    let nodes: Vec<(ForwardType, usize, Interval)> = space
        .by_type
        .iter()
        .flat_map(|(s, o)| o.set.iter().enumerate().map(move |(i, iv)| (s.clone(), i, *iv)))
        .collect();
    let index: BTreeMap<(ForwardType, u64, u64), usize> =
        nodes.iter().enumerate().map(|(n, (s, _, iv))| ((s.clone(), iv.lo.to_bits(), iv.hi.to_bits()), n)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (n, (s, _, iv)) in nodes.iter().enumerate() {
        for end in [End::Lo, End::Hi] {
            if let Some((t, next, _)) = adjacent_interval(space, s, *iv, end, tol)? {
                if let Some(&m) = index.get(&(t, next.lo.to_bits(), next.hi.to_bits())) {
                    let (a, b) = (find(&mut parent, n), find(&mut parent, m));
                    parent[a] = b;
                }
            }
        }
    }
    let mut ids = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (n, (s, i, _)) in nodes.iter().enumerate() {
        let root = find(&mut parent, n);
        let next = ids.len();
        out.insert((s.clone(), *i), *ids.entry(root).or_insert(next));
    }
    Ok(out)
}

/// Samples every oriented interval at `resolution` evenly spaced `l_f`, ends included.
pub fn sample_cayley_curve(
    linkage: &Linkage,
    plan: &ConstructionPlan,
    space: &CayleySpace,
    ccv: &CompleteCayleyVector,
    resolution: usize,
) -> Result<Vec<(CayleyCurvePoint, Realization)>> {
    let comps = motion_components(space, &linkage.tolerances())?;
    let jobs: Vec<(ForwardType, usize, Interval)> = space
        .by_type
        .iter()
        .flat_map(|(s, o)| o.set.iter().enumerate().map(move |(i, iv)| (s.clone(), i, *iv)))
        .collect();
    let n = resolution.max(1);
    let per: Vec<Result<Vec<(CayleyCurvePoint, Realization)>>> = jobs
        .par_iter()
        .map(|(s, i, iv)| {
            let count = if iv.is_point() { 1 } else { n };
            (0..count)
                .map(|j| {
                    let t = if count == 1 { 0.0 } else { j as f64 / (count - 1) as f64 };
                    let lf = iv.lo + t * iv.width();
                    let r = realize_within(linkage, plan, lf, s, *iv)?;
                    let point = CayleyCurvePoint {
                        distances: cayley_distance_vector(&r, ccv),
                        sigma: s.clone(),
                        lf,
                        component: comps[&(s.clone(), *i)],
                    };
                    Ok((point, r))
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for p in per {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InjectivityReport {
    pub points: usize,
    /// Pairs with vectors within the distance threshold.
    pub close_pairs: usize,
    /// Close pairs whose realizations differ by more than the shape threshold.
    pub violations: usize,
}

/// Looks for two samples with nearly equal vectors but different realizations.
///
/// Realizations are compared on the skeleton vertices, up to a reflection of the plane.
/// A vertex private to one cluster is left out: its side is fixed by the cluster chart,
/// so a mirror image moves it even when the rest of the realization matches.
pub fn injectivity_probe(
    plan: &ConstructionPlan,
    samples: &[(CayleyCurvePoint, Realization)],
    vector_tol: f64,
    shape_tol: f64,
) -> InjectivityReport {
    let keep = skeleton(plan).vertices().clone();
    let gap = |a: &Realization, b: &Realization| {
        keep.iter().map(|&v| a.point(v).dist(b.point(v))).fold(0.0, f64::max)
    };
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].0.distances[0].total_cmp(&samples[b].0.distances[0]));
    let mut close_pairs = 0;
    let mut violations = 0;
    for (x, &i) in order.iter().enumerate() {
        let di = &samples[i].0.distances;
        for &j in &order[x + 1..] {
            let dj = &samples[j].0.distances;
            if dj[0] - di[0] > vector_tol {
                break;
            }
            if di.iter().zip(dj).any(|(a, b)| (a - b).abs() > vector_tol) {
                continue;
            }
            close_pairs += 1;
            let (a, b) = (&samples[i].1, &samples[j].1);
            if gap(a, b).min(gap(&a.mirrored(), b)) > shape_tol {
                violations += 1;
            }
        }
    }
    InjectivityReport { points: samples.len(), close_pairs, violations }
}
