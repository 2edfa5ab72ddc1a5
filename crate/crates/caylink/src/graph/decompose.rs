//! Three-way cluster merging.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Edge, Graph, VertexId};

/// Maximal tree-decomposable subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: usize,
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
    /// Root of this cluster in [`Decomposition::nodes`].
    pub node: usize,
}

impl Cluster {
    pub fn is_trivial(&self) -> bool {
        self.edges.len() == 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }
}

/// One three-way merge. `shared[0]` joins parts 0 and 1, `shared[1]` parts 1 and 2,
/// `shared[2]` parts 0 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Merge {
    pub parts: [usize; 3],
    pub shared: [VertexId; 3],
    pub result: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<Edge>,
    /// `None` for a single-edge leaf.
    pub merge: Option<Merge>,
}

/// Result of greedy merging: the merge forest and its roots as clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub nodes: Vec<Node>,
    pub merges: Vec<Merge>,
    pub clusters: Vec<Cluster>,
}

fn shared(a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>) -> (usize, VertexId) {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut count = 0;
    let mut first = 0;
    for v in small {
        if large.contains(v) {
            if count == 0 {
                first = *v;
            }
            count += 1;
            if count > 1 {
                break;
            }
        }
    }
    (count, first)
}

fn find_triple(
    nodes: &[Node],
    alive: &BTreeSet<usize>,
    by_vertex: &BTreeMap<VertexId, BTreeSet<usize>>,
) -> Option<([usize; 3], [VertexId; 3])> {
    for &a in alive {
        for &x in &nodes[a].vertices {
            for &b in &by_vertex[&x] {
                if b == a || shared(&nodes[a].vertices, &nodes[b].vertices).0 != 1 {
                    continue;
                }
                for &y in &nodes[b].vertices {
                    if y == x {
                        continue;
                    }
                    for &c in &by_vertex[&y] {
                        if c == a || c == b || shared(&nodes[b].vertices, &nodes[c].vertices).0 != 1 {
                            continue;
                        }
                        let (n, z) = shared(&nodes[a].vertices, &nodes[c].vertices);
                        if n == 1 && z != x && z != y {
                            return Some(([a, b, c], [x, y, z]));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Greedy three-way merging starting from one component per edge.
///
/// Edges are seeded in the order of `order` (all edges, ascending, when `None`);
/// the resulting clusters do not depend on it.
pub fn decompose_with_order(g: &Graph, order: Option<&[Edge]>) -> Decomposition {
    let seeds: Vec<Edge> = match order {
        Some(o) => o.to_vec(),
        None => g.edges().iter().copied().collect(),
    };
    let mut nodes: Vec<Node> = seeds
        .iter()
        .map(|e| Node { vertices: BTreeSet::from([e.0, e.1]), edges: BTreeSet::from([*e]), merge: None })
        .collect();
    let mut alive: BTreeSet<usize> = (0..nodes.len()).collect();
    let mut by_vertex: BTreeMap<VertexId, BTreeSet<usize>> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        for &v in &n.vertices {
            by_vertex.entry(v).or_default().insert(i);
        }
    }
    let mut merges = Vec::new();
    while let Some((parts, sh)) = find_triple(&nodes, &alive, &by_vertex) {
        let id = nodes.len();
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for &p in &parts {
            alive.remove(&p);
            for &v in &nodes[p].vertices {
                by_vertex.get_mut(&v).unwrap().remove(&p);
            }
            vertices.extend(nodes[p].vertices.iter().copied());
            edges.extend(nodes[p].edges.iter().copied());
        }
        for &v in &vertices {
            by_vertex.get_mut(&v).unwrap().insert(id);
        }
        let m = Merge { parts, shared: sh, result: id };
        merges.push(m);
        nodes.push(Node { vertices, edges, merge: Some(m) });
        alive.insert(id);
    }
    let mut roots: Vec<usize> = alive.into_iter().collect();
    roots.sort_by(|&a, &b| {
        (nodes[a].vertices.iter().collect::<Vec<_>>(), nodes[a].edges.iter().collect::<Vec<_>>())
            .cmp(&(nodes[b].vertices.iter().collect::<Vec<_>>(), nodes[b].edges.iter().collect::<Vec<_>>()))
    });
    let clusters = roots
        .into_iter()
        .enumerate()
        .map(|(id, r)| Cluster { id, vertices: nodes[r].vertices.clone(), edges: nodes[r].edges.clone(), node: r })
        .collect();
    Decomposition { nodes, merges, clusters }
}

pub fn decompose(g: &Graph) -> Decomposition {
    decompose_with_order(g, None)
}

/// Maximal tree-decomposable subgraphs of `g`; every edge lies in exactly one.
pub fn cluster_decomposition(g: &Graph) -> Vec<Cluster> {
    decompose(g).clusters
}

/// Whether merging reaches a single component covering all of `g`. The decomposition
/// doubles as the certificate.
pub fn is_tree_decomposable(g: &Graph) -> (bool, Decomposition) {
    let d = decompose(g);
    let ok = g.edge_count() > 0 && d.clusters.len() == 1 && d.clusters[0].vertices.len() == g.vertex_count();
    (ok, d)
}

/// A nontrivial cluster replaced by a virtual edge between its two attachment vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub anchors: Edge,
    pub cluster: Cluster,
}

/// Replaces every nontrivial cluster that meets the rest of the graph in exactly two
/// vertices by a virtual edge between them. Vertices in `keep` always count as meeting
/// points. Repeats until no cluster qualifies.
pub fn reduce_two_shared_clusters(g: &Graph, keep: &[VertexId]) -> (Graph, Vec<Reduction>) {
    let mut g = g.clone();
    let mut out = Vec::new();
    loop {
        let clusters = cluster_decomposition(&g);
        let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for c in &clusters {
            for &v in &c.vertices {
                *count.entry(v).or_default() += 1;
            }
        }
        let hit = clusters.iter().find_map(|c| {
            if c.is_trivial() {
                return None;
            }
            let meet: Vec<VertexId> =
                c.vertices.iter().copied().filter(|v| count[v] > 1 || keep.contains(v)).collect();
            (meet.len() == 2).then(|| (c.clone(), Edge::new(meet[0], meet[1])))
        });
        let Some((c, anchors)) = hit else { break };
        let mut h = Graph::new();
        for &v in g.vertices() {
            if !c.vertices.contains(&v) || anchors.contains(v) {
                h.add_vertex(v);
            }
        }
        for &e in g.edges() {
            if !c.edges.contains(&e) {
                h.add_edge(e.0, e.1);
            }
        }
        h.add_edge(anchors.0, anchors.1);
        g = h;
        out.push(Reduction { anchors, cluster: c });
    }
    (g, out)
}
