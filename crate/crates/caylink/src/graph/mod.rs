//! Combinatorial layer: graphs, clusters, construction plans and rigidity tests.

mod decompose;
mod plan;
mod rigidity;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use decompose::{
    cluster_decomposition, decompose, decompose_with_order, is_tree_decomposable, reduce_two_shared_clusters, Cluster,
    Decomposition, Merge, Node, Reduction,
};
pub use plan::{
    construction_plan, extreme_graph, has_low_cayley_complexity, last_level_and_paths,
    ConstructionPlan, ConstructionStep, ExtremeGraphSpec, LowComplexity, PathDecomposition,
    PathPlan,
};
pub use rigidity::{
    is_connected_without, is_globally_rigid, is_minimally_rigid, is_redundantly_rigid, is_rigid,
    is_three_connected, rigidity_rank, two_separators,
};

pub type VertexId = u32;

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Edge {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Simple undirected graph.
///
/// Self-loops are rejected and duplicate edges collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Builds a graph from an edge list; endpoints become vertices.
    ///
    /// # Panics
    ///
    /// Panics on a self-loop.
    pub fn from_edges<I: IntoIterator<Item = (VertexId, VertexId)>>(edges: I) -> Graph {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// # Panics
    ///
    /// Panics on a self-loop.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Edge {
        assert_ne!(a, b, "self-loop on vertex {a}");
        self.vertices.insert(a);
        self.vertices.insert(b);
        let e = Edge::new(a, b);
        self.edges.insert(e);
        e
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        self.edges.remove(&e)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn with_edge(&self, a: VertexId, b: VertexId) -> Graph {
        let mut g = self.clone();
        g.add_edge(a, b);
        g
    }

    pub fn without_edge(&self, e: Edge) -> Graph {
        let mut g = self.clone();
        g.edges.remove(&e);
        g
    }

    pub fn neighbours(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.0).unwrap().push(e.1);
            adj.get_mut(&e.1).unwrap().push(e.0);
        }
        adj
    }

    /// Subgraph induced on `vs`.
    pub fn induced(&self, vs: &BTreeSet<VertexId>) -> Graph {
        Graph {
            vertices: vs.intersection(&self.vertices).copied().collect(),
            edges: self.edges.iter().filter(|e| vs.contains(&e.0) && vs.contains(&e.1)).copied().collect(),
        }
    }

    /// Union of two graphs.
    pub fn union(&self, other: &Graph) -> Graph {
        Graph {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }
}
