//! The JSON linkage document and its conversion to a [`Linkage`].

use std::collections::{BTreeMap, BTreeSet};

use caylink::geom::Point;
use caylink::graph::{construction_plan, ConstructionPlan, Edge, Graph, VertexId};
use caylink::realize::{ForwardType, Linkage};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::failure::{Failure, Outcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LinkageDocument {
    pub schema_version: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    pub base_non_edge: [VertexId; 2],
    /// Coordinates for nontrivial clusters, one map per cluster.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_placements: Option<Vec<BTreeMap<VertexId, [f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<Seed>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
}

/// A realization named by `l_f` and its forward type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seed {
    pub lf: f64,
    pub sigma: String,
}

impl Seed {
    pub fn sigma(&self) -> Outcome<ForwardType> {
        self.sigma.parse().map_err(|e| Failure::Parse(format!("seed type {:?}: {e}", self.sigma)))
    }
}

/// A parsed document with its linkage and construction plan.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub document: LinkageDocument,
    pub linkage: Linkage,
    pub plan: ConstructionPlan,
    pub hash: String,
}

impl LinkageDocument {
    /// Parses and validates; errors carry the line or the offending field.
    pub fn parse(text: &str) -> Outcome<LinkageDocument> {
        let doc: LinkageDocument = serde_json::from_str(text).map_err(|e| Failure::Parse(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Outcome<()> {
        let bad = |m: String| Err(Failure::Parse(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("schemaVersion {} is not supported (expected {SCHEMA_VERSION})", self.schema_version));
        }
        let mut ids = BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !ids.insert(v.id) {
                return bad(format!("vertices[{i}]: duplicate id {}", v.id));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            let name = format!("edges[{i}] ({}, {})", e.u, e.v);
            if !(e.length > 0.0) || !e.length.is_finite() {
                return bad(format!("{name}: length {} must be positive", e.length));
            }
            if e.u == e.v {
                return bad(format!("{name}: self-loop"));
            }
            for x in [e.u, e.v] {
                if !ids.contains(&x) {
                    return bad(format!("{name}: unknown vertex {x}"));
                }
            }
            if !seen.insert(Edge::new(e.u, e.v)) {
                return bad(format!("{name}: duplicate edge"));
            }
        }
        let [a, b] = self.base_non_edge;
        if a == b || !ids.contains(&a) || !ids.contains(&b) {
            return bad(format!("baseNonEdge ({a}, {b}) must name two distinct vertices"));
        }
        if seen.contains(&Edge::new(a, b)) {
            return bad(format!("baseNonEdge ({a}, {b}) is an edge"));
        }
        for (i, p) in self.cluster_placements.iter().flatten().enumerate() {
            if let Some(v) = p.keys().find(|v| !ids.contains(v)) {
                return bad(format!("clusterPlacements[{i}]: unknown vertex {v}"));
            }
        }
        for (i, s) in self.seeds.iter().flatten().enumerate() {
            s.sigma().map_err(|e| Failure::Parse(format!("seeds[{i}]: {e}")))?;
        }
        Ok(())
    }

    /// Sorted vertices and edges, each edge with its smaller id first.
    pub fn canonical(&self) -> LinkageDocument {
        let mut d = self.clone();
        d.vertices.sort_by_key(|v| v.id);
        for e in &mut d.edges {
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
        }
        d.edges.sort_by_key(|e| (e.u, e.v));
        d
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// SHA-256 of the compact canonical form, hex encoded.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&self.canonical()).expect("documents serialize");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_linkage(linkage: &Linkage, f: (VertexId, VertexId)) -> LinkageDocument {
        LinkageDocument {
            schema_version: SCHEMA_VERSION,
            vertices: linkage.graph().vertices().iter().map(|&id| VertexEntry { id, label: None }).collect(),
            edges: linkage.lengths().iter().map(|(e, &length)| EdgeEntry { u: e.0, v: e.1, length }).collect(),
            base_non_edge: [f.0, f.1],
            cluster_placements: None,
            seeds: None,
        }
    }

    /// Builds the linkage and its construction plan.
    pub fn load(&self) -> Outcome<Loaded> {
        self.validate()?;
        let mut g = Graph::new();
        let mut lengths = BTreeMap::new();
        for v in &self.vertices {
            g.add_vertex(v.id);
        }
        for e in &self.edges {
            lengths.insert(g.add_edge(e.u, e.v), e.length);
        }
        let placements: Vec<BTreeMap<VertexId, Point>> = self
            .cluster_placements
            .iter()
            .flatten()
            .map(|p| p.iter().map(|(&v, &[x, y])| (v, Point::new(x, y))).collect())
            .collect();
        let linkage = Linkage::with_placements(g, lengths, placements)?;
        let [a, b] = self.base_non_edge;
        let plan = construction_plan(linkage.graph(), (a, b))?;
        Ok(Loaded { document: self.clone(), linkage, plan, hash: self.hash() })
    }
}

/// Reads, validates and loads a document.
pub fn load_text(text: &str) -> Outcome<Loaded> {
    LinkageDocument::parse(text)?.load()
}
