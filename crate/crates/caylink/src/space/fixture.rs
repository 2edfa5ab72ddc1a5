//! Nested quadrilaterals: the family whose Cayley space doubles with every step.
//!
//! Vertices are `1..=k+3`. `Q_1 = v4 v3 v2 v1`; step `j >= 2` adds `v_{j+3}` with bars to
//! `v_{j+2}` and `v_j`, closing `Q_j = v_{j+3} v_{j+2} v_{j+1} v_j`. The base non-edge
//! is `(v1, v3)`. Indices here are 1-based, one more than in the original write-up.

use std::collections::BTreeMap;

use crate::conic::QuadCurve;
use crate::error::Result;
use crate::graph::{construction_plan, ConstructionPlan, Edge, Graph, VertexId};
use crate::realize::Linkage;

/// Sides `(v4v3, v3v2, v2v1, v1v4)` of the first quadrilateral.
pub const Q1_SIDES: [f64; 4] = [8.0, 8.1, 7.9, 1.0];

/// How the two new bars of each step are chosen from the previous quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthRule {
    /// `s1 - s4 = (1+ε) l1`, `s1 + s4 = (1-ε) l2`, with `l1` the larger end value and
    /// `l2` the top of the previous curve. Where `ε` would not leave `s4 > 0` it is
    /// lowered to `(l2 - l1) / (2 (l1 + l2))`, which makes `s4 = (l2 - l1) / 4`.
    Epsilon(f64),
    /// `s1 ∓ s4` at the given fractions of the previous curve's `e2` range.
    Centered { lo: f64, hi: f64 },
}

/// `k` steps built with the ε rule.
pub fn nested_quad_fixture(k: usize, eps: f64, sides: [f64; 4]) -> Result<(Linkage, ConstructionPlan)> {
    nested_quad_fixture_with(k, LengthRule::Epsilon(eps), sides)
}

pub fn nested_quad_fixture_with(k: usize, rule: LengthRule, sides: [f64; 4]) -> Result<(Linkage, ConstructionPlan)> {
    assert!(k >= 1, "need at least one step");
    let mut lengths: BTreeMap<Edge, f64> = BTreeMap::new();
    let [s1, s2, s3, s4] = sides;
    lengths.insert(Edge::new(4, 3), s1);
    lengths.insert(Edge::new(3, 2), s2);
    lengths.insert(Edge::new(2, 1), s3);
    lengths.insert(Edge::new(1, 4), s4);
    for j in 2..=k as VertexId {
        // previous quad Q_{j-1} = v_{j+2} v_{j+1} v_j v_{j-1}
        let l = |a: VertexId, b: VertexId| lengths[&Edge::new(a, b)];
        let curve = QuadCurve::new(l(j + 2, j + 1), l(j + 1, j), l(j, j - 1), l(j - 1, j + 2))?;
        let (a, b) = match rule {
            LengthRule::Epsilon(eps) => {
                let l1 = curve.leftmost.e2.max(curve.rightmost.e2);
                let l2 = curve.top.e2;
                // shrink ε when it would leave no positive solution
                let eps = eps.min((l2 - l1) / (2.0 * (l1 + l2)));
                ((1.0 + eps) * l1, (1.0 - eps) * l2)
            }
            LengthRule::Centered { lo, hi } => {
                let r = curve.e2_range();
                (r.lo + lo * r.width(), r.lo + hi * r.width())
            }
        };
        lengths.insert(Edge::new(j + 3, j + 2), 0.5 * (a + b));
        lengths.insert(Edge::new(j, j + 3), 0.5 * (b - a));
    }
    let graph = Graph::from_edges(lengths.keys().map(|e| (e.0, e.1)));
    let linkage = Linkage::new(graph, lengths)?;
    let plan = construction_plan(linkage.graph(), (1, 3))?;
    Ok((linkage, plan))
}
