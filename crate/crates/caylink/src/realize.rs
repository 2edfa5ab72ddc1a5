//! Linkages, ruler-and-compass realization and orientation types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Rigid, Tolerances};
use crate::interval::Interval;
use crate::graph::{
    construction_plan, decompose, extreme_graph, reduce_two_shared_clusters, ConstructionPlan, ConstructionStep,
    Decomposition, Edge, Graph, Reduction, VertexId,
};

/// Internal coordinates of one nontrivial cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub points: BTreeMap<VertexId, Point>,
}

impl Chart {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.points.keys().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.points.contains_key(&v)
    }

    pub fn dist(&self, a: VertexId, b: VertexId) -> Option<f64> {
        Some(self.points.get(&a)?.dist(*self.points.get(&b)?))
    }
}

/// Graph with bar lengths and a rigid chart for each nontrivial cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Linkage {
    graph: Graph,
    lengths: BTreeMap<Edge, f64>,
    charts: Vec<Chart>,
    pair_chart: BTreeMap<Edge, usize>,
    tol: Tolerances,
}

impl Linkage {
    /// Builds charts for nontrivial clusters from the bar lengths. Each chart is
    /// assembled along the cluster's merge tree with every merge triangle turning
    /// counter-clockwise.
    pub fn new(graph: Graph, lengths: BTreeMap<Edge, f64>) -> Result<Linkage> {
        Linkage::with_placements(graph, lengths, Vec::new())
    }

    /// Like [`Linkage::new`], but a nontrivial cluster whose vertex set matches one
    /// of `placements` uses that chart instead. Placements must realize the
    /// cluster's bar lengths.
    pub fn with_placements(
        graph: Graph,
        lengths: BTreeMap<Edge, f64>,
        placements: Vec<BTreeMap<VertexId, Point>>,
    ) -> Result<Linkage> {
        let tol = Tolerances::from_env();
        for e in graph.edges() {
            match lengths.get(e) {
                Some(&l) if l > 0.0 && l.is_finite() => {}
                Some(&l) => return Err(Error::InvalidLinkage(format!("edge {e} has length {l}"))),
                None => return Err(Error::InvalidLinkage(format!("edge {e} has no length"))),
            }
        }
        if let Some(e) = lengths.keys().find(|e| !graph.has_edge(e.0, e.1)) {
            return Err(Error::InvalidLinkage(format!("length given for non-edge {e}")));
        }
        let d = decompose(&graph);
        let mut charts = Vec::new();
        for c in d.clusters.iter().filter(|c| !c.is_trivial()) {
            let chart = match placements.iter().find(|p| p.keys().copied().collect::<BTreeSet<_>>() == c.vertices) {
                Some(p) => {
                    for e in &c.edges {
                        let got = p[&e.0].dist(p[&e.1]);
                        let want = lengths[e];
                        if (got - want).abs() > 1e-9 * want.max(1.0) {
                            return Err(Error::InvalidLinkage(format!(
                                "placement gives {got} for edge {e} of length {want}"
                            )));
                        }
                    }
                    p.clone()
                }
                None => build_chart(&d, c.node, &lengths)?,
            };
            charts.push(Chart { points: chart });
        }
        let mut pair_chart = BTreeMap::new();
        for (i, ch) in charts.iter().enumerate() {
            let vs: Vec<VertexId> = ch.vertices().collect();
            for (a, &x) in vs.iter().enumerate() {
                for &y in &vs[a + 1..] {
                    pair_chart.insert(Edge::new(x, y), i);
                }
            }
        }
        Ok(Linkage { graph, lengths, charts, pair_chart, tol })
    }

    /// Convenience constructor from `(u, v, length)` triples.
    pub fn from_bars(bars: &[(VertexId, VertexId, f64)]) -> Result<Linkage> {
        let mut g = Graph::new();
        let mut lengths = BTreeMap::new();
        for &(u, v, l) in bars {
            if u == v {
                return Err(Error::InvalidLinkage(format!("self-loop on {u}")));
            }
            lengths.insert(g.add_edge(u, v), l);
        }
        Linkage::new(g, lengths)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Linkage {
        self.tol = tol;
        self
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lengths(&self) -> &BTreeMap<Edge, f64> {
        &self.lengths
    }

    pub fn length(&self, a: VertexId, b: VertexId) -> Option<f64> {
        self.lengths.get(&Edge::new(a, b)).copied()
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    /// Chart of the nontrivial cluster holding both vertices.
    pub fn chart_with(&self, a: VertexId, b: VertexId) -> Option<&Chart> {
        self.pair_chart.get(&Edge::new(a, b)).map(|&i| &self.charts[i])
    }

    /// Fixed distance between two vertices of a common cluster.
    pub fn dist(&self, a: VertexId, b: VertexId) -> Option<f64> {
        self.length(a, b).or_else(|| self.chart_with(a, b)?.dist(a, b))
    }

    /// Replaces clusters that meet the rest of the graph in two vertices by virtual
    /// bars. The removed interior vertices come back as [`Hanging`] charts.
    pub fn normalized(&self, f: (VertexId, VertexId)) -> Result<(Linkage, Vec<Hanging>)> {
        let (g, reductions) = reduce_two_shared_clusters(&self.graph, &[f.0, f.1]);
        let mut lengths = BTreeMap::new();
        let mut hanging = Vec::new();
        let mut placements = Vec::new();
        let dist_of = |a: VertexId, b: VertexId, hanging: &[Hanging]| {
            self.dist(a, b).or_else(|| {
                hanging.iter().find(|h| h.chart.contains(a) && h.chart.contains(b)).and_then(|h| h.chart.dist(a, b))
            })
        };
        for Reduction { anchors, cluster } in &reductions {
            let known = self.charts.iter().find(|c| c.points.keys().copied().collect::<BTreeSet<_>>() == cluster.vertices);
            let points = match known {
                Some(ch) => ch.points.clone(),
                None => {
                    // cluster built from earlier virtual bars: rebuild from the bars it holds
                    let sub = cluster.edges.iter().map(|e| (*e, dist_of(e.0, e.1, &hanging).unwrap_or(f64::NAN)));
                    let sub_lengths: BTreeMap<Edge, f64> = sub.collect();
                    let sub_graph = Graph::from_edges(cluster.edges.iter().map(|e| (e.0, e.1)));
                    let d = decompose(&sub_graph);
                    match d.clusters.first() {
                        Some(c) => build_chart(&d, c.node, &sub_lengths)?,
                        None => BTreeMap::new(),
                    }
                }
            };
            hanging.push(Hanging { anchors: *anchors, chart: Chart { points } });
        }
        for e in g.edges() {
            let l = dist_of(e.0, e.1, &hanging)
                .ok_or_else(|| Error::InvalidLinkage(format!("no length for reduced bar {e}")))?;
            lengths.insert(*e, l);
        }
        for ch in &self.charts {
            if ch.vertices().all(|v| g.has_vertex(v)) {
                placements.push(ch.points.clone());
            }
        }
        let lk = Linkage::with_placements(g, lengths, placements)?.with_tolerances(self.tol);
        Ok((lk, hanging))
    }
}

/// A cluster removed by normalization, to be placed on its two anchors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hanging {
    pub anchors: Edge,
    pub chart: Chart,
}

fn build_chart(d: &Decomposition, node: usize, lengths: &BTreeMap<Edge, f64>) -> Result<BTreeMap<VertexId, Point>> {
    let n = &d.nodes[node];
    let Some(m) = n.merge else {
        let e = *n.edges.iter().next().expect("leaf node holds one edge");
        let l = lengths[&e];
        return Ok(BTreeMap::from([(e.0, Point::ORIGIN), (e.1, Point::new(l, 0.0))]));
    };
    let parts: Vec<BTreeMap<VertexId, Point>> =
        m.parts.iter().map(|&p| build_chart(d, p, lengths)).collect::<Result<_>>()?;
    let [x, y, z] = m.shared;
    let dxy = parts[1][&x].dist(parts[1][&y]);
    let dxz = parts[0][&x].dist(parts[0][&z]);
    let dyz = parts[2][&y].dist(parts[2][&z]);
    let px = Point::ORIGIN;
    let py = Point::new(dxy, 0.0);
    let pz = realize_step(px, py, dxz, dyz, 1, &Tolerances::default())
        .map_err(|_| Error::InvalidLinkage(format!("cluster triangle ({x}, {y}, {z}) violates the triangle inequality")))?;
    let mut out = BTreeMap::new();
    for (part, (a, b, pa, pb)) in parts.iter().zip([(x, z, px, pz), (x, y, px, py), (y, z, py, pz)]) {
        let r = Rigid::aligning(part[&a], part[&b], pa, pb);
        for (&v, &p) in part {
            out.entry(v).or_insert_with(|| r.apply(p));
        }
    }
    Ok(out)
}

/// Places `v` at distance `r1` from `pu` and `r2` from `pw`, on the left of
/// `pu -> pw` when `sigma` is positive and on the right when negative.
///
/// A zero `sigma` is treated as positive. Lengths within `tol.tri` (relative) of a
/// triangle-inequality boundary are clamped to the collinear point. The error
/// carries step 0; callers substitute the real step.
///
/// ```
/// use caylink::geom::{Point, Tolerances};
/// use caylink::realize::realize_step;
///
/// let v = realize_step(Point::ORIGIN, Point::new(2f64.sqrt(), 0.0), 1.0, 1.0, 1, &Tolerances::default()).unwrap();
/// assert!((v.x - 0.5f64.sqrt()).abs() < 1e-12 && (v.y - 0.5f64.sqrt()).abs() < 1e-12);
/// ```
pub fn realize_step(pu: Point, pw: Point, r1: f64, r2: f64, sigma: i8, tol: &Tolerances) -> Result<Point> {
    let r3 = pu.dist(pw);
    let scale = r1.max(r2).max(r3);
    if r3 <= tol.tri * scale || scale == 0.0 {
        return Err(Error::DegenerateBase { step: 0 });
    }
    let slack = tol.tri * scale;
    if r3 > r1 + r2 + slack || r3 < (r1 - r2).abs() - slack {
        return Err(Error::TriangleViolation { step: 0 });
    }
    let x = (r1 * r1 + r3 * r3 - r2 * r2) / (2.0 * r3);
    let prod = (r1 + r2 + r3) * (r1 + r2 - r3) * (r1 - r2 + r3) * (-r1 + r2 + r3);
    let h = prod.max(0.0).sqrt() / (2.0 * r3);
    let y = if sigma < 0 { -h } else { h };
    let ex = (pw - pu) * (1.0 / r3);
    let ey = Point::new(-ex.y, ex.x);
    Ok(pu + ex * x + ey * y)
}

/// Sign of `cross(pw - pu, pv - pu)`; zero when its magnitude is at most
/// `tol.orient` times the squared scale of the triple.
pub fn local_orientation(pu: Point, pw: Point, pv: Point, tol: &Tolerances) -> i8 {
    let a = pw - pu;
    let b = pv - pu;
    let scale = a.norm().max(b.norm()).max((pv - pw).norm());
    let c = a.cross(b);
    if c.abs() <= tol.orient * scale * scale {
        0
    } else if c > 0.0 {
        1
    } else {
        -1
    }
}

/// Orientation signs indexed by construction step, written as a string over `+`, `-`, `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForwardType(pub Vec<i8>);

impl ForwardType {
    pub fn uniform(n: usize, s: i8) -> ForwardType {
        ForwardType(vec![s; n])
    }

    /// The `index`-th of the `2^n` types with entries in `{+1, -1}`, bit `i` set
    /// meaning entry `i` is negative.
    pub fn from_bits(n: usize, index: u64) -> ForwardType {
        ForwardType((0..n).map(|i| if index >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry for step `k` (1-based).
    pub fn get(&self, k: usize) -> i8 {
        self.0[k - 1]
    }

    /// Negates entry `k` (1-based).
    pub fn flip(&self, k: usize) -> ForwardType {
        let mut s = self.clone();
        s.0[k - 1] = -s.0[k - 1];
        s
    }

    /// Entries agree wherever both are nonzero, over the shorter length.
    pub fn compatible(&self, other: &ForwardType) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0 || a == b)
    }

    pub fn prefix(&self, k: usize) -> ForwardType {
        ForwardType(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn zeros(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &s)| s == 0).map(|(i, _)| i + 1).collect()
    }
}

impl fmt::Display for ForwardType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ForwardType {
    type Err = Error;

    fn from_str(s: &str) -> Result<ForwardType> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                _ => Err(Error::DomainError(format!("bad orientation character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(ForwardType)
    }
}

impl Serialize for ForwardType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ForwardType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ForwardType, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Orientation signs over the reverse construction of `G_f(k-1)` from `e_k`.
///
/// Each entry is the sign of the reverse step multiplied by the sign of the forward
/// step vertex `v_k` against `e_k`, so `-1` means the two lie on opposite sides of
/// the line through `e_k` when the reverse step is based on `e_k`. This makes the
/// type invariant under reflection of the whole realization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReverseType {
    pub step: usize,
    pub signs: ForwardType,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MinimalType {
    pub forward: ForwardType,
    pub reverse: Vec<ReverseType>,
}

impl MinimalType {
    /// Agreement on every entry that is nonzero in both.
    pub fn compatible(&self, other: &MinimalType) -> bool {
        self.forward.compatible(&other.forward)
            && self.reverse.len() == other.reverse.len()
            && self.reverse.iter().zip(&other.reverse).all(|(a, b)| a.step == b.step && a.signs.compatible(&b.signs))
    }
}

/// Cartesian coordinates for every placed vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Realization {
    pub points: BTreeMap<VertexId, Point>,
}

impl Realization {
    pub fn point(&self, v: VertexId) -> Point {
        self.points[&v]
    }

    pub fn dist(&self, a: VertexId, b: VertexId) -> f64 {
        self.points[&a].dist(self.points[&b])
    }

    /// Largest relative bar-length error over edges whose endpoints are both placed.
    pub fn residual(&self, linkage: &Linkage) -> f64 {
        linkage
            .lengths()
            .iter()
            .filter(|(e, _)| self.points.contains_key(&e.0) && self.points.contains_key(&e.1))
            .map(|(e, &l)| (self.dist(e.0, e.1) - l).abs() / l.max(1.0))
            .fold(0.0, f64::max)
    }

    /// Moves `a` to the origin and `b` onto the positive x-axis.
    pub fn canonical(&self, a: VertexId, b: VertexId) -> Realization {
        let (pa, pb) = (self.point(a), self.point(b));
        let r = Rigid::aligning(pa, pb, Point::ORIGIN, Point::new(1.0, 0.0));
        Realization { points: self.points.iter().map(|(&v, &p)| (v, r.apply(p))).collect() }
    }

    pub fn mirrored(&self) -> Realization {
        Realization { points: self.points.iter().map(|(&v, p)| (v, Point::new(p.x, -p.y))).collect() }
    }

    /// Places removed clusters back on their anchors, latest reduction first.
    pub fn with_hanging(&self, hanging: &[Hanging]) -> Realization {
        let mut out = self.clone();
        for h in hanging.iter().rev() {
            let (a, b) = (h.anchors.0, h.anchors.1);
            let r = Rigid::aligning(h.chart.points[&a], h.chart.points[&b], out.point(a), out.point(b));
            for (&v, &p) in &h.chart.points {
                out.points.entry(v).or_insert_with(|| r.apply(p));
            }
        }
        out
    }
}

fn place_cluster(linkage: &Linkage, pts: &mut BTreeMap<VertexId, Point>, a: VertexId, b: VertexId) {
    if let Some(ch) = linkage.chart_with(a, b) {
        let r = Rigid::aligning(ch.points[&a], ch.points[&b], pts[&a], pts[&b]);
        for (&v, &p) in &ch.points {
            pts.entry(v).or_insert_with(|| r.apply(p));
        }
    }
}

fn step_lengths(linkage: &Linkage, s: &ConstructionStep) -> Result<(f64, f64)> {
    let missing = |a, b| Error::InvalidLinkage(format!("no fixed distance between {a} and {b}"));
    let r1 = linkage.dist(s.base.0, s.vertex).ok_or_else(|| missing(s.base.0, s.vertex))?;
    let r2 = linkage.dist(s.vertex, s.base.1).ok_or_else(|| missing(s.vertex, s.base.1))?;
    Ok((r1, r2))
}

/// Places step `s` with orientation `sigma`.
fn place_step(linkage: &Linkage, s: &ConstructionStep, pts: &mut BTreeMap<VertexId, Point>, sigma: i8) -> Result<()> {
    let (u, w, v) = (s.base.0, s.base.1, s.vertex);
    let (r1, r2) = step_lengths(linkage, s)?;
    let pv = realize_step(pts[&u], pts[&w], r1, r2, sigma, &linkage.tol).map_err(|e| match e {
        Error::TriangleViolation { .. } => Error::TriangleViolation { step: s.index },
        Error::DegenerateBase { .. } => Error::DegenerateBase { step: s.index },
        e => e,
    })?;
    pts.insert(v, pv);
    place_cluster(linkage, pts, u, v);
    place_cluster(linkage, pts, v, w);
    Ok(())
}

/// Realizes steps `1..=k` with `v_0` at the origin and `v'_0` at `(lf, 0)`.
pub fn realize_prefix(
    linkage: &Linkage,
    plan: &ConstructionPlan,
    k: usize,
    lf: f64,
    sigma: &ForwardType,
) -> Result<Realization> {
    if !(lf > 0.0) || !lf.is_finite() {
        return Err(Error::DomainError(format!("base length {lf} must be positive")));
    }
    if sigma.len() < k {
        return Err(Error::DomainError(format!("type {sigma} is shorter than {k} steps")));
    }
    let (a, b) = plan.base();
    let mut pts = BTreeMap::from([(a, Point::ORIGIN), (b, Point::new(lf, 0.0))]);
    for s in &plan.steps()[..k] {
        place_step(linkage, s, &mut pts, sigma.get(s.index))?;
    }
    Ok(Realization { points: pts })
}

/// Realizes the whole plan; fails at the first step whose triangle cannot close.
///
/// ```
/// use caylink::graph::construction_plan;
/// use caylink::realize::{realize, ForwardType, Linkage};
///
/// let lk = Linkage::from_bars(&[(0, 1, 3.0), (1, 2, 4.0)]).unwrap();
/// let plan = construction_plan(lk.graph(), (0, 2)).unwrap();
/// let r = realize(&lk, &plan, 5.0, &"+".parse::<ForwardType>().unwrap()).unwrap();
/// assert!((r.dist(0, 1) - 3.0).abs() < 1e-12);
/// ```
pub fn realize(linkage: &Linkage, plan: &ConstructionPlan, lf: f64, sigma: &ForwardType) -> Result<Realization> {
    realize_prefix(linkage, plan, plan.len(), lf, sigma)
}

/// Realizes at `lf`, or at the nearest point inside `within` that realizes when `lf`
/// sits on an end a few ulps outside what the steps allow.
pub fn realize_within(
    linkage: &Linkage,
    plan: &ConstructionPlan,
    lf: f64,
    sigma: &ForwardType,
    within: Interval,
) -> Result<Realization> {
    let first = realize(linkage, plan, lf, sigma);
    if first.is_ok() || within.is_point() {
        return first;
    }
    let toward = if lf - within.lo < within.hi - lf { 1.0 } else { -1.0 };
    // up to the scale at which interval ends are merged
    for e in (8..=15).rev() {
        let d = (lf.abs().max(1.0) * 10f64.powi(-e)).min(0.5 * within.width());
        if let Ok(r) = realize(linkage, plan, lf + toward * d, sigma) {
            return Ok(r);
        }
    }
    first
}

/// Orientation of each step vertex against its base pair.
pub fn forward_type_of(r: &Realization, plan: &ConstructionPlan, tol: &Tolerances) -> ForwardType {
    ForwardType(
        plan.steps()
            .iter()
            .filter(|s| r.points.contains_key(&s.vertex))
            .map(|s| local_orientation(r.point(s.base.0), r.point(s.base.1), r.point(s.vertex), tol))
            .collect(),
    )
}

/// Plan of `G_f(k-1)` from `e_k`.
pub fn reverse_plan(plan: &ConstructionPlan, k: usize) -> Result<ConstructionPlan> {
    let s = plan.step(k);
    construction_plan(&plan.prefix_graph(k - 1), s.base).map_err(|_| Error::NotSupported { step: k })
}

/// Reverse type of the extreme graph of step `k`; see [`ReverseType`].
pub fn reverse_type_of(r: &Realization, plan: &ConstructionPlan, k: usize, tol: &Tolerances) -> Result<ReverseType> {
    let rev = reverse_plan(plan, k)?;
    Ok(reverse_type_with(r, plan, &rev, k, tol))
}

fn reverse_type_with(
    r: &Realization,
    plan: &ConstructionPlan,
    rev: &ConstructionPlan,
    k: usize,
    tol: &Tolerances,
) -> ReverseType {
    let s = plan.step(k);
    let own = local_orientation(r.point(s.base.0), r.point(s.base.1), r.point(s.vertex), tol);
    let raw = forward_type_of(r, rev, tol);
    ReverseType { step: k, signs: ForwardType(raw.0.iter().map(|&x| x * own).collect()) }
}

/// Reverse plans for every step, computed once.
pub fn reverse_plans(plan: &ConstructionPlan) -> Result<Vec<ConstructionPlan>> {
    (1..=plan.len()).map(|k| reverse_plan(plan, k)).collect()
}

/// Forward type plus the reverse type of every extreme graph.
pub fn minimal_type_of(
    r: &Realization,
    plan: &ConstructionPlan,
    reverse: &[ConstructionPlan],
    tol: &Tolerances,
) -> MinimalType {
    MinimalType {
        forward: forward_type_of(r, plan, tol),
        reverse: (1..=plan.len()).map(|k| reverse_type_with(r, plan, &reverse[k - 1], k, tol)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenericityReport {
    pub zero_length_edges: Vec<Edge>,
    /// Pairs of bars whose lengths are bitwise equal.
    pub duplicate_length_pairs: Vec<(Edge, Edge)>,
    /// Per probe realization, the number of collinear pairs of adjacent bars.
    pub collinear_adjacent_pairs: Vec<usize>,
}

impl GenericityReport {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.zero_length_edges {
            out.push(format!("bar {e} has zero length"));
        }
        for (a, b) in &self.duplicate_length_pairs {
            out.push(format!("bars {a} and {b} have identical lengths"));
        }
        for (i, &n) in self.collinear_adjacent_pairs.iter().enumerate() {
            if n > 1 {
                out.push(format!("probe {i} has {n} collinear pairs of adjacent bars"));
            }
        }
        out
    }
}

/// Advisory genericity checks. Never fails.
pub fn check_genericity(linkage: &Linkage, probes: &[Realization]) -> GenericityReport {
    let mut rep = GenericityReport::default();
    let bars: Vec<(Edge, f64)> = linkage.lengths().iter().map(|(e, l)| (*e, *l)).collect();
    for (i, &(e, l)) in bars.iter().enumerate() {
        if l == 0.0 {
            rep.zero_length_edges.push(e);
        }
        for &(e2, l2) in &bars[i + 1..] {
            if l.to_bits() == l2.to_bits() {
                rep.duplicate_length_pairs.push((e, e2));
            }
        }
    }
    let adj = linkage.graph().neighbours();
    let tol = linkage.tolerances();
    for r in probes {
        let mut count = 0;
        for (&v, ns) in &adj {
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    if r.points.contains_key(&a)
                        && r.points.contains_key(&b)
                        && local_orientation(r.point(v), r.point(a), r.point(b), &tol) == 0
                    {
                        count += 1;
                    }
                }
            }
        }
        rep.collinear_adjacent_pairs.push(count);
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Min,
    Max,
}

/// One realization of an extreme linkage, moved to the canonical frame of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeRealization {
    pub step: usize,
    pub which: Extreme,
    pub lf: f64,
    /// Measured type of steps `1..=step`; entry `step` is zero.
    pub forward: ForwardType,
    pub realization: Realization,
}

/// Default cap on the number of reverse orientations enumerated per extreme linkage.
pub const EXTREME_BUDGET: u128 = 1 << 20;

/// Every realization of both extreme linkages of step `k`, regardless of type.
pub fn extreme_realizations(linkage: &Linkage, plan: &ConstructionPlan, k: usize) -> Result<Vec<ExtremeRealization>> {
    let spec = extreme_graph(plan, k);
    if !spec.is_tree_decomposable {
        return Err(Error::NotSupported { step: k });
    }
    let rev = reverse_plan(plan, k)?;
    let needed = 1u128 << rev.len().min(127);
    if needed > EXTREME_BUDGET {
        return Err(Error::Budget { what: "reverse orientations", needed, cap: EXTREME_BUDGET });
    }
    let s = plan.step(k).clone();
    let (r1, r2) = step_lengths(linkage, &s)?;
    let (v0, v1) = plan.base();
    let tol = linkage.tolerances();
    let mut out = Vec::new();
    for (which, le) in [(Extreme::Min, (r1 - r2).abs()), (Extreme::Max, r1 + r2)] {
        if le <= tol.tri * r1.max(r2) {
            continue;
        }
        let (a, b) = rev.base();
        let start = BTreeMap::from([(a, Point::ORIGIN), (b, Point::new(le, 0.0))]);
        let mut found = Vec::new();
        enumerate(linkage, &rev, 0, start, &mut found);
        for mut pts in found {
            // the step vertex sits on the line of e_k
            let pu = pts[&s.base.0];
            let pw = pts[&s.base.1];
            let Ok(pv) = realize_step(pu, pw, r1, r2, 1, &tol) else { continue };
            pts.insert(s.vertex, pv);
            place_cluster(linkage, &mut pts, s.base.0, s.vertex);
            place_cluster(linkage, &mut pts, s.vertex, s.base.1);
            let lf = pts[&v0].dist(pts[&v1]);
            if lf <= tol.tri * le {
                continue;
            }
            let r = Realization { points: pts }.canonical(v0, v1);
            let mut forward = forward_type_of(&r, plan, &tol);
            forward.0[k - 1] = 0;
            out.push(ExtremeRealization { step: k, which, lf, forward, realization: r });
        }
    }
    Ok(out)
}

fn enumerate(
    linkage: &Linkage,
    plan: &ConstructionPlan,
    i: usize,
    pts: BTreeMap<VertexId, Point>,
    out: &mut Vec<BTreeMap<VertexId, Point>>,
) {
    if i == plan.len() {
        out.push(pts);
        return;
    }
    let s = &plan.steps()[i];
    let tol = linkage.tolerances();
    for sigma in [1i8, -1] {
        let mut next = pts.clone();
        if place_step(linkage, s, &mut next, sigma).is_err() {
            return;
        }
        let flat = local_orientation(next[&s.base.0], next[&s.base.1], next[&s.vertex], &tol) == 0;
        enumerate(linkage, plan, i + 1, next, out);
        if flat {
            break;
        }
    }
}

/// Realizations of the `which` extreme linkage of step `k` whose forward type on
/// steps `1..k` is compatible with `sigma_prefix` (zero entries match anything).
pub fn realize_extreme_linkage(
    linkage: &Linkage,
    plan: &ConstructionPlan,
    k: usize,
    which: Extreme,
    sigma_prefix: &ForwardType,
) -> Result<Vec<ExtremeRealization>> {
    Ok(extreme_realizations(linkage, plan, k)?
        .into_iter()
        .filter(|x| x.which == which && x.forward.prefix(k - 1).compatible(&sigma_prefix.prefix(k - 1)))
        .collect())
}
