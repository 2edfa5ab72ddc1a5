//! Quadrilateral interval mapping along the chain of base pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::fourcycle::{find_four_cycle, CycleCase, FourCycle};
use crate::conic::{apex, map_intervals_diagonal, Arc, ArcConstraint, QuadCurve};
use crate::error::{Error, Result};
use crate::geom::{Point, Rigid};
use crate::graph::{has_low_cayley_complexity, last_level_and_paths, Cluster, ConstructionPlan, Edge, VertexId};
use crate::interval::{Interval, IntervalSet};
use crate::realize::{Chart, Linkage, Realization};

/// Cap on the number of intervals any stage may hold.
pub const INTERVAL_CAP: u128 = 1 << 20;

const SAMPLES: usize = 200;

/// Which piece of a stage map to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageChoice {
    /// Arc of the quadrilateral curve (diagonal stages).
    Arc(Arc),
    /// Reflection branch and monotone piece of a sampled stage map.
    Piece { branch: u8, piece: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum QimMode {
    /// Union over all arcs and pieces.
    Full,
    /// One choice per stage, ordered like [`QimPlan::stages`].
    Minimal(Vec<StageChoice>),
}

/// Maps lengths of `from = e_{i+1}` to lengths of `to = e_i`.
#[derive(Debug, Clone)]
pub struct QimStage {
    pub from: Edge,
    pub to: Edge,
    pub cycle: FourCycle,
    mapper: Mapper,
}

#[derive(Debug, Clone)]
enum Mapper {
    /// `from` is `e1`, `to` is `e2`; `None` when the quadrilateral cannot close.
    Curve(Option<QuadCurve>),
    Sampled(Sampled),
}

/// Sides of the interface vertices relative to a directed pair.
type Signature = Vec<i8>;

/// Sets of lengths of one pair, split by the signature of the interface vertices.
type State = BTreeMap<Signature, IntervalSet>;

#[derive(Debug, Clone)]
struct Piece {
    t0: f64,
    t1: f64,
    up: Signature,
    down: Signature,
}

/// A four-cycle parametrized by the diagonal `t = |c_1 c_3|`.
///
/// Vertices shared with the next cycle up (`up`) and down (`down`) are tracked by
/// their side of `from` and `to` respectively, so that pieces of neighbouring stages
/// are only chained when they place the shared clusters the same way.
#[derive(Debug, Clone)]
struct Sampled {
    sides: [f64; 4],
    junctions: [VertexId; 4],
    /// Chart of `T_i` for nontrivial clusters.
    charts: [Option<Chart>; 4],
    inner: BTreeMap<VertexId, usize>,
    from: Edge,
    to: Edge,
    up: Vec<VertexId>,
    down: Vec<VertexId>,
    /// Per branch, monotone pieces with constant signatures.
    pieces: [Vec<Piece>; 4],
    /// Relative slack for matching interval ends to piece ends.
    snap: f64,
}

impl Sampled {
    fn new(
        linkage: &Linkage,
        all: &[Cluster],
        cyc: &FourCycle,
        (from, to): (Edge, Edge),
        (up, down): (Vec<VertexId>, Vec<VertexId>),
    ) -> Result<Sampled> {
        let c = cyc.junctions;
        // s1 = |q0 q1|, …, s4 = |q3 q0|
        let sides: [f64; 4] = std::array::from_fn(|i| linkage.dist(c[i], c[(i + 1) % 4]).unwrap_or(f64::NAN));
        if sides.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidLinkage("four-cycle side without a cluster".into()));
        }
        let charts: [Option<Chart>; 4] = std::array::from_fn(|i| {
            let (a, b) = (c[(i + 3) % 4], c[i]);
            linkage.chart_with(a, b).cloned()
        });
        let mut inner = BTreeMap::new();
        for (i, &cl) in cyc.clusters.iter().enumerate() {
            for &v in &all[cl].vertices {
                if !c.contains(&v) {
                    inner.insert(v, i);
                }
            }
        }
        let snap = linkage.tolerances().merge;
        let mut m = Sampled { sides, junctions: c, charts, inner, from, to, up, down, pieces: Default::default(), snap };
        let [s1, s2, s3, s4] = sides;
        let lo = (s1 - s4).abs().max((s2 - s3).abs());
        let hi = (s1 + s4).min(s2 + s3);
        if lo < hi {
            for b in 0..4u8 {
                m.pieces[b as usize] = m.split(Interval::new(lo, hi), b);
            }
        }
        Ok(m)
    }

    fn quad(&self, t: f64, branch: u8) -> [Point; 4] {
        let [s1, s2, s3, s4] = self.sides;
        let sa = if branch & 1 == 0 { 1.0 } else { -1.0 };
        let sb = if branch & 2 == 0 { 1.0 } else { -1.0 };
        let (x0, h0) = apex(t, s1, s4);
        let (x2, h2) = apex(t, s2, s3);
        [Point::new(x0, sa * h0), Point::ORIGIN, Point::new(x2, sb * h2), Point::new(t, 0.0)]
    }

    fn position(&self, q: &[Point; 4], v: VertexId) -> Point {
        if let Some(j) = self.junctions.iter().position(|&c| c == v) {
            return q[j];
        }
        let i = self.inner[&v];
        let chart = self.charts[i].as_ref().expect("inner vertex lies in a chart");
        let (a, b) = (self.junctions[(i + 3) % 4], self.junctions[i]);
        Rigid::aligning(chart.points[&a], chart.points[&b], q[(i + 3) % 4], q[i]).apply(chart.points[&v])
    }

    fn eval(&self, t: f64, branch: u8) -> (f64, f64) {
        let q = self.quad(t, branch);
        let d = |e: Edge| self.position(&q, e.0).dist(self.position(&q, e.1));
        (d(self.from), d(self.to))
    }

    /// Cross products of the interface vertices against `from` (up) and `to` (down).
    fn crosses(&self, t: f64, branch: u8) -> Vec<f64> {
        let q = self.quad(t, branch);
        let mut out = Vec::with_capacity(self.up.len() + self.down.len());
        for (e, vs) in [(self.from, &self.up), (self.to, &self.down)] {
            let (a, b) = (self.position(&q, e.0), self.position(&q, e.1));
            for &v in vs.iter() {
                out.push((b - a).cross(self.position(&q, v) - a));
            }
        }
        out
    }

    fn signatures(&self, t: f64, branch: u8) -> (Signature, Signature) {
        let x = self.crosses(t, branch);
        let sign = |v: &f64| if *v > 0.0 { 1 } else if *v < 0.0 { -1 } else { 0 };
        let (u, d) = x.split_at(self.up.len());
        (u.iter().map(sign).collect(), d.iter().map(sign).collect())
    }

    /// Pieces of `r` on which both lengths are monotone and no interface vertex
    /// crosses its pair.
    fn split(&self, r: Interval, branch: u8) -> Vec<Piece> {
        let ts: Vec<f64> = (0..SAMPLES)
            .map(|i| r.mid() - 0.5 * r.width() * (std::f64::consts::PI * i as f64 / (SAMPLES - 1) as f64).cos())
            .collect();
        let vals: Vec<(f64, f64)> = ts.iter().map(|&t| self.eval(t, branch)).collect();
        let cross: Vec<Vec<f64>> = ts.iter().map(|&t| self.crosses(t, branch)).collect();
        let mut extrema = Vec::new();
        for which in 0..2 {
            let g = |i: usize| if which == 0 { vals[i].0 } else { vals[i].1 };
            for i in 1..SAMPLES - 1 {
                let (a, b) = (g(i) - g(i - 1), g(i + 1) - g(i));
                if a * b < 0.0 {
                    let sign = if a > 0.0 { -1.0 } else { 1.0 };
                    let f = |t: f64| {
                        let v = self.eval(t, branch);
                        sign * if which == 0 { v.0 } else { v.1 }
                    };
                    extrema.push(golden_min(f, ts[i - 1], ts[i + 1]));
                }
            }
        }
        let mut roots = Vec::new();
        for j in 0..cross.first().map_or(0, Vec::len) {
            for i in 1..SAMPLES {
                let (a, b) = (cross[i - 1][j], cross[i][j]);
                if a * b < 0.0 {
                    let f = |t: f64| self.crosses(t, branch)[j];
                    roots.push(bisect_root(f, ts[i - 1], ts[i], a));
                }
            }
        }
        // an extremum next to a crossing is usually the crossing itself (a collinearity),
        // located only to the square root of the precision by the golden search
        let near = 1e-6 * r.width();
        extrema.retain(|&e| roots.iter().all(|&x| (x - e).abs() > near));
        let mut out = vec![r.lo, r.hi];
        out.extend(extrema);
        out.extend(roots);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * r.hi);
        out.windows(2)
            .map(|w| {
                let (up, down) = self.signatures(0.5 * (w[0] + w[1]), branch);
                Piece { t0: w[0], t1: w[1], up, down }
            })
            .collect()
    }

    fn map_piece(&self, branch: u8, piece: &Piece, src: &IntervalSet, out: &mut Vec<Interval>) {
        let (t0, t1) = (piece.t0, piece.t1);
        let p0 = self.eval(t0, branch).0;
        let p1 = self.eval(t1, branch).0;
        let (lo, hi) = (p0.min(p1), p0.max(p1));
        let slack = self.snap * hi.max(1.0);
        for iv in src {
            // ends within the slack of a piece boundary are the same event seen twice
            let Some(mut c) = iv.intersect(&Interval::new(lo - slack, hi + slack)) else { continue };
            c.lo = if c.lo - lo <= slack { lo } else { c.lo.min(hi) };
            c.hi = if hi - c.hi <= slack { hi } else { c.hi.max(lo) };
            if c.lo > c.hi {
                continue;
            }
            let ta = self.solve(branch, t0, t1, p0, p1, c.lo);
            let tb = self.solve(branch, t0, t1, p0, p1, c.hi);
            let (qa, qb) = (self.eval(ta, branch).1, self.eval(tb, branch).1);
            out.push(Interval::new(qa.min(qb), qa.max(qb)));
        }
    }

    /// `t` in `[t0, t1]` where the source length equals `target`, by bisection.
    fn solve(&self, branch: u8, t0: f64, t1: f64, p0: f64, p1: f64, target: f64) -> f64 {
        if target == p0 {
            return t0;
        }
        if target == p1 {
            return t1;
        }
        let up = p1 > p0;
        let (mut a, mut b) = (t0, t1);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (self.eval(m, branch).0 < target) == up {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    fn map(&self, src: &State, choice: Option<(u8, usize)>) -> State {
        let mut out: BTreeMap<Signature, Vec<Interval>> = BTreeMap::new();
        for b in 0..4u8 {
            for (j, piece) in self.pieces[b as usize].iter().enumerate() {
                if choice.is_some_and(|c| c != (b, j)) {
                    continue;
                }
                if let Some(set) = src.get(&piece.up) {
                    self.map_piece(b, piece, set, out.entry(piece.down.clone()).or_default());
                }
            }
        }
        out.into_iter().map(|(k, v)| (k, IntervalSet::new(v))).collect()
    }

    fn choice_of(&self, r: &Realization) -> StageChoice {
        let q: [Point; 4] = std::array::from_fn(|i| r.point(self.junctions[i]));
        let axis = q[3] - q[1];
        let sa = axis.cross(q[0] - q[1]) < 0.0;
        let sb = axis.cross(q[2] - q[1]) < 0.0;
        let branch = sa as u8 | (sb as u8) << 1;
        let t = q[1].dist(q[3]);
        let pieces = &self.pieces[branch as usize];
        let piece = pieces
            .iter()
            .position(|p| p.t0 <= t && t <= p.t1)
            .unwrap_or_else(|| if pieces.is_empty() || t < pieces[0].t0 { 0 } else { pieces.len() - 1 });
        StageChoice::Piece { branch, piece }
    }
}

fn bisect_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Everything QIM needs that does not depend on the mode.
#[derive(Debug, Clone)]
pub struct QimPlan {
    /// `e_0 = f, e_1, …, e_m`.
    pub base_pairs: Vec<Edge>,
    /// `stages[i]` maps `e_{i+1}` to `e_i`.
    pub stages: Vec<QimStage>,
    /// Triangle ranges of the steps built on each base pair.
    pub ranges: Vec<IntervalSet>,
}

/// Per-stage sets `S_m, …, S_0`; `set` is `S_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QimReport {
    pub set: IntervalSet,
    pub stage_sets: Vec<IntervalSet>,
    pub cases: Vec<CycleCase>,
}

impl QimPlan {
    pub fn new(linkage: &Linkage, plan: &ConstructionPlan) -> Result<QimPlan> {
        let paths = last_level_and_paths(plan);
        if !paths.one_path {
            return Err(Error::NotOnePath { paths: paths.paths.len() });
        }
        if let Some(step) = has_low_cayley_complexity(plan).failing_step {
            return Err(Error::NotSupported { step });
        }
        QimPlan::new_unchecked(linkage, plan)
    }

    /// [`QimPlan::new`] without the 1-path and extreme-graph checks, which cost a
    /// tree-decomposability test per step. For plans already known to pass them.
    pub fn new_unchecked(linkage: &Linkage, plan: &ConstructionPlan) -> Result<QimPlan> {
        let seq = plan.base_pair_sequence();
        let base_pairs: Vec<Edge> = seq.iter().map(|x| x.0).collect();
        let mut ranges = Vec::new();
        for e in &base_pairs {
            let mut set = IntervalSet::single(Interval::new(0.0, f64::INFINITY));
            for s in plan.steps().iter().filter(|s| s.extreme_edge() == *e) {
                let (a, b) = (linkage.dist(s.base.0, s.vertex), linkage.dist(s.vertex, s.base.1));
                let (Some(a), Some(b)) = (a, b) else {
                    return Err(Error::InvalidLinkage(format!("step {} has unmeasurable sides", s.index)));
                };
                set = set.clip((a - b).abs(), a + b);
            }
            ranges.push(set);
        }
        let all = plan.clusters();
        let mut cycles = Vec::new();
        for i in 0..base_pairs.len().saturating_sub(1) {
            let (p, q) = (base_pairs[i + 1], base_pairs[i]);
            let first = seq[i + 1].1;
            let allowed: BTreeSet<usize> =
                plan.steps()[..first - 1].iter().flat_map(|s| [s.clusters.0, s.clusters.1]).collect();
            cycles.push(find_four_cycle(all, &allowed, p, q).ok_or(Error::FourCycleNotFound { from: p, to: q })?);
        }
        let verts = |c: &FourCycle| -> BTreeSet<VertexId> {
            c.clusters.iter().flat_map(|&k| all[k].vertices.iter().copied()).collect()
        };
        // vertices shared by cycles i and i+1, other than the endpoints of e_{i+1}
        let iface: Vec<Vec<VertexId>> = (0..cycles.len().saturating_sub(1))
            .map(|i| {
                let p = base_pairs[i + 1];
                verts(&cycles[i]).intersection(&verts(&cycles[i + 1])).copied().filter(|&v| !p.contains(v)).collect()
            })
            .collect();
        // with bars only, a mirror image of the part above any pair fixes a side mismatch
        let bars_only = all.iter().all(Cluster::is_trivial);
        let mut stages = Vec::new();
        for (i, cycle) in cycles.into_iter().enumerate() {
            let (p, q) = (base_pairs[i + 1], base_pairs[i]);
            let mapper = if bars_only && cycle.case == CycleCase::Diagonals {
                let c = cycle.junctions;
                let d = |a: VertexId, b: VertexId| linkage.dist(a, b).unwrap_or(f64::NAN);
                Mapper::Curve(QuadCurve::new(d(c[0], c[1]), d(c[1], c[2]), d(c[2], c[3]), d(c[3], c[0])).ok())
            } else {
                let up = iface.get(i).cloned().unwrap_or_default();
                let down = if i == 0 { Vec::new() } else { iface[i - 1].clone() };
                Mapper::Sampled(Sampled::new(linkage, all, &cycle, (p, q), (up, down))?)
            };
            stages.push(QimStage { from: p, to: q, cycle, mapper });
        }
        Ok(QimPlan { base_pairs, stages, ranges })
    }

    pub fn run(&self, mode: &QimMode) -> Result<QimReport> {
        if let QimMode::Minimal(ch) = mode {
            if ch.len() != self.stages.len() {
                return Err(Error::TypeMismatch(format!("{} stage choices for {} stages", ch.len(), self.stages.len())));
            }
        }
        let m = self.base_pairs.len() - 1;
        let mut state: State = BTreeMap::from([(Vec::new(), self.ranges[m].clone())]);
        let union = |st: &State| st.values().fold(IntervalSet::empty(), |acc, s| acc.union(s));
        let mut stage_sets = vec![union(&state)];
        for i in (0..m).rev() {
            let choice = match mode {
                QimMode::Full => None,
                QimMode::Minimal(ch) => Some(ch[i]),
            };
            state = self.stages[i]
                .map(&state, choice)?
                .into_iter()
                .map(|(k, s)| (k, s.intersect(&self.ranges[i])))
                .filter(|(_, s)| !s.is_empty())
                .collect();
            let count: usize = state.values().map(IntervalSet::len).sum();
            if count as u128 > INTERVAL_CAP {
                return Err(Error::Budget { what: "intervals", needed: count as u128, cap: INTERVAL_CAP });
            }
            stage_sets.push(union(&state));
        }
        let set = stage_sets.last().cloned().unwrap_or_default();
        Ok(QimReport { set, stage_sets, cases: self.stages.iter().map(|st| st.cycle.case).collect() })
    }

    /// The stage choices a realization follows.
    pub fn choices_of(&self, r: &Realization) -> Vec<StageChoice> {
        self.stages.iter().map(|st| st.choice_of(r)).collect()
    }
}

impl QimStage {
    fn map(&self, src: &State, choice: Option<StageChoice>) -> Result<State> {
        match (&self.mapper, choice) {
            (Mapper::Curve(None), _) => Ok(State::new()),
            (Mapper::Curve(Some(c)), None | Some(StageChoice::Arc(_))) => {
                let arc = match choice {
                    Some(StageChoice::Arc(a)) => ArcConstraint::Only(a),
                    _ => ArcConstraint::Any,
                };
                let all = src.values().fold(IntervalSet::empty(), |acc, s| acc.union(s));
                Ok(State::from([(Vec::new(), map_intervals_diagonal(c, &all, arc))]))
            }
            (Mapper::Sampled(m), None) => Ok(m.map(src, None)),
            (Mapper::Sampled(m), Some(StageChoice::Piece { branch, piece })) => Ok(m.map(src, Some((branch, piece)))),
            (Mapper::Sampled(_), Some(StageChoice::Arc(_))) => {
                Err(Error::TypeMismatch("arc choice for a sampled stage".into()))
            }
            (Mapper::Curve(_), Some(StageChoice::Piece { .. })) => {
                Err(Error::TypeMismatch("piece choice for a diagonal stage".into()))
            }
        }
    }

    fn choice_of(&self, r: &Realization) -> StageChoice {
        match &self.mapper {
            Mapper::Curve(_) => {
                let q: [Point; 4] = std::array::from_fn(|i| r.point(self.cycle.junctions[i]));
                let side = |a: Point, b: Point, x: Point| (b - a).cross(x - a);
                let upper = side(q[1], q[3], q[0]) * side(q[1], q[3], q[2]) < 0.0;
                let right = side(q[0], q[2], q[1]) * side(q[0], q[2], q[3]) < 0.0;
                StageChoice::Arc(Arc::from_sides(upper, right))
            }
            Mapper::Sampled(m) => m.choice_of(r),
        }
    }
}

/// `Φ_f` of a 1-path linkage by interval mapping.
pub fn qim(linkage: &Linkage, plan: &ConstructionPlan, mode: &QimMode) -> Result<IntervalSet> {
    Ok(QimPlan::new(linkage, plan)?.run(mode)?.set)
}

/// Stage choices followed by a realization of the whole plan.
pub fn qim_arcs_of(linkage: &Linkage, plan: &ConstructionPlan, r: &Realization) -> Result<Vec<StageChoice>> {
    Ok(QimPlan::new(linkage, plan)?.choices_of(r))
}

/// Intersection of the per-path minimal-type spaces; `choices[i]` belongs to path `i`
/// of [`last_level_and_paths`].
pub fn qim_multipath(linkage: &Linkage, plan: &ConstructionPlan, choices: &[Vec<StageChoice>]) -> Result<IntervalSet> {
    let paths = last_level_and_paths(plan).paths;
    if choices.len() != paths.len() {
        return Err(Error::TypeMismatch(format!("{} choice lists for {} paths", choices.len(), paths.len())));
    }
    let mut out = IntervalSet::single(Interval::new(0.0, f64::INFINITY));
    for (p, ch) in paths.iter().zip(choices) {
        out = out.intersect(&qim(linkage, &p.plan, &QimMode::Minimal(ch.clone()))?);
    }
    Ok(out)
}
