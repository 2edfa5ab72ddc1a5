//! Commands as functions from a loaded document to a serializable report. The
//! command line and the HTTP service both go through here.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use caylink::graph::{extreme_graph, has_low_cayley_complexity, last_level_and_paths, Edge, VertexId};
use caylink::geom::Point;
use caylink::interval::Interval;
use caylink::motion::{find_paths, sample_motion, MotionCase, MotionPath};
use caylink::realize::{check_genericity, realize, ForwardType, Realization};
use caylink::space::{
    elr, elr_full, nested_quad_fixture, qim_full_precise, CayleySpace, EndpointMeta, QimMode, QimPlan, StageChoice,
    DEFAULT_BITS, Q1_SIDES,
};
use caylink::vector::{
    injectivity_probe, minimal_ccv_general, minimum_ccv_1path, sample_cayley_curve, CompleteCayleyVector,
    InjectivityReport,
};
use caylink::Error;
use serde::{Deserialize, Serialize};

use crate::document::{Loaded, LinkageDocument};
use crate::failure::{Failure, Outcome};

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Parses a forward type and checks it has one entry per step.
pub fn parse_sigma(text: &str, steps: usize) -> Outcome<ForwardType> {
    let s: ForwardType = text.parse().map_err(|e: Error| Failure::Parse(e.to_string()))?;
    if s.len() != steps {
        return Err(Failure::Parse(format!("type {text:?} has {} entries but the plan has {steps} steps", s.len())));
    }
    Ok(s)
}

// ---------------------------------------------------------------- check

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepVerdict {
    pub step: usize,
    pub vertex: VertexId,
    pub base: Edge,
    pub extreme_tree_decomposable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub tree_decomposable: bool,
    pub steps: Vec<StepVerdict>,
    pub low_cayley_complexity: bool,
    pub failing_step: Option<usize>,
    pub one_path: bool,
    pub last_level: Vec<VertexId>,
    pub warnings: Vec<String>,
}

pub fn check(loaded: &Loaded) -> CheckReport {
    let plan = &loaded.plan;
    let steps = (1..=plan.len())
        .map(|k| {
            let s = plan.step(k);
            StepVerdict {
                step: k,
                vertex: s.vertex,
                base: Edge::new(s.base.0, s.base.1),
                extreme_tree_decomposable: extreme_graph(plan, k).is_tree_decomposable,
            }
        })
        .collect();
    let low = has_low_cayley_complexity(plan);
    let paths = last_level_and_paths(plan);
    CheckReport {
        tree_decomposable: true,
        steps,
        low_cayley_complexity: low.low,
        failing_step: low.failing_step,
        one_path: paths.one_path,
        last_level: paths.last_level,
        warnings: check_genericity(&loaded.linkage, &probes(loaded)).warnings(),
    }
}

/// Seed realizations, or a few all-positive ones across the range of the first step.
fn probes(loaded: &Loaded) -> Vec<Realization> {
    let (lk, plan) = (&loaded.linkage, &loaded.plan);
    if let Some(seeds) = &loaded.document.seeds {
        return seeds.iter().filter_map(|s| realize(lk, plan, s.lf, &s.sigma().ok()?).ok()).collect();
    }
    let Some(first) = plan.steps().first() else { return Vec::new() };
    let (Some(a), Some(b)) = (lk.dist(first.base.0, first.vertex), lk.dist(first.vertex, first.base.1)) else {
        return Vec::new();
    };
    let (lo, hi) = ((a - b).abs(), a + b);
    let up = ForwardType::uniform(plan.len(), 1);
    (1..8).filter_map(|i| realize(lk, plan, lo + (hi - lo) * i as f64 / 8.0, &up).ok()).collect()
}

impl CheckReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tree-decomposable (G + f): {}", yes(self.tree_decomposable)).unwrap();
        for s in &self.steps {
            writeln!(
                out,
                "step {}: v{} on {}, extreme graph {}",
                s.step,
                s.vertex,
                s.base,
                if s.extreme_tree_decomposable { "tree-decomposable" } else { "NOT tree-decomposable" }
            )
            .unwrap();
        }
        let low = match self.failing_step {
            None => "yes".to_string(),
            Some(k) => format!("no, failing step {k}"),
        };
        writeln!(out, "low Cayley complexity: {low}; 1-path: {}", yes(self.one_path)).unwrap();
        let ll: Vec<String> = self.last_level.iter().map(|v| format!("v{v}")).collect();
        writeln!(out, "last level: {}", ll.join(", ")).unwrap();
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}

// ---------------------------------------------------------------- space

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Elr,
    Qim,
}

impl std::str::FromStr for Algo {
    type Err = Failure;

    fn from_str(s: &str) -> Outcome<Algo> {
        match s {
            "elr" => Ok(Algo::Elr),
            "qim" => Ok(Algo::Qim),
            _ => Err(Failure::Parse(format!("unknown algorithm {s:?} (expected elr or qim)"))),
        }
    }
}

/// Which part of the space to compute.
#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    AllTypes,
    /// One forward type.
    Sigma(String),
    /// The minimal type of the realization at `(lf, sigma)`.
    MinimalOf { lf: f64, sigma: String },
}

impl Selector {
    /// `all`, a type such as `+-+`, or `minimal:LF:TYPE`.
    pub fn parse(text: &str) -> Outcome<Selector> {
        if text == "all" {
            return Ok(Selector::AllTypes);
        }
        if let Some(rest) = text.strip_prefix("minimal:") {
            let (lf, sigma) = parse_config(rest)?;
            return Ok(Selector::MinimalOf { lf, sigma });
        }
        Ok(Selector::Sigma(text.to_string()))
    }
}

/// `LF:TYPE`, for instance `7.2:+-+`.
pub fn parse_config(text: &str) -> Outcome<(f64, String)> {
    let (lf, sigma) = text.split_once(':').ok_or_else(|| Failure::Parse(format!("expected LF:TYPE, got {text:?}")))?;
    let lf: f64 = lf.trim().parse().map_err(|_| Failure::Parse(format!("bad l_f value {lf:?}")))?;
    Ok((lf, sigma.trim().to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeSpace {
    pub sigma: String,
    pub intervals: Vec<Interval>,
    pub endpoints: Vec<EndpointMeta>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    /// Candidate endpoints that turned out interior or unrealizable, per type.
    pub dead_ends: BTreeMap<String, Vec<f64>>,
    /// Four-cycle class of each QIM stage.
    pub four_cycles: Vec<String>,
    /// `double` or the working precision in bits.
    pub precision: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceReport {
    pub algorithm: Algo,
    /// `all`, the requested type, or `minimal`.
    pub selection: String,
    /// Per forward type, sorted by type; empty for QIM, which works on the union.
    pub types: Vec<TypeSpace>,
    pub union: Vec<Interval>,
    pub timing_ms: f64,
    pub diagnostics: Diagnostics,
}

fn type_spaces(space: &CayleySpace) -> (Vec<TypeSpace>, BTreeMap<String, Vec<f64>>) {
    let mut types: Vec<TypeSpace> = space
        .by_type
        .iter()
        .map(|(s, o)| TypeSpace { sigma: s.to_string(), intervals: o.set.intervals().to_vec(), endpoints: o.endpoints.clone() })
        .collect();
    types.sort_by(|a, b| a.sigma.cmp(&b.sigma));
    let dead = space
        .by_type
        .iter()
        .filter(|(_, o)| !o.dead_ends.is_empty())
        .map(|(s, o)| (s.to_string(), o.dead_ends.clone()))
        .collect();
    (types, dead)
}

/// Computes the requested space. `double` keeps QIM in `f64` even where the
/// extended-precision path applies.
pub fn space(loaded: &Loaded, algo: Algo, sel: &Selector, double: bool) -> Outcome<SpaceReport> {
    let (lk, plan) = (&loaded.linkage, &loaded.plan);
    let t = Instant::now();
    let mut diag = Diagnostics { precision: "double".into(), ..Diagnostics::default() };
    let (selection, types, union) = match (algo, sel) {
        (Algo::Elr, Selector::AllTypes) => {
            let s = elr_full(lk, plan)?;
            let (types, dead) = type_spaces(&s);
            diag.dead_ends = dead;
            ("all".to_string(), types, s.union.intervals().to_vec())
        }
        (Algo::Elr, Selector::Sigma(text)) => {
            let sigma = parse_sigma(text, plan.len())?;
            let o = elr(lk, plan, &sigma)?;
            if !o.dead_ends.is_empty() {
                diag.dead_ends.insert(sigma.to_string(), o.dead_ends.clone());
            }
            let union = o.set.intervals().to_vec();
            (sigma.to_string(), vec![TypeSpace { sigma: sigma.to_string(), intervals: union.clone(), endpoints: o.endpoints }], union)
        }
        (Algo::Elr, Selector::MinimalOf { .. }) => {
            return Err(Failure::Parse("minimal types are computed with --algo qim".into()));
        }
        (Algo::Qim, Selector::Sigma(_)) => {
            return Err(Failure::Parse("QIM works on the union or on a minimal type; use --algo elr for one forward type".into()));
        }
        (Algo::Qim, Selector::AllTypes) => {
            let qp = QimPlan::new(lk, plan)?;
            diag.four_cycles = qp.stages.iter().map(|s| format!("{:?}", s.cycle.case)).collect();
            let precise = if double { None } else { qim_full_precise(lk, plan, DEFAULT_BITS).ok() };
            let union = match precise {
                Some(p) => {
                    diag.precision = format!("{DEFAULT_BITS} bits");
                    // rounded one by one, so neighbours closer than f64 stay separate
                    p.intervals.iter().map(|(a, b)| Interval::new(a.to_f64().value(), b.to_f64().value())).collect()
                }
                None => qp.run(&QimMode::Full)?.set.intervals().to_vec(),
            };
            ("all".to_string(), Vec::new(), union)
        }
        (Algo::Qim, Selector::MinimalOf { lf, sigma }) => {
            let sigma = parse_sigma(sigma, plan.len())?;
            let r = realize(lk, plan, *lf, &sigma)?;
            let qp = QimPlan::new(lk, plan)?;
            diag.four_cycles = qp.stages.iter().map(|s| format!("{:?}", s.cycle.case)).collect();
            let choices = qp.choices_of(&r);
            diag.notes.push(format!("arc choices: {}", choices_text(&choices)));
            let set = qp.run(&QimMode::Minimal(choices))?.set;
            ("minimal".to_string(), Vec::new(), set.intervals().to_vec())
        }
    };
    Ok(SpaceReport {
        algorithm: algo,
        selection,
        types,
        union,
        timing_ms: t.elapsed().as_secs_f64() * 1e3,
        diagnostics: diag,
    })
}

fn choices_text(ch: &[StageChoice]) -> String {
    ch.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(", ")
}

fn fmt_intervals(ivs: &[Interval]) -> String {
    if ivs.is_empty() {
        return "{}".into();
    }
    let join = |ivs: &[Interval]| ivs.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" u ");
    // text output only; --json and --csv keep everything
    if ivs.len() > 8 {
        return format!("{} u ... ({} more) ... u {}", join(&ivs[..3]), ivs.len() - 6, join(&ivs[ivs.len() - 3..]));
    }
    join(ivs)
}

fn count(n: usize, what: &str) -> String {
    format!("{n} {what}{}", if n == 1 { "" } else { "s" })
}

impl SpaceReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "algorithm: {:?} ({}), precision: {}", self.algorithm, self.selection, self.diagnostics.precision)
            .unwrap();
        for t in &self.types {
            writeln!(out, "{}: {}", t.sigma, fmt_intervals(&t.intervals)).unwrap();
        }
        writeln!(out, "union ({}): {}", count(self.union.len(), "interval"), fmt_intervals(&self.union)).unwrap();
        if !self.diagnostics.four_cycles.is_empty() {
            writeln!(out, "four-cycles: {}", self.diagnostics.four_cycles.join(", ")).unwrap();
        }
        for (s, d) in &self.diagnostics.dead_ends {
            writeln!(out, "dead ends {s}: {d:?}").unwrap();
        }
        for n in &self.diagnostics.notes {
            writeln!(out, "{n}").unwrap();
        }
        writeln!(out, "time: {:.3} ms", self.timing_ms).unwrap();
        out
    }

    /// `type,lo,hi` rows; the union uses the type `union`.
    pub fn csv(&self) -> String {
        let mut out = String::from("type,lo,hi\n");
        for t in &self.types {
            for i in &t.intervals {
                writeln!(out, "{},{},{}", t.sigma, i.lo, i.hi).unwrap();
            }
        }
        for i in &self.union {
            writeln!(out, "union,{},{}", i.lo, i.hi).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub elr: Vec<Interval>,
    pub qim: Vec<Interval>,
    pub same_count: bool,
    /// Largest endpoint difference relative to `max(1, |endpoint|)`; absent when counts differ.
    pub max_relative_difference: Option<f64>,
}

/// Runs ELR and double-precision QIM on the whole space and diffs their unions.
pub fn compare(loaded: &Loaded) -> Outcome<Comparison> {
    let e = elr_full(&loaded.linkage, &loaded.plan)?.union;
    let q = QimPlan::new(&loaded.linkage, &loaded.plan)?.run(&QimMode::Full)?.set;
    let same_count = e.len() == q.len();
    let max_relative_difference = same_count.then(|| {
        e.iter()
            .zip(q.iter())
            .flat_map(|(a, b)| [(a.lo, b.lo), (a.hi, b.hi)])
            .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
            .fold(0.0, f64::max)
    });
    Ok(Comparison { elr: e.intervals().to_vec(), qim: q.intervals().to_vec(), same_count, max_relative_difference })
}

impl Comparison {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "elr: {}", fmt_intervals(&self.elr)).unwrap();
        writeln!(out, "qim: {}", fmt_intervals(&self.qim)).unwrap();
        match self.max_relative_difference {
            Some(d) => writeln!(out, "same interval count; largest relative endpoint difference {d:e}").unwrap(),
            None => writeln!(out, "interval counts differ: {} vs {}", self.elr.len(), self.qim.len()).unwrap(),
        }
        out
    }
}

// ---------------------------------------------------------------- realize

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizeReport {
    pub lf: f64,
    pub sigma: String,
    pub points: BTreeMap<VertexId, [f64; 2]>,
}

fn coords(r: &Realization) -> BTreeMap<VertexId, [f64; 2]> {
    r.points.iter().map(|(&v, p)| (v, [p.x, p.y])).collect()
}

pub fn realize_at(loaded: &Loaded, lf: f64, sigma: &str) -> Outcome<RealizeReport> {
    let s = parse_sigma(sigma, loaded.plan.len())?;
    let r = realize(&loaded.linkage, &loaded.plan, lf, &s)?;
    Ok(RealizeReport { lf, sigma: s.to_string(), points: coords(&r) })
}

// ---------------------------------------------------------------- motion

/// A realization given by `l_f` and type, or by coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, try_from = "RawEndpoint")]
pub enum Endpoint {
    Config { lf: f64, sigma: String },
    Points { points: BTreeMap<VertexId, [f64; 2]> },
}

// untagged enums cannot read integer map keys, so both forms go through one struct
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEndpoint {
    lf: Option<f64>,
    sigma: Option<String>,
    points: Option<BTreeMap<VertexId, [f64; 2]>>,
}

impl TryFrom<RawEndpoint> for Endpoint {
    type Error = String;

    fn try_from(r: RawEndpoint) -> Result<Endpoint, String> {
        match r {
            RawEndpoint { lf: Some(lf), sigma: Some(sigma), points: None } => Ok(Endpoint::Config { lf, sigma }),
            RawEndpoint { lf: None, sigma: None, points: Some(points) } => Ok(Endpoint::Points { points }),
            _ => Err("an endpoint is either {\"lf\", \"sigma\"} or {\"points\"}".into()),
        }
    }
}

impl Endpoint {
    /// `LF:TYPE`, or a path to a JSON file holding `{"points": {...}}`.
    pub fn parse_arg(text: &str) -> Outcome<Endpoint> {
        if let Some(path) = text.strip_prefix('@') {
            let body = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
            return serde_json::from_str(&body).map_err(|e| Failure::Parse(format!("{path}: {e}")));
        }
        let (lf, sigma) = parse_config(text)?;
        Ok(Endpoint::Config { lf, sigma })
    }

    fn realization(&self, loaded: &Loaded) -> Outcome<Realization> {
        match self {
            Endpoint::Config { lf, sigma } => {
                let s = parse_sigma(sigma, loaded.plan.len())?;
                Ok(realize(&loaded.linkage, &loaded.plan, *lf, &s)?)
            }
            Endpoint::Points { points } => {
                let r = Realization { points: points.iter().map(|(&v, &[x, y])| (v, Point::new(x, y))).collect() };
                for v in loaded.linkage.graph().vertices() {
                    if !r.points.contains_key(v) {
                        return Err(Failure::Parse(format!("coordinates missing for vertex {v}")));
                    }
                }
                let tol = 1e-6 * loaded.linkage.lengths().values().fold(1.0f64, |m, &l| m.max(l));
                if r.residual(&loaded.linkage) > tol {
                    return Err(Failure::Domain(Error::DomainError(format!(
                        "coordinates miss the bar lengths by {:e}",
                        r.residual(&loaded.linkage)
                    ))));
                }
                let (a, b) = loaded.plan.base();
                Ok(r.canonical(a, b))
            }
        }
    }
}

/// Vertex coordinates of one realization.
pub type Coords = BTreeMap<VertexId, [f64; 2]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionDoc {
    pub case: MotionCase,
    pub paths: Vec<MotionPath>,
    /// Per path, frames as vertex coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Vec<Coords>>>,
}

pub fn motion(loaded: &Loaded, from: &Endpoint, to: &Endpoint, animate: Option<usize>) -> Outcome<MotionDoc> {
    let (lk, plan) = (&loaded.linkage, &loaded.plan);
    let (a, b) = (from.realization(loaded)?, to.realization(loaded)?);
    let space = elr_full(lk, plan)?;
    let rep = find_paths(&space, plan, &a, &b, &lk.tolerances())?;
    let frames = match animate {
        Some(n) => Some(
            rep.paths
                .iter()
                .map(|p| Ok(sample_motion(lk, plan, p, n)?.iter().map(coords).collect()))
                .collect::<Outcome<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(MotionDoc { case: rep.case, paths: rep.paths, frames })
}

fn case_text(c: MotionCase) -> &'static str {
    match c {
        MotionCase::SameInterval => "same oriented interval",
        MotionCase::SameTypeConnected => "same type, other interval, connected",
        MotionCase::SameTypeDisconnected => "same type, other interval, not connected",
        MotionCase::OtherTypeConnected => "other type, connected",
        MotionCase::OtherTypeDisconnected => "other type, not connected",
    }
}

impl MotionDoc {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "case {}: {}", self.case.label(), case_text(self.case)).unwrap();
        if self.paths.is_empty() {
            writeln!(out, "no path").unwrap();
        }
        for (i, p) in self.paths.iter().enumerate() {
            let legs = count(p.legs.len(), "leg");
            writeln!(out, "path {} ({legs}{})", i + 1, if p.through_isolated { ", through an isolated point" } else { "" })
                .unwrap();
            for (j, l) in p.legs.iter().enumerate() {
                writeln!(out, "  {} on {}: {} -> {}", l.sigma, l.interval, l.from, l.to).unwrap();
                if let Some(t) = p.transitions.get(j) {
                    writeln!(out, "  flip step {} at {}", t.step, t.lf).unwrap();
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------- curve

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveSample {
    pub sigma: String,
    pub lf: f64,
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub component: usize,
    pub points: Vec<CurveSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub vector: CompleteCayleyVector,
    pub components: Vec<CurveComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injectivity: Option<InjectivityReport>,
}

pub fn curve(loaded: &Loaded, resolution: usize, probe: bool) -> Outcome<CurveReport> {
    let (lk, plan) = (&loaded.linkage, &loaded.plan);
    if let Some(step) = has_low_cayley_complexity(plan).failing_step {
        return Err(Error::NotSupported { step }.into());
    }
    let ccv = match minimum_ccv_1path(plan) {
        Ok(c) => c,
        Err(Error::NotOnePath { .. }) => minimal_ccv_general(plan)?,
        Err(e) => return Err(e.into()),
    };
    let space = elr_full(lk, plan)?;
    let samples = sample_cayley_curve(lk, plan, &space, &ccv, resolution)?;
    let injectivity = probe.then(|| injectivity_probe(plan, &samples, 1e-9, 1e-3));
    let mut by: BTreeMap<usize, Vec<CurveSample>> = BTreeMap::new();
    for (p, _) in &samples {
        by.entry(p.component).or_default().push(CurveSample { sigma: p.sigma.to_string(), lf: p.lf, distances: p.distances.clone() });
    }
    let components = by
        .into_iter()
        .map(|(component, mut points)| {
            points.sort_by(|a, b| a.sigma.cmp(&b.sigma).then(a.lf.total_cmp(&b.lf)));
            CurveComponent { component, points }
        })
        .collect();
    Ok(CurveReport { vector: ccv, components, injectivity })
}

impl CurveReport {
    /// `component,type,lf,d1,...` rows.
    pub fn csv(&self) -> String {
        let mut out = String::from("component,type,lf");
        for e in &self.vector.entries {
            write!(out, ",d{}_{}", e.0, e.1).unwrap();
        }
        out.push('\n');
        for c in &self.components {
            for p in &c.points {
                write!(out, "{},{},{}", c.component, p.sigma, p.lf).unwrap();
                for d in &p.distances {
                    write!(out, ",{d}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let v: Vec<String> = self.vector.entries.iter().map(|e| e.to_string()).collect();
        writeln!(out, "vector: <{}>", v.join(", ")).unwrap();
        for c in &self.components {
            writeln!(out, "component {}: {} points", c.component, c.points.len()).unwrap();
        }
        if let Some(i) = &self.injectivity {
            writeln!(
                out,
                "injectivity: {} ({} points, {} close pairs, {} violations)",
                if i.violations == 0 { "pass" } else { "FAIL" },
                i.points,
                i.close_pairs,
                i.violations
            )
            .unwrap();
        }
        out
    }
}

// ---------------------------------------------------------------- fixture

/// Nested quadrilaterals with `k` steps; warnings go alongside the document.
pub fn fixture(k: usize, eps: f64) -> Outcome<(LinkageDocument, Vec<String>)> {
    if k == 0 {
        return Err(Failure::Parse("k must be at least 1".into()));
    }
    if !(eps >= 0.0) {
        return Err(Failure::Parse(format!("eps {eps} must be nonnegative")));
    }
    let (lk, plan) = nested_quad_fixture(k, eps, Q1_SIDES)?;
    let mut warnings = Vec::new();
    if eps == 0.0 {
        warnings.push("eps = 0: the extreme values touch and the space degenerates".to_string());
    }
    Ok((LinkageDocument::from_linkage(&lk, plan.base()), warnings))
}
