//! Continuous motion between realizations, by walking oriented intervals.
//!
//! Inside one oriented interval the linkage moves freely. It can only change forward
//! type at an interval endpoint, where one step is collinear; flipping that entry gives
//! the one type whose interval continues the motion. Following these hops from both ends
//! of the start interval finds every path, so there are at most two.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Tolerances;
use crate::graph::ConstructionPlan;
use crate::interval::Interval;
use crate::realize::{
    forward_type_of, minimal_type_of, realize_within, reverse_plans, ForwardType, Linkage, Realization,
};
use crate::space::CayleySpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lo,
    Hi,
}

/// A realization reduced to what the walk needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub sigma: ForwardType,
    pub lf: f64,
    pub interval: Interval,
}

/// Motion inside one oriented interval, from `from` to `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub sigma: ForwardType,
    pub interval: Interval,
    pub direction: Direction,
    pub from: f64,
    pub to: f64,
}

/// Type change at an endpoint: entry `step` flips at `lf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub lf: f64,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MotionPath {
    pub start: Config,
    pub target: Config,
    /// One zero-length leg when start and target coincide.
    pub legs: Vec<Leg>,
    /// `transitions[i]` joins `legs[i]` and `legs[i + 1]`.
    pub transitions: Vec<Transition>,
    /// Passes through an isolated point of some oriented space.
    pub through_isolated: bool,
}

/// Where the two realizations sit relative to each other, and whether they connect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MotionCase {
    /// Same oriented interval.
    #[serde(rename = "1")]
    SameInterval,
    /// Same forward type, different intervals, connected.
    #[serde(rename = "2a")]
    SameTypeConnected,
    #[serde(rename = "2b")]
    SameTypeDisconnected,
    /// Different forward types, connected.
    #[serde(rename = "3a")]
    OtherTypeConnected,
    #[serde(rename = "3b")]
    OtherTypeDisconnected,
}

impl MotionCase {
    pub fn label(self) -> &'static str {
        match self {
            MotionCase::SameInterval => "1",
            MotionCase::SameTypeConnected => "2a",
            MotionCase::SameTypeDisconnected => "2b",
            MotionCase::OtherTypeConnected => "3a",
            MotionCase::OtherTypeDisconnected => "3b",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionReport {
    pub case: MotionCase,
    pub paths: Vec<MotionPath>,
}

/// `sigma` with entry `k` negated.
///
/// ```
/// use caylink::motion::flip_at_endpoint;
/// use caylink::realize::ForwardType;
///
/// let s: ForwardType = "++".parse().unwrap();
/// assert_eq!(flip_at_endpoint(&s, 2).to_string(), "+-");
/// ```
pub fn flip_at_endpoint(sigma: &ForwardType, k: usize) -> ForwardType {
    sigma.flip(k)
}

fn same(a: f64, b: f64, tol: &Tolerances) -> bool {
    (a - b).abs() <= tol.merge * a.abs().max(b.abs()).max(1.0)
}

/// The interval reached by leaving `(sigma, interval)` through `end`, with the flipped step.
///
/// `None` at a boundary of the whole space.
pub fn adjacent_interval(
    space: &CayleySpace,
    sigma: &ForwardType,
    interval: Interval,
    end: End,
    tol: &Tolerances,
) -> Result<Option<(ForwardType, Interval, usize)>> {
    let own = space
        .get(sigma)
        .ok_or_else(|| Error::TypeMismatch(format!("type {sigma} has an empty space")))?;
    let l0 = match end {
        End::Lo => interval.lo,
        End::Hi => interval.hi,
    };
    let steps: BTreeSet<usize> =
        own.meta_at(l0, tol.merge * l0.max(1.0)).into_iter().map(|m| m.step).collect();
    if steps.len() > 1 {
        return Err(Error::AmbiguousEndpoint { lf: l0 });
    }
    let Some(&k) = steps.first() else { return Ok(None) };
    let tau = flip_at_endpoint(sigma, k);
    let Some(other) = space.get(&tau) else { return Ok(None) };
    let hit = other.set.iter().find(|iv| same(iv.lo, l0, tol) || same(iv.hi, l0, tol));
    Ok(hit.map(|iv| (tau, *iv, k)))
}

/// Forward type and interval of a realization; an `l_f` within tolerance of an
/// endpoint is moved onto it.
pub fn locate(space: &CayleySpace, plan: &ConstructionPlan, r: &Realization, tol: &Tolerances) -> Option<Config> {
    let (a, b) = plan.base();
    let lf = r.dist(a, b);
    let measured = forward_type_of(r, plan, tol);
    locate_lf(space, &measured, lf, tol)
}

fn locate_lf(space: &CayleySpace, measured: &ForwardType, lf: f64, tol: &Tolerances) -> Option<Config> {
    let slack = tol.merge * lf.max(1.0);
    space.by_type.iter().filter(|(s, _)| s.compatible(measured)).find_map(|(s, o)| {
        let iv = o.set.intervals()[o.set.find_within(lf, slack)?];
        let lf = if same(lf, iv.lo, tol) {
            iv.lo
        } else if same(lf, iv.hi, tol) {
            iv.hi
        } else {
            lf.clamp(iv.lo, iv.hi)
        };
        Some(Config { sigma: s.clone(), lf, interval: iv })
    })
}

fn leg(sigma: &ForwardType, interval: Interval, from: f64, to: f64) -> Leg {
    let direction = if to < from { Direction::Down } else { Direction::Up };
    Leg { sigma: sigma.clone(), interval, direction, from, to }
}

fn key(sigma: &ForwardType, iv: Interval) -> (ForwardType, u64, u64) {
    (sigma.clone(), iv.lo.to_bits(), iv.hi.to_bits())
}

/// Follows hops from `start` leaving through `exit` until the target's interval is
/// entered, a boundary is hit, or the walk comes back.
fn walk(space: &CayleySpace, start: &Config, target: &Config, exit: End, tol: &Tolerances) -> Result<Option<MotionPath>> {
    let (mut sigma, mut iv, mut from, mut exit) = (start.sigma.clone(), start.interval, start.lf, exit);
    let mut legs = Vec::new();
    let mut transitions = Vec::new();
    let mut through_isolated = false;
    let mut seen = BTreeSet::from([key(&sigma, iv)]);
    loop {
        let l0 = match exit {
            End::Lo => iv.lo,
            End::Hi => iv.hi,
        };
        legs.push(leg(&sigma, iv, from, l0));
        let Some((tau, next, k)) = adjacent_interval(space, &sigma, iv, exit, tol)? else { return Ok(None) };
        transitions.push(Transition { lf: l0, step: k });
        // each (type, interval) is entered at most once; a repeat means the loop closed
        if !seen.insert(key(&tau, next)) {
            return Ok(None);
        }
        through_isolated |= next.is_point();
        if tau == target.sigma && next == target.interval {
            legs.push(leg(&tau, next, l0, target.lf));
            return Ok(Some(MotionPath {
                start: start.clone(),
                target: target.clone(),
                legs,
                transitions,
                through_isolated,
            }));
        }
        exit = if next.is_point() || !same(next.lo, l0, tol) { End::Lo } else { End::Hi };
        (sigma, iv, from) = (tau, next, l0);
    }
}

fn paths_between(space: &CayleySpace, s: &Config, t: &Config, tol: &Tolerances) -> Result<MotionReport> {
    if s.sigma == t.sigma && s.interval == t.interval {
        // identical realizations give a zero-length leg
        let to = if same(s.lf, t.lf, tol) { s.lf } else { t.lf };
        let legs = vec![leg(&s.sigma, s.interval, s.lf, to)];
        let path =
            MotionPath { start: s.clone(), target: t.clone(), legs, transitions: Vec::new(), through_isolated: false };
        return Ok(MotionReport { case: MotionCase::SameInterval, paths: vec![path] });
    }
    let mut paths = Vec::new();
    for exit in [End::Lo, End::Hi] {
        // a point interval has one exit
        if exit == End::Hi && s.interval.is_point() {
            break;
        }
        if let Some(p) = walk(space, s, t, exit, tol)? {
            paths.push(p);
        }
    }
    let case = match (s.sigma == t.sigma, paths.is_empty()) {
        (true, false) => MotionCase::SameTypeConnected,
        (true, true) => MotionCase::SameTypeDisconnected,
        (false, false) => MotionCase::OtherTypeConnected,
        (false, true) => MotionCase::OtherTypeDisconnected,
    };
    Ok(MotionReport { case, paths })
}

/// All continuous motions between two realizations; at most two.
pub fn find_paths(
    space: &CayleySpace,
    plan: &ConstructionPlan,
    start: &Realization,
    target: &Realization,
    tol: &Tolerances,
) -> Result<MotionReport> {
    let missing = || Error::DomainError("realization lies outside the Cayley configuration space".into());
    let s = locate(space, plan, start, tol).ok_or_else(missing)?;
    let t = locate(space, plan, target, tol).ok_or_else(missing)?;
    paths_between(space, &s, &t, tol)
}

/// The single leg joining two realizations of one minimal type.
pub fn path_same_minimal_type(
    space: &CayleySpace,
    plan: &ConstructionPlan,
    start: &Realization,
    target: &Realization,
    tol: &Tolerances,
) -> Result<MotionPath> {
    let rev = reverse_plans(plan)?;
    let (ms, mt) = (minimal_type_of(start, plan, &rev, tol), minimal_type_of(target, plan, &rev, tol));
    if !ms.compatible(&mt) {
        return Err(Error::TypeMismatch("the realizations have different minimal types".into()));
    }
    let missing = || Error::DomainError("realization lies outside the Cayley configuration space".into());
    let s = locate(space, plan, start, tol).ok_or_else(missing)?;
    let t = locate(space, plan, target, tol).ok_or_else(missing)?;
    if s.sigma != t.sigma || s.interval != t.interval {
        return Err(Error::TypeMismatch("same minimal type but different oriented intervals".into()));
    }
    let to = if same(s.lf, t.lf, tol) { s.lf } else { t.lf };
    let legs = vec![leg(&s.sigma, s.interval, s.lf, to)];
    Ok(MotionPath { start: s, target: t, legs, transitions: Vec::new(), through_isolated: false })
}

/// Paths between two values of `l_f`, over every pair of types containing them.
pub fn paths_between_cayley_configs(
    space: &CayleySpace,
    lf_start: f64,
    lf_target: f64,
    tol: &Tolerances,
) -> Result<Vec<MotionPath>> {
    let configs = |lf: f64| -> Vec<Config> { space.by_type.keys().filter_map(|s| locate_lf(space, s, lf, tol)).collect() };
    let (from, to) = (configs(lf_start), configs(lf_target));
    let mut out: Vec<MotionPath> = Vec::new();
    for s in &from {
        for t in &to {
            for p in paths_between(space, s, t, tol)?.paths {
                if !out.iter().any(|q| q.legs == p.legs && q.start.sigma == p.start.sigma && q.target.sigma == p.target.sigma) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// `n` frames per leg at evenly spaced `l_f`, ends included; one for a zero-length leg.
pub fn sample_motion(linkage: &Linkage, plan: &ConstructionPlan, path: &MotionPath, n: usize) -> Result<Vec<Realization>> {
    if path.legs.is_empty() {
        return Ok(vec![realize_within(linkage, plan, path.start.lf, &path.start.sigma, path.start.interval)?]);
    }
    let mut out = Vec::with_capacity(n * path.legs.len());
    for l in &path.legs {
        let n = if l.from == l.to { 1 } else { n };
        for i in 0..n {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            let lf = (l.from + t * (l.to - l.from)).clamp(l.interval.lo, l.interval.hi);
            out.push(realize_within(linkage, plan, lf, &l.sigma, l.interval)?);
        }
    }
    Ok(out)
}
