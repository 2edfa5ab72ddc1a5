//! Extreme linkage realization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CayleySpace, EndpointMeta, OrientedCayleySpace};
use crate::error::{Error, Result};
use crate::graph::ConstructionPlan;
use crate::interval::{Interval, IntervalSet};
use crate::realize::{extreme_realizations, realize_prefix, ExtremeRealization, ForwardType, Linkage};

/// Default cap on the number of forward types `elr_full` enumerates.
pub const TYPE_CAP: u128 = 1 << 16;

/// How a candidate endpoint was classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateCase {
    /// Both sides realizable.
    Interior,
    /// Exactly one side realizable.
    Endpoint,
    /// Neither side.
    Isolated,
}

/// Probe offset used when a candidate has no neighbour on one side.
const UNBOUNDED_PROBE: f64 = 1.0;

/// Classifies `l0` against its neighbouring endpoints in `iset` and refines the set.
///
/// `prev`/`next` are the nearest endpoints of `iset` below and above `l0`; `probe` is
/// asked about the midpoints towards them.
///
/// ```
/// use caylink::interval::IntervalSet;
/// use caylink::space::{update, UpdateCase};
///
/// let s = IntervalSet::from_pairs(&[(1.0, 10.0)]);
/// let (t, case) = update(&s, 4.0, |x| x >= 4.0);
/// assert_eq!(case, UpdateCase::Endpoint);
/// // the far end 1 stays as a point until it is classified itself
/// assert_eq!(t, IntervalSet::from_pairs(&[(1.0, 1.0), (4.0, 10.0)]));
/// ```
pub fn update(iset: &IntervalSet, l0: f64, probe: impl Fn(f64) -> bool) -> (IntervalSet, UpdateCase) {
    let ends = iset.endpoints();
    let prev = ends.iter().copied().filter(|&e| e < l0).fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
    let next = ends.iter().copied().filter(|&e| e > l0).fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.min(e))));
    let p_at = prev.map_or(l0 - UNBOUNDED_PROBE, |p| 0.5 * (p + l0));
    let n_at = next.map_or(l0 + UNBOUNDED_PROBE, |n| 0.5 * (n + l0));
    let p = p_at > 0.0 && probe(p_at);
    let n = probe(n_at);
    let lo = prev.unwrap_or(f64::NEG_INFINITY);
    let hi = next.unwrap_or(f64::INFINITY);
    match (p, n) {
        (true, true) => (iset.clone(), UpdateCase::Interior),
        (true, false) => (remove_open(iset, l0, hi, true), UpdateCase::Endpoint),
        (false, true) => (remove_open(iset, lo, l0, true), UpdateCase::Endpoint),
        (false, false) => {
            let mut out: Vec<Interval> = remove_open(iset, lo, hi, false).iter().copied().collect();
            out.push(Interval::point(l0));
            (IntervalSet::with_tolerance(out, 0.0), UpdateCase::Isolated)
        }
    }
}

/// `iset` minus the open interval `(a, b)`; with `keep_ends` the bounds `a`, `b` stay
/// in the set (`a` as a point when nothing else reaches it).
fn remove_open(iset: &IntervalSet, a: f64, b: f64, keep_ends: bool) -> IntervalSet {
    let mut out = Vec::new();
    for i in iset {
        if i.hi <= a || i.lo >= b {
            out.push(*i);
            continue;
        }
        if i.lo <= a {
            out.push(Interval::new(i.lo, a));
        } else if keep_ends && a.is_finite() {
            out.push(Interval::point(a));
        }
        if i.hi >= b {
            out.push(Interval::new(b, i.hi));
        } else if keep_ends && b.is_finite() {
            out.push(Interval::point(b));
        }
    }
    IntervalSet::with_tolerance(out, 0.0)
}

/// Extreme realizations of every step, computed once and shared by all types.
#[derive(Debug, Clone)]
pub struct ElrContext {
    pub candidates: Vec<Vec<ExtremeRealization>>,
}

impl ElrContext {
    pub fn new(linkage: &Linkage, plan: &ConstructionPlan) -> Result<ElrContext> {
        let candidates = (1..=plan.len()).map(|k| extreme_realizations(linkage, plan, k)).collect::<Result<_>>()?;
        Ok(ElrContext { candidates })
    }

    /// Candidate endpoints of step `k` for a type, with provenance.
    fn for_type(&self, k: usize, sigma: &ForwardType) -> Vec<EndpointMeta> {
        let prefix = sigma.prefix(k - 1);
        self.candidates[k - 1]
            .iter()
            .filter(|c| c.forward.prefix(k - 1).compatible(&prefix))
            .map(|c| EndpointMeta { value: c.lf, step: k, which: c.which })
            .collect()
    }
}

/// `Φ_f(G, l̄, σ)` by extreme linkage realization.
pub fn elr(linkage: &Linkage, plan: &ConstructionPlan, sigma: &ForwardType) -> Result<OrientedCayleySpace> {
    let ctx = ElrContext::new(linkage, plan)?;
    elr_with(&ctx, linkage, plan, sigma)
}

/// [`elr`] with precomputed extreme realizations.
///
/// All candidates of a step are inserted as breakpoints first, so the probes between
/// neighbouring breakpoints never straddle an unseen endpoint.
pub fn elr_with(
    ctx: &ElrContext,
    linkage: &Linkage,
    plan: &ConstructionPlan,
    sigma: &ForwardType,
) -> Result<OrientedCayleySpace> {
    if sigma.len() != plan.len() {
        return Err(Error::TypeMismatch(format!("type {sigma} has {} entries, plan has {} steps", sigma.len(), plan.len())));
    }
    let tol = linkage.tolerances().merge;
    let mut set = IntervalSet::single(Interval::new(0.0, f64::INFINITY));
    let mut meta: Vec<EndpointMeta> = Vec::new();
    let mut dead_ends = Vec::new();
    for k in 1..=plan.len() {
        let probe = |l: f64| l > 0.0 && realize_prefix(linkage, plan, k, l, sigma).is_ok();
        let cands = ctx.for_type(k, sigma);
        // breakpoints: current finite positive endpoints plus this step's candidates
        let mut bp: Vec<EndpointMeta> = meta.clone();
        bp.extend(cands.iter().copied());
        bp.retain(|m| m.value > 0.0 && m.value.is_finite());
        bp.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.step.cmp(&b.step)));
        // clusters of breakpoints closer than `tol`; a start takes the cluster's
        // largest member and an end its smallest, as the sets intersect there
        let mut merged: Vec<Vec<EndpointMeta>> = Vec::new();
        for m in bp {
            match merged.last_mut() {
                Some(c) if m.value - c[c.len() - 1].value <= tol * m.value.max(1.0) => c.push(m),
                _ => merged.push(vec![m]),
            }
        }
        let lowest = |i: usize| merged[i][0];
        let highest = |i: usize| merged[i][merged[i].len() - 1];
        let n = merged.len();
        // segment i lies between breakpoint i-1 and i; segment n is unbounded above
        let seg_in: Vec<bool> = (0..=n)
            .map(|i| {
                let lo = if i == 0 { 0.0 } else { highest(i - 1).value };
                let x = if i == n {
                    lo + UNBOUNDED_PROBE
                } else {
                    0.5 * (lo + lowest(i).value)
                };
                set.contains(x) && probe(x)
            })
            .collect();
        let mut pieces = Vec::new();
        let mut kept_meta = Vec::new();
        let mut start: Option<f64> = None;
        for i in 0..=n {
            let lo = if i == 0 { 0.0 } else { highest(i - 1).value };
            if seg_in[i] && start.is_none() {
                start = Some(lo);
            }
            if i == n {
                if let Some(s) = start.take() {
                    pieces.push(Interval::new(s, f64::INFINITY));
                }
                break;
            }
            let left = seg_in[i];
            let right = seg_in[i + 1];
            let case = match (left, right) {
                (true, true) => UpdateCase::Interior,
                (false, false) => UpdateCase::Isolated,
                _ => UpdateCase::Endpoint,
            };
            match case {
                UpdateCase::Interior => {
                    dead_ends.extend(merged[i].iter().filter(|b| b.step == k).map(|b| b.value));
                }
                UpdateCase::Endpoint => {
                    let b = if left { lowest(i) } else { highest(i) };
                    kept_meta.push(b);
                    if left {
                        pieces.push(Interval::new(start.take().unwrap_or(b.value), b.value));
                    } else {
                        start = Some(b.value);
                    }
                }
                UpdateCase::Isolated => {
                    if let Some(b) = merged[i].iter().copied().find(|b| probe(b.value)) {
                        kept_meta.push(b);
                        pieces.push(Interval::point(b.value));
                    } else {
                        dead_ends.extend(merged[i].iter().filter(|b| b.step == k).map(|b| b.value));
                    }
                }
            }
        }
        set = IntervalSet::with_tolerance(pieces, 0.0);
        meta = kept_meta;
        if set.is_empty() {
            break;
        }
    }
    if set.iter().any(|i| i.hi.is_infinite()) {
        // only possible for a plan without steps
        return Err(Error::DomainError("unbounded Cayley configuration space".into()));
    }
    Ok(OrientedCayleySpace { sigma: sigma.clone(), set, endpoints: meta, dead_ends })
}

/// All forward types in parallel; empty spaces are dropped.
pub fn elr_full(linkage: &Linkage, plan: &ConstructionPlan) -> Result<CayleySpace> {
    elr_full_with_cap(linkage, plan, TYPE_CAP)
}

pub fn elr_full_with_cap(linkage: &Linkage, plan: &ConstructionPlan, cap: u128) -> Result<CayleySpace> {
    let n = plan.len();
    let needed = 1u128 << n.min(127);
    if needed > cap {
        return Err(Error::Budget { what: "forward types", needed, cap });
    }
    let ctx = ElrContext::new(linkage, plan)?;
    let spaces = (0..needed as u64)
        .into_par_iter()
        .map(|i| elr_with(&ctx, linkage, plan, &ForwardType::from_bits(n, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CayleySpace::from_spaces(spaces))
}

