//! Four-cycles of clusters linking consecutive base pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Cluster, Edge, VertexId};

/// How the two pairs sit in the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleCase {
    /// Both pairs are diagonals: one quadrilateral curve relates them.
    Diagonals,
    /// Both pairs are chords across the same junction.
    SameJunction,
    /// Any other placement of the two pairs.
    Mixed,
}

/// Clusters `T_0..T_3` where `T_i ∩ T_{i+1} = {c_i}` (indices mod 4) and opposite
/// clusters are disjoint.
///
/// In the `Diagonals` case the labelling is rotated so that the source pair is
/// `(c_1, c_3)` and the target pair is `(c_0, c_2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourCycle {
    pub clusters: [usize; 4],
    pub junctions: [VertexId; 4],
    pub case: CycleCase,
}

impl FourCycle {
    /// Index `i` of the cycle cluster holding `v` as a non-junction vertex.
    fn inner_of(&self, all: &[Cluster], v: VertexId) -> Option<usize> {
        if self.junctions.contains(&v) {
            return None;
        }
        (0..4).find(|&i| all[self.clusters[i]].contains(v))
    }

    fn junction_of(&self, v: VertexId) -> Option<usize> {
        self.junctions.iter().position(|&c| c == v)
    }

    fn is_diagonal(&self, e: Edge) -> bool {
        match (self.junction_of(e.0), self.junction_of(e.1)) {
            (Some(i), Some(j)) => (i + 2) % 4 == j,
            _ => false,
        }
    }

    /// Junction index crossed by a chord.
    fn chord_junction(&self, all: &[Cluster], e: Edge) -> Option<usize> {
        let (i, j) = (self.inner_of(all, e.0)?, self.inner_of(all, e.1)?);
        if (i + 1) % 4 == j {
            Some(i)
        } else if (j + 1) % 4 == i {
            Some(j)
        } else {
            None
        }
    }

    /// Both ends lie in cycle clusters but not in a common one.
    fn measures(&self, all: &[Cluster], e: Edge) -> bool {
        let holds = |v: VertexId| self.clusters.iter().filter(|&&c| all[c].contains(v)).count();
        holds(e.0) > 0
            && holds(e.1) > 0
            && !self.clusters.iter().any(|&c| all[c].contains(e.0) && all[c].contains(e.1))
    }

    fn rotated(&self, r: usize) -> FourCycle {
        FourCycle {
            clusters: std::array::from_fn(|i| self.clusters[(i + r) % 4]),
            junctions: std::array::from_fn(|i| self.junctions[(i + r) % 4]),
            case: self.case,
        }
    }
}

/// Searches the clusters in `allowed` for a four-cycle relating `p` to `q`.
///
/// Cycles where both pairs are diagonals are preferred, then chords across one
/// junction, then anything else in which both pairs can be measured.
pub fn find_four_cycle(all: &[Cluster], allowed: &BTreeSet<usize>, p: Edge, q: Edge) -> Option<FourCycle> {
    let mut by_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for &c in allowed {
        for &v in &all[c].vertices {
            by_vertex.entry(v).or_default().push(c);
        }
    }
    let shared = |a: usize, b: usize| -> Vec<VertexId> { all[a].vertices.intersection(&all[b].vertices).copied().collect() };
    let single = |a: usize, b: usize| -> Option<VertexId> {
        let s = shared(a, b);
        (s.len() == 1).then(|| s[0])
    };
    let neighbours = |a: usize| -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for v in &all[a].vertices {
            for &b in by_vertex.get(v).map(Vec::as_slice).unwrap_or(&[]) {
                if b != a && single(a, b).is_some() {
                    out.insert(b);
                }
            }
        }
        out.into_iter().collect()
    };
    let mut best: Option<FourCycle> = None;
    for &t0 in by_vertex.get(&p.0).map(Vec::as_slice).unwrap_or(&[]) {
        for t1 in neighbours(t0) {
            for t2 in neighbours(t1) {
                if t2 == t0 || !shared(t0, t2).is_empty() {
                    continue;
                }
                for t3 in neighbours(t2) {
                    if t3 == t1 || t3 == t0 || !shared(t1, t3).is_empty() {
                        continue;
                    }
                    let Some(c3) = single(t3, t0) else { continue };
                    let js = [single(t0, t1).unwrap(), single(t1, t2).unwrap(), single(t2, t3).unwrap(), c3];
                    if js.iter().collect::<BTreeSet<_>>().len() != 4 {
                        continue;
                    }
                    let mut cyc = FourCycle { clusters: [t0, t1, t2, t3], junctions: js, case: CycleCase::Mixed };
                    if !cyc.measures(all, p) || !cyc.measures(all, q) {
                        continue;
                    }
                    if cyc.is_diagonal(p) && cyc.is_diagonal(q) {
                        cyc.case = CycleCase::Diagonals;
                        if cyc.junction_of(p.0).unwrap().is_multiple_of(2) {
                            cyc = cyc.rotated(1);
                        }
                    } else if let (Some(a), Some(b)) = (cyc.chord_junction(all, p), cyc.chord_junction(all, q)) {
                        if a == b {
                            cyc.case = CycleCase::SameJunction;
                        }
                    }
                    if best.as_ref().is_none_or(|b| cyc.case < b.case) {
                        best = Some(cyc);
                    }
                }
            }
        }
    }
    best
}
