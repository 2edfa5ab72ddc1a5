#![allow(dead_code)]

use std::collections::BTreeMap;

use caylink::geom::Point;
use caylink::graph::{construction_plan, last_level_and_paths, ConstructionPlan, Edge, Graph, VertexId};
use caylink::realize::Linkage;
use caylink::space::QimPlan;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random chain of construction steps from `f = (0, 1)`, each cluster a bar or a
/// triangle, lengths read off random positions. `None` when the draw is rejected.
pub fn random_chain(seed: u64, max_steps: usize) -> Option<(Linkage, ConstructionPlan)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    g.add_vertex(0);
    g.add_vertex(1);
    let mut next: VertexId = 2;
    let mut last_cluster_vertices: Vec<VertexId> = vec![0, 1];
    let mut clusters: Vec<Vec<VertexId>> = Vec::new();
    let steps = rng.gen_range(2..=max_steps);
    for j in 0..steps {
        let (u, w) = if j < 2 {
            (0, 1)
        } else {
            let mut pairs = Vec::new();
            let placed: Vec<VertexId> = g.vertices().iter().copied().collect();
            for &a in &last_cluster_vertices {
                for &b in &placed {
                    if a != b
                        && !g.has_edge(a, b)
                        && !clusters.iter().any(|c| c.contains(&a) && c.contains(&b))
                        && !(a.min(b) == 0 && a.max(b) == 1)
                    {
                        pairs.push((a.min(b), a.max(b)));
                    }
                }
            }
            *pairs.choose(&mut rng)?
        };
        let v = next;
        next += 1;
        let mut cur = vec![v];
        for x in [u, w] {
            if rng.gen_bool(0.3) {
                let a = next;
                next += 1;
                g.add_edge(x, a);
                g.add_edge(a, v);
                g.add_edge(x, v);
                clusters.push(vec![x, a, v]);
                cur.extend([x, a]);
            } else {
                g.add_edge(x, v);
                clusters.push(vec![x, v]);
                cur.push(x);
            }
        }
        last_cluster_vertices = cur;
    }
    let pos: BTreeMap<VertexId, Point> = g
        .vertices()
        .iter()
        .map(|&v| (v, Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))))
        .collect();
    let lengths: BTreeMap<Edge, f64> = g.edges().iter().map(|e| (*e, pos[&e.0].dist(pos[&e.1]))).collect();
    let lk = Linkage::new(g, lengths).ok()?;
    let plan = construction_plan(lk.graph(), (0, 1)).ok()?;
    if plan.len() > max_steps || !last_level_and_paths(&plan).one_path {
        return None;
    }
    QimPlan::new(&lk, &plan).ok()?;
    Some((lk, plan))
}

/// The first `n` accepted draws starting from `seed`.
pub fn random_chains(n: usize, max_steps: usize, seed: u64) -> Vec<(u64, Linkage, ConstructionPlan)> {
    (seed..)
        .filter_map(|s| random_chain(s, max_steps).map(|(l, p)| (s, l, p)))
        .take(n)
        .collect()
}

/// Realizable runs of `l_f` per forward type, found on a grid without any interval
/// algorithm, and joined where two types realize the same configuration at a shared end.
pub struct Oracle {
    pub runs: Vec<(caylink::realize::ForwardType, f64, f64)>,
    parent: Vec<usize>,
}

impl Oracle {
    pub fn new(lk: &Linkage, plan: &ConstructionPlan, lo: f64, hi: f64, n: usize) -> Oracle {
        use caylink::realize::{realize, ForwardType};
        let steps = plan.len();
        let mut runs = Vec::new();
        let mut reals = Vec::new();
        for b in 0..1u64 << steps {
            let s = ForwardType::from_bits(steps, b);
            let ok = |x: f64| realize(lk, plan, x, &s).is_ok();
            let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
            let inside: Vec<bool> = xs.iter().map(|&x| ok(x)).collect();
            // last realizable value between a realizable `a` and an unrealizable `b`
            let edge = |mut a: f64, mut b: f64| {
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if ok(m) {
                        a = m
                    } else {
                        b = m
                    }
                }
                a
            };
            let mut i = 0;
            while i <= n {
                if !inside[i] {
                    i += 1;
                    continue;
                }
                let j = (i..=n).take_while(|&j| inside[j]).last().unwrap();
                let a = if i == 0 { xs[0] } else { edge(xs[i], xs[i - 1]) };
                let z = if j == n { xs[n] } else { edge(xs[j], xs[j + 1]) };
                reals.push((realize(lk, plan, a, &s).unwrap(), realize(lk, plan, z, &s).unwrap()));
                runs.push((s.clone(), a, z));
                i = j + 1;
            }
        }
        let mut o = Oracle { parent: (0..runs.len()).collect(), runs };
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-7 * x.abs().max(1.0);
        let same = |p: &caylink::realize::Realization, q: &caylink::realize::Realization| {
            p.points.iter().all(|(v, a)| a.dist(q.point(*v)) < 1e-3)
        };
        for i in 0..o.runs.len() {
            for j in i + 1..o.runs.len() {
                let (si, ai, zi) = o.runs[i].clone();
                let (sj, aj, zj) = o.runs[j].clone();
                if si.0.iter().zip(&sj.0).filter(|(x, y)| x != y).count() != 1 {
                    continue;
                }
                let ends_i = [(ai, &reals[i].0), (zi, &reals[i].1)];
                let ends_j = [(aj, &reals[j].0), (zj, &reals[j].1)];
                if ends_i.iter().any(|(x, p)| ends_j.iter().any(|(y, q)| close(*x, *y) && same(p, q))) {
                    o.union(i, j);
                }
            }
        }
        o
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.parent[a] = b;
    }

    pub fn run_of(&self, s: &caylink::realize::ForwardType, lf: f64) -> Option<usize> {
        self.runs.iter().position(|(t, a, z)| t == s && *a <= lf && lf <= *z)
    }

    pub fn connected(&mut self, s: &caylink::realize::ForwardType, a: f64, t: &caylink::realize::ForwardType, b: f64) -> Option<bool> {
        let (i, j) = (self.run_of(s, a)?, self.run_of(t, b)?);
        Some(self.find(i) == self.find(j))
    }
}
