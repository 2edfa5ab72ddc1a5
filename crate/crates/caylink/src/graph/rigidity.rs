//! Generic rigidity in the plane via the (2,3) pebble game, plus vertex connectivity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Edge, Graph, VertexId};

struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize) -> Self {
        PebbleGame { pebbles: vec![2; n], out: vec![Vec::new(); n] }
    }

    // Moves one pebble onto `root` without touching `root` or `keep`.
    fn gather(&mut self, root: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        seen[root] = true;
        seen[keep] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.out[x].len() {
                let y = self.out[x][i];
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    self.pebbles[y] -= 1;
                    let mut cur = y;
                    while cur != root {
                        let p = parent[cur];
                        let pos = self.out[p].iter().position(|&z| z == cur).unwrap();
                        self.out[p].swap_remove(pos);
                        self.out[cur].push(p);
                        cur = p;
                    }
                    self.pebbles[root] += 1;
                    return true;
                }
                queue.push_back(y);
            }
        }
        false
    }

    fn try_insert(&mut self, u: usize, v: usize) -> bool {
        while self.pebbles[u] < 2 && self.gather(u, v) {}
        while self.pebbles[v] < 2 && self.gather(v, u) {}
        if self.pebbles[u] + self.pebbles[v] >= 4 {
            self.pebbles[u] -= 1;
            self.out[u].push(v);
            true
        } else {
            false
        }
    }
}

/// Number of independent edges of `g` in the generic 2D rigidity matroid.
pub fn rigidity_rank(g: &Graph) -> usize {
    let index: BTreeMap<VertexId, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut game = PebbleGame::new(index.len());
    g.edges().iter().filter(|e| game.try_insert(index[&e.0], index[&e.1])).count()
}

/// Laman test: `|E| = 2|V| - 3` and no subgraph is over-braced.
pub fn is_minimally_rigid(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n <= 1 {
        return g.edge_count() == 0;
    }
    g.edge_count() == 2 * n - 3 && rigidity_rank(g) == g.edge_count()
}

/// Generic rigidity: the rank reaches `2|V| - 3`.
pub fn is_rigid(g: &Graph) -> bool {
    let n = g.vertex_count();
    n <= 1 || rigidity_rank(g) == 2 * n - 3
}

/// Rigid, and still rigid after deleting any single edge.
pub fn is_redundantly_rigid(g: &Graph) -> bool {
    is_rigid(g) && g.edges().iter().all(|&e| is_rigid(&g.without_edge(e)))
}

/// Whether `g` minus the vertices in `removed` is connected.
pub fn is_connected_without(g: &Graph, removed: &[VertexId]) -> bool {
    let adj = g.neighbours();
    let rest: BTreeSet<VertexId> = g.vertices().iter().copied().filter(|v| !removed.contains(v)).collect();
    let Some(&start) = rest.iter().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if rest.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == rest.len()
}

/// All vertex pairs whose removal disconnects `g`, in ascending order.
pub fn two_separators(g: &Graph) -> Vec<Edge> {
    let vs: Vec<VertexId> = g.vertices().iter().copied().collect();
    let mut seps = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if vs.len() > 3 && !is_connected_without(g, &[vs[i], vs[j]]) {
                seps.push(Edge::new(vs[i], vs[j]));
            }
        }
    }
    seps
}

/// 3-vertex-connectivity; graphs on fewer than four vertices count only when complete.
pub fn is_three_connected(g: &Graph) -> bool {
    if g.vertex_count() < 4 {
        return g.is_complete();
    }
    if !is_connected_without(g, &[]) {
        return false;
    }
    let vs: Vec<VertexId> = g.vertices().iter().copied().collect();
    vs.iter().all(|&v| is_connected_without(g, &[v])) && two_separators(g).is_empty()
}

/// Generic global rigidity in the plane: complete on at most three vertices, otherwise
/// 3-connected and redundantly rigid.
pub fn is_globally_rigid(g: &Graph) -> bool {
    if g.vertex_count() <= 3 {
        return g.is_complete();
    }
    is_three_connected(g) && is_redundantly_rigid(g)
}
