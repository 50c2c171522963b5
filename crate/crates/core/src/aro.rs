//! The assignment-rerouting-ordering (aro) pipeline on unweighted grids.
//!
//! 1. A distance-minimizing matching and path system from min-cost flow.
//! 2. Rerouting that keeps every path shortest but avoids occupied vertices.
//! 3. Edge deletion until the edges used by the paths form a forest.
//! 4. An ordering of unobstructed moves in which no token moves twice.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::error::{ReconfError, Result};
use crate::geometry::{Configuration, Geometry, GeometryKind, Path, PathSystem, Problem, Vertex};
use crate::solution::Solution;

type Edge = (Vertex, Vertex);

fn undirected(a: Vertex, b: Vertex) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Residual network for min-cost flow. Arc `i ^ 1` is the reverse of arc `i`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
    cost: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: i32, cost: i64) -> usize {
        let id = self.to.len();
        self.adj[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    /// Flow currently on forward arc `id`.
    pub fn flow(&self, id: usize) -> i32 {
        self.cap[id ^ 1]
    }

    /// Successive shortest paths from `s` to `t` until `want` units flow or
    /// no augmenting path remains. Distances come from Dijkstra on reduced
    /// costs: residual arcs carry cost -1, so plain breadth-first search
    /// would not give shortest augmenting paths. Returns `(flow, cost)`.
    pub fn min_cost_flow(&mut self, s: usize, t: usize, want: i32) -> (i32, i64) {
        let n = self.adj.len();
        let mut pot = vec![0i64; n];
        let (mut flow, mut total) = (0, 0);
        const INF: i64 = i64::MAX / 4;
        while flow < want {
            let mut dist = vec![INF; n];
            let mut via = vec![usize::MAX; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &a in &self.adj[u] {
                    if self.cap[a] == 0 {
                        continue;
                    }
                    let v = self.to[a];
                    let nd = d + self.cost[a] + pot[u] - pot[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = a;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == INF {
                break;
            }
            for v in 0..n {
                if dist[v] < INF {
                    pot[v] += dist[v];
                }
            }
            let mut push = want - flow;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                total += push as i64 * self.cost[a];
                v = self.to[a ^ 1];
            }
            flow += push;
        }
        (flow, total)
    }
}

/// Distance-minimizing path system on the graph `(vertices, edges)`: one
/// shortest path per target, from distinct sources. Trivial paths are kept.
fn mcmf_paths(vertices: &[Vertex], edges: &[Edge], sources: &[Vertex], targets: &[Vertex]) -> Result<Vec<Path>> {
    if sources.len() < targets.len() {
        return Err(ReconfError::infeasible(sources.len(), targets.len()));
    }
    let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vertices.len();
    let (s_star, t_star) = (n, n + 1);
    let big = targets.len() as i32 + 1;
    let mut net = FlowNetwork::new(n + 2);
    let mut grid_arcs = Vec::with_capacity(edges.len() * 2);
    for &(a, b) in edges {
        let (ia, ib) = (index[&a], index[&b]);
        grid_arcs.push((net.add_arc(ia, ib, big, 1), ia, ib));
        grid_arcs.push((net.add_arc(ib, ia, big, 1), ib, ia));
    }
    let src_arcs: Vec<(usize, usize)> = sources.iter().map(|s| (net.add_arc(s_star, index[s], 1, 1), index[s])).collect();
    let tgt_arcs: Vec<(usize, usize)> = targets.iter().map(|t| (net.add_arc(index[t], t_star, 1, 1), index[t])).collect();
    let (flow, _) = net.min_cost_flow(s_star, t_star, targets.len() as i32);
    if (flow as usize) < targets.len() {
        return Err(ReconfError::infeasible(flow as usize, targets.len()));
    }

    // Net flow per directed arc, opposite flows cancelled.
    let mut out: Vec<Vec<(usize, i32)>> = vec![Vec::new(); n];
    let mut raw: HashMap<(usize, usize), i32> = HashMap::new();
    for &(id, u, v) in &grid_arcs {
        *raw.entry((u, v)).or_default() += net.flow(id);
    }
    for &(id, u, v) in &grid_arcs {
        let f = net.flow(id) - raw.get(&(v, u)).copied().unwrap_or(0);
        if f > 0 {
            out[u].push((v, f));
        }
    }
    let mut terminal = vec![false; n];
    for &(id, t) in &tgt_arcs {
        terminal[t] = net.flow(id) > 0;
    }
    let mut paths = Vec::with_capacity(targets.len());
    for &(id, s) in &src_arcs {
        if net.flow(id) == 0 {
            continue;
        }
        let mut cur = s;
        let mut verts = vec![vertices[s]];
        while !terminal[cur] {
            let slot = out[cur]
                .iter_mut()
                .find(|(_, f)| *f > 0)
                .ok_or_else(|| ReconfError::Internal("flow decomposition stranded".into()))?;
            slot.1 -= 1;
            cur = slot.0;
            verts.push(vertices[cur]);
        }
        terminal[cur] = false;
        paths.push(Path::new(verts));
    }
    Ok(paths)
}

fn grid_edges(g: Geometry) -> Vec<Edge> {
    let mut edges = Vec::new();
    for v in g.vertices() {
        for u in g.neighbors(v) {
            if v < u {
                edges.push((v, u));
            }
        }
    }
    edges
}

/// Distance-minimizing matching saturating the targets and a shortest-path
/// system realizing it, including zero-length paths.
pub fn mcmf_matching(problem: &Problem) -> Result<(Vec<(Vertex, Vertex)>, PathSystem)> {
    problem.check_feasible()?;
    let g = problem.geometry;
    let vertices: Vec<Vertex> = g.vertices().collect();
    let sources: Vec<Vertex> = problem.sources.iter().collect();
    let targets: Vec<Vertex> = problem.targets.iter().collect();
    let paths = mcmf_paths(&vertices, &grid_edges(g), &sources, &targets)?;
    let matching = paths.iter().map(|p| (p.source(), p.target())).collect();
    Ok((matching, PathSystem::new(paths)))
}

/// Re-selects each path among the shortest staircases of its bounding box
/// so that it crosses as few tokens not already displaced by other paths as
/// possible. Lengths never change and a change is only made when it strictly
/// lowers the displaced-token count, so the loop reaches a fixed point.
pub fn reroute(system: &PathSystem, occupied: &Configuration) -> PathSystem {
    let g = occupied.geometry();
    let mut paths = system.paths.clone();
    let mut cover = vec![0u32; g.vertex_count()];
    let interior = |p: &Path| -> Vec<Vertex> {
        if p.is_trivial() {
            Vec::new()
        } else {
            p.vertices[..p.vertices.len() - 1].to_vec()
        }
    };
    for p in &paths {
        for v in interior(p) {
            cover[g.index(v)] += 1;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..paths.len() {
            if paths[i].is_trivial() {
                continue;
            }
            for v in interior(&paths[i]) {
                cover[g.index(v)] -= 1;
            }
            let fresh = |v: Vertex| (occupied.contains(v) && cover[g.index(v)] == 0) as u32;
            let current: u32 = interior(&paths[i]).into_iter().map(fresh).sum();
            let (s, t) = (paths[i].source(), paths[i].target());
            let (nx, ny) = (s.x.abs_diff(t.x), s.y.abs_diff(t.y));
            let at = |a: usize, b: usize| {
                let x = if t.x >= s.x { s.x + a } else { s.x - a };
                let y = if t.y >= s.y { s.y + b } else { s.y - b };
                Vertex::new(x, y)
            };
            // best[a][b]: fewest fresh tokens from s to the cell a columns and
            // b rows toward t, counting the cell itself unless it is t.
            let mut best = vec![vec![0u32; ny + 1]; nx + 1];
            for a in 0..=nx {
                for b in 0..=ny {
                    let here = if a == nx && b == ny { 0 } else { fresh(at(a, b)) };
                    let prev = match (a, b) {
                        (0, 0) => 0,
                        (0, _) => best[0][b - 1],
                        (_, 0) => best[a - 1][0],
                        _ => best[a][b - 1].min(best[a - 1][b]),
                    };
                    best[a][b] = prev + here;
                }
            }
            if best[nx][ny] < current {
                let mut rev = vec![at(nx, ny)];
                let (mut a, mut b) = (nx, ny);
                while (a, b) != (0, 0) {
                    if a == 0 || (b > 0 && best[a][b - 1] <= best[a - 1][b]) {
                        b -= 1;
                    } else {
                        a -= 1;
                    }
                    rev.push(at(a, b));
                }
                rev.reverse();
                paths[i] = Path::new(rev);
                changed = true;
            }
            for v in interior(&paths[i]) {
                cover[g.index(v)] += 1;
            }
        }
        if !changed {
            break;
        }
    }
    PathSystem::new(paths)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

fn edge_set(system: &PathSystem) -> Vec<Edge> {
    let mut edges: Vec<Edge> = system
        .paths
        .iter()
        .flat_map(|p| p.vertices.windows(2).map(|w| undirected(w[0], w[1])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Whether the undirected graph on the edges of the system has no cycle.
pub fn is_forest(system: &PathSystem) -> bool {
    let edges = edge_set(system);
    let ids: HashMap<Vertex, usize> = edges
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut uf = UnionFind::new(ids.len());
    edges.iter().all(|(a, b)| uf.union(ids[a], ids[b]))
}

/// Deletes edges of the path system's graph, recomputing a distance-minimizing
/// system without each candidate in turn, until the graph is a forest.
///
/// Candidates are scanned in lexicographic order and only inside connected
/// components that still contain a cycle; a deletion is accepted when the
/// recomputed system on that component is feasible and no heavier. Paths in
/// other components are untouched, since flow cannot cross components.
pub fn break_cycles(problem: &Problem, system: &PathSystem) -> Result<PathSystem> {
    let mut paths = system.paths.clone();
    loop {
        let current = PathSystem::new(paths.clone());
        let edges = edge_set(&current);
        let verts: Vec<Vertex> = edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let id: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(verts.len());
        let mut cyclic_roots = HashSet::new();
        let mut tree = UnionFind::new(verts.len());
        for &(a, b) in &edges {
            uf.union(id[&a], id[&b]);
        }
        for &(a, b) in &edges {
            if !tree.union(id[&a], id[&b]) {
                cyclic_roots.insert(uf.find(id[&a]));
            }
        }
        if cyclic_roots.is_empty() {
            return Ok(current);
        }
        let before = edges.len();
        let mut accepted = None;
        for &e in &edges {
            let root = uf.find(id[&e.0]);
            if !cyclic_roots.contains(&root) {
                continue;
            }
            let comp_verts: Vec<Vertex> = verts.iter().copied().filter(|v| uf.find(id[v]) == root).collect();
            let comp_set: HashSet<Vertex> = comp_verts.iter().copied().collect();
            let comp_edges: Vec<Edge> = edges
                .iter()
                .copied()
                .filter(|&f| f != e && comp_set.contains(&f.0))
                .collect();
            let sources: Vec<Vertex> = comp_verts.iter().copied().filter(|&v| problem.sources.contains(v)).collect();
            let targets: Vec<Vertex> = comp_verts.iter().copied().filter(|&v| problem.targets.contains(v)).collect();
            let weight: usize = paths
                .iter()
                .filter(|p| comp_set.contains(&p.source()))
                .map(Path::len)
                .sum();
            let Ok(new_paths) = mcmf_paths(&comp_verts, &comp_edges, &sources, &targets) else {
                continue;
            };
            if new_paths.iter().map(Path::len).sum::<usize>() <= weight {
                accepted = Some((comp_set, new_paths));
                break;
            }
        }
        let (comp_set, new_paths) =
            accepted.ok_or_else(|| ReconfError::Internal("no safe edge deletion found".into()))?;
        paths.retain(|p| !comp_set.contains(&p.source()));
        paths.extend(new_paths);
        paths.sort_by_key(|p| (p.source(), p.target()));
        debug_assert!(edge_set(&PathSystem::new(paths.clone())).len() < before);
    }
}

/// Orders a cycle-free path system into unobstructed moves.
///
/// Repeatedly picks the lowest pending path whose target is free and lies
/// inside no other pending path, then moves the token nearest to that target
/// along the path. If that token was the source of another pending path, the
/// two swap roles; if it was a resting token, the path is cut short to the
/// vacated vertex. Tokens therefore move at most once.
pub fn order_moves_forest(occupied: &Configuration, system: &PathSystem) -> Result<Solution> {
    let g = occupied.geometry();
    let mut occ = occupied.clone();
    let mut pending: Vec<Option<Path>> = system.paths.iter().filter(|p| !p.is_trivial()).cloned().map(Some).collect();
    let mut inside = vec![0u32; g.vertex_count()];
    let mut by_source: HashMap<Vertex, usize> = HashMap::new();
    let add = |inside: &mut Vec<u32>, p: &Path, d: i32| {
        for v in &p.vertices[1..p.vertices.len() - 1] {
            let i = g.index(*v);
            inside[i] = (inside[i] as i32 + d) as u32;
        }
    };
    for (i, p) in pending.iter().enumerate() {
        let p = p.as_ref().expect("all pending");
        add(&mut inside, p, 1);
        by_source.insert(p.source(), i);
    }
    let mut executed = Vec::new();
    let mut left = pending.len();
    while left > 0 {
        let free = |p: &Path, strict: bool| !occ.contains(p.target()) && (!strict || inside[g.index(p.target())] == 0);
        let pick = (0..pending.len())
            .find(|&i| pending[i].as_ref().is_some_and(|p| free(p, true)))
            .or_else(|| (0..pending.len()).find(|&i| pending[i].as_ref().is_some_and(|p| free(p, false))))
            .ok_or_else(|| ReconfError::Internal("no executable path in forest ordering".into()))?;
        let p = pending[pick].take().expect("picked a pending path");
        add(&mut inside, &p, -1);
        by_source.remove(&p.source());
        let k = (0..p.vertices.len() - 1)
            .rev()
            .find(|&k| occ.contains(p.vertices[k]))
            .ok_or_else(|| ReconfError::Internal("path source lost its token".into()))?;
        let u = p.vertices[k];
        executed.push(Path::new(p.vertices[k..].to_vec()));
        occ.remove(u);
        occ.insert(p.target());
        if k == 0 {
            left -= 1;
        } else if let Some(j) = by_source.remove(&u) {
            let other = pending[j].take().expect("indexed path is pending");
            add(&mut inside, &other, -1);
            let mut verts = p.vertices[..=k].to_vec();
            verts.extend_from_slice(&other.vertices[1..]);
            let merged = Path::new(verts);
            add(&mut inside, &merged, 1);
            by_source.insert(merged.source(), j);
            pending[j] = Some(merged);
            left -= 1;
        } else {
            let cut = Path::new(p.vertices[..=k].to_vec());
            add(&mut inside, &cut, 1);
            by_source.insert(cut.source(), pick);
            pending[pick] = Some(cut);
        }
    }
    Ok(Solution::from_ordered_paths(executed))
}

/// The cycle-free, distance-minimizing path system aro executes.
pub fn aro_path_system(problem: &Problem) -> Result<PathSystem> {
    if problem.geometry.kind() != GeometryKind::Grid && problem.geometry.height() != 1 {
        return Err(ReconfError::InvalidInput("aro runs on grids".into()));
    }
    let (_, system) = mcmf_matching(problem)?;
    let system = reroute(&system, &problem.sources);
    break_cycles(problem, &system)
}

pub fn aro(problem: &Problem) -> Result<Solution> {
    let system = aro_path_system(problem)?;
    order_moves_forest(&problem.sources, &system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_min_matching, OracleMode};
    use crate::solution::validate_solution;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn conf(g: Geometry, vs: &[(usize, usize)]) -> Configuration {
        Configuration::from_vertices(g, vs.iter().map(|&v| Vertex::from(v))).unwrap()
    }

    fn problem(g: Geometry, s: &[(usize, usize)], t: &[(usize, usize)]) -> Problem {
        Problem::new(g, conf(g, s), conf(g, t)).unwrap()
    }

    fn random_problem(rng: &mut ChaCha8Rng, max_side: usize, max_targets: usize) -> Option<Problem> {
        let (w, h) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
        let g = Geometry::grid(w, h).unwrap();
        let mut s = Configuration::empty(g);
        let mut t = Configuration::empty(g);
        for v in g.vertices() {
            if rng.gen_bool(0.5) {
                s.insert(v);
            }
            if rng.gen_bool(0.3) && t.len() < max_targets {
                t.insert(v);
            }
        }
        (s.len() >= t.len()).then(|| Problem::new(g, s, t).unwrap())
    }

    #[test]
    fn mcmf_examples() {
        let g = Geometry::grid(2, 2).unwrap();
        let (m, ps) = mcmf_matching(&problem(g, &[(0, 0)], &[(1, 1)])).unwrap();
        assert_eq!(m, vec![(Vertex::new(0, 0), Vertex::new(1, 1))]);
        assert_eq!(ps.weight(), 2);
        let (_, ps) = mcmf_matching(&problem(g, &[(0, 0), (1, 0)], &[(0, 0), (1, 0)])).unwrap();
        assert_eq!(ps.weight(), 0);
        assert!(ps.paths.iter().all(Path::is_trivial));
        assert!(matches!(
            mcmf_matching(&problem(g, &[(0, 0)], &[(0, 1), (1, 1)])),
            Err(ReconfError::Infeasible { .. })
        ));
    }

    #[test]
    fn mcmf_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let Some(p) = random_problem(&mut rng, 6, 8) else { continue };
            let (_, ps) = mcmf_matching(&p).unwrap();
            let opt = brute_force_min_matching(&p, OracleMode::Exhaustive).unwrap().weight;
            assert_eq!(ps.weight() as u64, opt);
            assert!(ps.paths.iter().all(Path::is_shortest));
            assert!(ps.has_distinct_endpoints());
        }
    }

    #[test]
    fn reroute_avoids_occupied_corner() {
        let g = Geometry::grid(2, 2).unwrap();
        let occ = conf(g, &[(0, 0), (1, 0)]);
        let via = |c: (usize, usize)| Path::new(vec![Vertex::new(0, 0), Vertex::from(c), Vertex::new(1, 1)]);
        let ps = PathSystem::new(vec![via((1, 0)), Path::new(vec![Vertex::new(1, 0)])]);
        assert_eq!(ps.displaced_tokens(&occ), 2);
        let out = reroute(&ps, &occ);
        assert_eq!(out.paths[0], via((0, 1)));
        assert_eq!(out.displaced_tokens(&occ), 1);
        assert_eq!(out.weight(), 2);

        let clean = PathSystem::new(vec![via((0, 1))]);
        assert_eq!(reroute(&clean, &occ), clean);
    }

    #[test]
    fn reroute_contract_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let Some(p) = random_problem(&mut rng, 8, 12) else { continue };
            let (_, ps) = mcmf_matching(&p).unwrap();
            let out = reroute(&ps, &p.sources);
            assert_eq!(out.weight(), ps.weight());
            assert!(out.displaced_tokens(&p.sources) <= ps.displaced_tokens(&p.sources));
            assert!(out.paths.iter().all(Path::is_shortest));
        }
    }

    #[test]
    fn cycle_breaking_keeps_weight() {
        // Staircases picked at random along an optimal matching often close
        // cycles, unlike the flow decomposition.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut cyclic = 0;
        for _ in 0..300 {
            let (w, h) = (rng.gen_range(2..=8), rng.gen_range(2..=8));
            let g = Geometry::grid(w, h).unwrap();
            let s: Vec<Vertex> = g.vertices().filter(|v| v.x < w / 2 && rng.gen_bool(0.6)).collect();
            let t: Vec<Vertex> = g.vertices().filter(|v| v.x >= w / 2 && rng.gen_bool(0.6)).take(s.len()).collect();
            let p = Problem::new(
                g,
                Configuration::from_vertices(g, s).unwrap(),
                Configuration::from_vertices(g, t).unwrap(),
            )
            .unwrap();
            let (matching, _) = mcmf_matching(&p).unwrap();
            let paths = matching
                .iter()
                .map(|&(s, t)| {
                    let policy = if rng.gen_bool(0.5) {
                        crate::geometry::StaircasePolicy::VerticalFirst
                    } else {
                        crate::geometry::StaircasePolicy::HorizontalFirst
                    };
                    p.geometry.shortest_path(s, t, policy).unwrap()
                })
                .collect();
            let ps = PathSystem::new(paths);
            let out = break_cycles(&p, &ps).unwrap();
            assert!(is_forest(&out));
            assert_eq!(out.weight(), ps.weight());
            assert!(out.paths.iter().all(Path::is_shortest));
            if is_forest(&ps) {
                assert_eq!(out, ps);
            } else {
                cyclic += 1;
                assert!(edge_set(&out).len() < edge_set(&ps).len());
                let sol = order_moves_forest(&p.sources, &out).unwrap();
                assert!(validate_solution(&p, &sol).passed());
            }
        }
        assert!(cyclic > 0, "no cyclic system found to exercise the deletion loop");
    }

    #[test]
    fn forest_ordering_examples() {
        let g = Geometry::chain(3).unwrap();
        let occ = conf(g, &[(0, 0), (1, 0)]);
        let ps = PathSystem::new(vec![
            Path::new(vec![Vertex::new(0, 0), Vertex::new(1, 0)]),
            Path::new(vec![Vertex::new(1, 0), Vertex::new(2, 0)]),
        ]);
        let sol = order_moves_forest(&occ, &ps).unwrap();
        let firsts: Vec<_> = sol.path_system.paths.iter().map(|p| (p.source().x, p.target().x)).collect();
        assert_eq!(firsts, vec![(1, 2), (0, 1)]);

        // Three paths feeding one branch of a tree.
        let g = Geometry::grid(3, 3).unwrap();
        let p = problem(g, &[(0, 0), (0, 2), (1, 1)], &[(2, 1), (2, 0), (2, 2)]);
        let ps = PathSystem::new(vec![
            Path::new([(0, 0), (1, 0), (2, 0)].map(Vertex::from).to_vec()),
            Path::new([(0, 2), (1, 2), (2, 2)].map(Vertex::from).to_vec()),
            Path::new([(1, 1), (2, 1)].map(Vertex::from).to_vec()),
        ]);
        let sol = order_moves_forest(&p.sources, &ps).unwrap();
        assert!(validate_solution(&p, &sol).passed());

        let g = Geometry::grid(2, 2).unwrap();
        let occ = conf(g, &[(0, 0)]);
        let trivial = PathSystem::new(vec![Path::new(vec![Vertex::new(0, 0)])]);
        assert!(order_moves_forest(&occ, &trivial).unwrap().schedule.is_empty());
    }

    #[test]
    fn aro_is_exact_and_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let Some(p) = random_problem(&mut rng, 8, 10) else { continue };
            let sol = aro(&p).unwrap();
            let report = validate_solution(&p, &sol);
            assert!(report.passed(), "{report}");
            let opt = brute_force_min_matching(&p, OracleMode::Hungarian).unwrap().weight;
            assert_eq!(sol.stats.total_displacement as u64, opt);
        }
        let g = Geometry::grid(2, 2).unwrap();
        assert!(aro(&problem(g, &[(0, 1)], &[(0, 1)])).unwrap().schedule.is_empty());
    }
}
