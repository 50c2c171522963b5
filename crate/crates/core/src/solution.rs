//! Solutions, the move dependency graph, the deterministic executor and the
//! solution validator shared by every solver.

use std::collections::HashMap;
use std::fmt;

use crate::error::{ReconfError, Result};
use crate::geometry::{Configuration, ElementaryMove, Path, PathSystem, Problem};

/// Dependency graph over paths: an edge `(i, j)` means path `i` runs before `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveDag {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl MoveDag {
    pub fn new(node_count: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= node_count || b >= node_count) {
            return Err(ReconfError::InvalidInput(format!(
                "dag edge ({a}, {b}) references a path outside 0..{node_count}"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        let dag = MoveDag { node_count, edges };
        if dag.topological_order().is_none() {
            return Err(ReconfError::CyclicDag);
        }
        Ok(dag)
    }

    /// Connects every pair of paths that share a vertex, oriented by the
    /// given execution order. Only consecutive visitors of each vertex are
    /// linked; the remaining pairs follow transitively.
    pub fn from_execution_order(paths: &[Path]) -> Self {
        let w = paths.iter().flat_map(|p| &p.vertices).map(|v| v.x + 1).max().unwrap_or(0);
        let h = paths.iter().flat_map(|p| &p.vertices).map(|v| v.y + 1).max().unwrap_or(0);
        let mut last = vec![usize::MAX; w * h];
        let mut seen = vec![usize::MAX; paths.len()];
        let mut by_head = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            for v in &p.vertices {
                let j = std::mem::replace(&mut last[v.x * h + v.y], i);
                if j != usize::MAX && j != i && seen[j] != i {
                    seen[j] = i;
                    by_head.push((j, i));
                }
            }
        }
        // Heads arrive in increasing order, so a stable counting pass on the
        // tail sorts the edge list in linear time.
        let mut start = vec![0usize; paths.len() + 1];
        for &(j, _) in &by_head {
            start[j + 1] += 1;
        }
        for k in 0..paths.len() {
            start[k + 1] += start[k];
        }
        let mut edges = vec![(0, 0); by_head.len()];
        for e in by_head {
            edges[start[e.0]] = e;
            start[e.0] += 1;
        }
        MoveDag {
            node_count: paths.len(),
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.node_count];
        for &(a, b) in &self.edges {
            succ[a].push(b);
        }
        succ
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(_, b) in &self.edges {
            deg[b] += 1;
        }
        deg
    }

    /// Kahn's algorithm, smallest ready id first. `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let succ = self.successors();
        let mut deg = self.in_degrees();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = deg
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| std::cmp::Reverse(i))
            .collect();
        let mut order = Vec::with_capacity(self.node_count);
        while let Some(std::cmp::Reverse(i)) = ready.pop() {
            order.push(i);
            for &j in &succ[i] {
                deg[j] -= 1;
                if deg[j] == 0 {
                    ready.push(std::cmp::Reverse(j));
                }
            }
        }
        (order.len() == self.node_count).then_some(order)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolutionStats {
    pub displaced_tokens: usize,
    pub total_displacement: usize,
}

/// Executed path system in execution order, its flattened schedule and the
/// dependency graph. Trivial (zero-length) paths are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub path_system: PathSystem,
    pub schedule: Vec<ElementaryMove>,
    pub dag: MoveDag,
    pub stats: SolutionStats,
}

impl Solution {
    pub fn from_ordered_paths(paths: Vec<Path>) -> Self {
        let paths: Vec<Path> = paths.into_iter().filter(|p| !p.is_trivial()).collect();
        let dag = MoveDag::from_execution_order(&paths);
        let schedule: Vec<ElementaryMove> = paths.iter().flat_map(Path::moves).collect();
        let stats = SolutionStats {
            displaced_tokens: paths.len(),
            total_displacement: schedule.len(),
        };
        Solution {
            path_system: PathSystem::new(paths),
            schedule,
            dag,
            stats,
        }
    }
}

/// Applies the moves in order. Fails if a move starts on an empty vertex or
/// lands on an occupied one.
pub fn execute_schedule(config: &Configuration, schedule: &[ElementaryMove]) -> Result<Configuration> {
    let g = config.geometry();
    let mut cur = config.clone();
    for (index, m) in schedule.iter().enumerate() {
        if !g.contains(m.from) || !g.contains(m.to) {
            return Err(ReconfError::Collision {
                index,
                reason: "move leaves the geometry".into(),
            });
        }
        if !m.is_elementary() {
            return Err(ReconfError::Collision {
                index,
                reason: format!("move {:?} -> {:?} is not elementary", m.from, m.to),
            });
        }
        if !cur.contains(m.from) {
            return Err(ReconfError::Collision {
                index,
                reason: format!("source ({}, {}) is empty", m.from.x, m.from.y),
            });
        }
        if cur.contains(m.to) {
            return Err(ReconfError::Collision {
                index,
                reason: format!("destination ({}, {}) is occupied", m.to.x, m.to.y),
            });
        }
        cur.remove(m.from);
        cur.insert(m.to);
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    Execution(String),
    TargetsUncovered(usize),
    EdgeMultisetMismatch,
    NonShortestPath(usize),
    DuplicateEndpoints,
    NotPathContiguous(usize),
    CyclicDag,
    DagMismatch,
    DagOrderViolation(usize, usize),
    StatsMismatch,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::Execution(e) => write!(f, "execution failed: {e}"),
            ValidationFailure::TargetsUncovered(n) => write!(f, "{n} targets left empty"),
            ValidationFailure::EdgeMultisetMismatch => {
                write!(f, "schedule moves differ from the path-system edges")
            }
            ValidationFailure::NonShortestPath(i) => write!(f, "path {i} is not a shortest path"),
            ValidationFailure::DuplicateEndpoints => write!(f, "paths share a source or a target"),
            ValidationFailure::NotPathContiguous(i) => {
                write!(f, "schedule position {i} does not continue a path")
            }
            ValidationFailure::CyclicDag => write!(f, "dependency graph is cyclic"),
            ValidationFailure::DagMismatch => {
                write!(f, "dependency graph size differs from the path count")
            }
            ValidationFailure::DagOrderViolation(a, b) => {
                write!(f, "path {b} runs before its predecessor {a}")
            }
            ValidationFailure::StatsMismatch => write!(f, "stats disagree with the path system"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "fail:")?;
        for fail in &self.failures {
            write!(f, " {fail};")?;
        }
        Ok(())
    }
}

pub fn validate_solution(problem: &Problem, solution: &Solution) -> ValidationReport {
    let mut failures = Vec::new();
    match execute_schedule(&problem.sources, &solution.schedule) {
        Ok(end) => {
            let missing = problem.targets.iter().filter(|&t| !end.contains(t)).count();
            if missing > 0 {
                failures.push(ValidationFailure::TargetsUncovered(missing));
            }
        }
        Err(e) => failures.push(ValidationFailure::Execution(e.to_string())),
    }

    let paths = &solution.path_system.paths;
    let mut scheduled = solution.schedule.clone();
    let mut edges: Vec<ElementaryMove> = solution.path_system.moves().collect();
    scheduled.sort_unstable();
    edges.sort_unstable();
    if scheduled != edges {
        failures.push(ValidationFailure::EdgeMultisetMismatch);
    }
    if let Some(i) = paths.iter().position(|p| !p.is_shortest()) {
        failures.push(ValidationFailure::NonShortestPath(i));
    }
    if !solution.path_system.has_distinct_endpoints() {
        failures.push(ValidationFailure::DuplicateEndpoints);
    }
    let stats = &solution.stats;
    if stats.total_displacement != solution.path_system.weight() {
        failures.push(ValidationFailure::StatsMismatch);
    }

    if solution.dag.node_count() != paths.len() {
        failures.push(ValidationFailure::DagMismatch);
    } else if solution.dag.topological_order().is_none() {
        failures.push(ValidationFailure::CyclicDag);
    } else {
        match path_order(paths, &solution.schedule) {
            Ok(position) => {
                for &(a, b) in solution.dag.edges() {
                    if position[a] >= position[b] {
                        failures.push(ValidationFailure::DagOrderViolation(a, b));
                        break;
                    }
                }
            }
            Err(at) => failures.push(ValidationFailure::NotPathContiguous(at)),
        }
    }
    ValidationReport { failures }
}

/// Splits the schedule into whole paths and returns each path's rank.
fn path_order(paths: &[Path], schedule: &[ElementaryMove]) -> std::result::Result<Vec<usize>, usize> {
    let by_first: HashMap<ElementaryMove, usize> = paths
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_trivial())
        .map(|(i, p)| (ElementaryMove::new(p.vertices[0], p.vertices[1]), i))
        .collect();
    let mut position = vec![usize::MAX; paths.len()];
    let mut pos = 0;
    let mut rank = 0;
    while pos < schedule.len() {
        let &i = by_first.get(&schedule[pos]).ok_or(pos)?;
        if position[i] != usize::MAX {
            return Err(pos);
        }
        let len = paths[i].len();
        if pos + len > schedule.len() || !paths[i].moves().eq(schedule[pos..pos + len].iter().copied()) {
            return Err(pos);
        }
        position[i] = rank;
        rank += 1;
        pos += len;
    }
    for (i, p) in paths.iter().enumerate() {
        if position[i] == usize::MAX {
            if !p.is_trivial() {
                return Err(schedule.len());
            }
            position[i] = rank;
            rank += 1;
        }
    }
    Ok(position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Geometry, Vertex};

    fn v(x: usize) -> Vertex {
        Vertex::new(x, 0)
    }

    fn mv(a: usize, b: usize) -> ElementaryMove {
        ElementaryMove::new(v(a), v(b))
    }

    #[test]
    fn execute_examples() {
        let g = Geometry::chain(4).unwrap();
        let c = Configuration::from_vertices(g, [v(0)]).unwrap();
        assert_eq!(execute_schedule(&c, &[]).unwrap(), c);
        let end = execute_schedule(&c, &[mv(0, 1), mv(1, 2)]).unwrap();
        assert_eq!(end.iter().collect::<Vec<_>>(), vec![v(2)]);
        let c2 = Configuration::from_vertices(g, [v(0), v(1)]).unwrap();
        assert!(matches!(
            execute_schedule(&c2, &[mv(0, 1)]),
            Err(ReconfError::Collision { index: 0, .. })
        ));
        assert!(execute_schedule(&c, &[mv(1, 2)]).is_err());
    }

    fn chain_problem(n: usize, s: &[usize], t: &[usize]) -> Problem {
        let g = Geometry::chain(n).unwrap();
        Problem::new(
            g,
            Configuration::from_vertices(g, s.iter().map(|&i| v(i))).unwrap(),
            Configuration::from_vertices(g, t.iter().map(|&i| v(i))).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn already_solved_passes() {
        let p = chain_problem(4, &[1, 2], &[1, 2]);
        let report = validate_solution(&p, &Solution::default());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn omitted_edge_fails() {
        let p = chain_problem(4, &[0], &[2]);
        let mut s = Solution::from_ordered_paths(vec![Path::new(vec![v(0), v(1), v(2)])]);
        assert!(validate_solution(&p, &s).passed());
        s.schedule.pop();
        let report = validate_solution(&p, &s);
        assert!(report.failures.contains(&ValidationFailure::EdgeMultisetMismatch));
    }

    #[test]
    fn reversed_dependent_paths_fail() {
        // token at 1 must clear to 2 before token at 0 can enter 1
        let p = chain_problem(3, &[0, 1], &[1, 2]);
        let a = Path::new(vec![v(1), v(2)]);
        let b = Path::new(vec![v(0), v(1)]);
        let good = Solution::from_ordered_paths(vec![a.clone(), b.clone()]);
        assert!(validate_solution(&p, &good).passed());
        assert_eq!(good.dag.edges(), &[(0, 1)]);

        let mut bad = good.clone();
        bad.schedule = vec![mv(0, 1), mv(1, 2)];
        let report = validate_solution(&p, &bad);
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, ValidationFailure::Execution(_))));
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, ValidationFailure::DagOrderViolation(0, 1))));
    }

    #[test]
    fn dag_rejects_cycles() {
        assert_eq!(MoveDag::new(2, vec![(0, 1), (1, 0)]), Err(ReconfError::CyclicDag));
        assert!(MoveDag::new(2, vec![(0, 2)]).is_err());
        assert_eq!(
            MoveDag::new(3, vec![(0, 2), (1, 2)]).unwrap().topological_order(),
            Some(vec![0, 1, 2])
        );
    }
}
