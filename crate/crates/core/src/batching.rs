//! Grouping elementary moves into simultaneous batches.
//!
//! Each round collects the paths with no pending predecessor in the move DAG
//! and takes the next edge of each, skipping edges that touch a vertex
//! already used by the round or that break a local constraint. Paths leave
//! the DAG once their last edge is batched.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{ReconfError, Result};
use crate::geometry::{Configuration, Direction, ElementaryMove, PathSystem, Vertex};
use crate::solution::MoveDag;

/// A pairwise admissibility test between two moves of one batch.
pub trait LocalConstraint: Send + Sync {
    fn compatible(&self, a: &ElementaryMove, b: &ElementaryMove) -> bool;
}

/// Moves share a column and both go up or both go down, or share a row and
/// both go left or both go right.
#[derive(Clone, Copy, Debug, Default)]
pub struct SameLineSameDirection;

impl LocalConstraint for SameLineSameDirection {
    fn compatible(&self, a: &ElementaryMove, b: &ElementaryMove) -> bool {
        match (a.direction(), b.direction()) {
            (Some(da), Some(db)) if da == db => match da {
                Direction::Up | Direction::Down => a.from.x == b.from.x,
                Direction::Left | Direction::Right => a.from.y == b.from.y,
            },
            _ => false,
        }
    }
}

#[derive(Default)]
pub struct ConstraintSet {
    constraints: Vec<Box<dyn LocalConstraint>>,
}

impl ConstraintSet {
    pub fn none() -> Self {
        ConstraintSet::default()
    }

    pub fn with(mut self, c: impl LocalConstraint + 'static) -> Self {
        self.constraints.push(Box::new(c));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn compatible(&self, a: &ElementaryMove, b: &ElementaryMove) -> bool {
        self.constraints.iter().all(|c| c.compatible(a, b))
    }
}

impl std::fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConstraintSet({} constraints)", self.constraints.len())
    }
}

/// The constraint of the deployed control system.
pub fn deployed_constraint() -> ConstraintSet {
    ConstraintSet::none().with(SameLineSameDirection)
}

/// Named constraint sets selectable from configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintPreset {
    #[default]
    None,
    ColumnDirection,
}

impl ConstraintPreset {
    pub fn build(self) -> ConstraintSet {
        match self {
            ConstraintPreset::None => ConstraintSet::none(),
            ConstraintPreset::ColumnDirection => deployed_constraint(),
        }
    }
}

impl std::str::FromStr for ConstraintPreset {
    type Err = ReconfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ConstraintPreset::None),
            "column-direction" => Ok(ConstraintPreset::ColumnDirection),
            _ => Err(ReconfError::InvalidInput(format!("unknown constraint preset {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Col,
    Row,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub axis: Option<Axis>,
    pub dir: Option<Direction>,
    pub moves: Vec<ElementaryMove>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSchedule {
    pub batches: Vec<Batch>,
}

impl BatchSchedule {
    pub fn len(&self) -> usize {
        self.batches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.batches.is_empty()
    }

    pub fn move_count(&self) -> usize {
        self.batches.iter().map(|b| b.moves.len()).sum()
    }

    pub fn moves(&self) -> impl Iterator<Item = &ElementaryMove> {
        self.batches.iter().flat_map(|b| &b.moves)
    }
}

/// Path indices moved by each batch, in batch order. The `k`-th appearance
/// of a path moves it along its `k`-th edge.
pub fn batch_plan(system: &PathSystem, dag: &MoveDag, constraints: &ConstraintSet) -> Result<Vec<Vec<usize>>> {
    let n = system.paths.len();
    if dag.node_count() != n {
        return Err(ReconfError::InvalidInput(format!(
            "dag has {} nodes for {n} paths",
            dag.node_count()
        )));
    }
    if dag.topological_order().is_none() {
        return Err(ReconfError::CyclicDag);
    }
    let succ = dag.successors();
    let mut indeg = dag.in_degrees();
    let mut next = vec![0usize; n];
    let mut alive: Vec<usize> = (0..n).filter(|&i| !system.paths[i].is_trivial()).collect();
    // Trivial paths carry no edges; release their successors right away.
    for i in (0..n).filter(|&i| system.paths[i].is_trivial()) {
        for &j in &succ[i] {
            indeg[j] -= 1;
        }
    }
    let mut plan = Vec::new();
    while !alive.is_empty() {
        let ready: Vec<usize> = alive.iter().copied().filter(|&i| indeg[i] == 0).collect();
        if ready.is_empty() {
            return Err(ReconfError::Internal("no path is ready in batching".into()));
        }
        let mut used: HashSet<Vertex> = HashSet::new();
        let mut batch: Vec<ElementaryMove> = Vec::new();
        let mut members = Vec::new();
        let mut finished = Vec::new();
        for i in ready {
            let p = &system.paths[i];
            let mv = ElementaryMove::new(p.vertices[next[i]], p.vertices[next[i] + 1]);
            if used.contains(&mv.from) || used.contains(&mv.to) {
                continue;
            }
            if !batch.iter().all(|b| constraints.compatible(b, &mv)) {
                continue;
            }
            used.insert(mv.from);
            used.insert(mv.to);
            batch.push(mv);
            members.push(i);
            next[i] += 1;
            if next[i] == p.len() {
                finished.push(i);
            }
        }
        for &i in &finished {
            for &j in &succ[i] {
                indeg[j] -= 1;
            }
        }
        if !finished.is_empty() {
            let done: HashSet<usize> = finished.into_iter().collect();
            alive.retain(|i| !done.contains(i));
        }
        plan.push(members);
    }
    Ok(plan)
}

pub fn batch_moves(system: &PathSystem, dag: &MoveDag, constraints: &ConstraintSet) -> Result<BatchSchedule> {
    let plan = batch_plan(system, dag, constraints)?;
    let tag = !constraints.is_empty();
    let mut next = vec![0usize; system.paths.len()];
    let batches = plan
        .into_iter()
        .map(|members| {
            let moves: Vec<ElementaryMove> = members
                .into_iter()
                .map(|i| {
                    let p = &system.paths[i];
                    next[i] += 1;
                    ElementaryMove::new(p.vertices[next[i] - 1], p.vertices[next[i]])
                })
                .collect();
            let (axis, dir) = match (tag, moves[0].direction()) {
                (true, Some(d @ (Direction::Up | Direction::Down))) => (Some(Axis::Col), Some(d)),
                (true, Some(d)) => (Some(Axis::Row), Some(d)),
                _ => (None, None),
            };
            Batch { axis, dir, moves }
        })
        .collect();
    Ok(BatchSchedule { batches })
}

/// Runs the batches in order, each as one simultaneous step: every move of
/// a batch must start on an occupied vertex and end on a vertex that is free
/// before the batch, and no vertex may be used twice within a batch.
pub fn execute_batches(config: &Configuration, schedule: &BatchSchedule) -> Result<Configuration> {
    let mut occ = config.clone();
    let mut index = 0;
    for batch in &schedule.batches {
        let mut seen = HashSet::new();
        for mv in &batch.moves {
            let fail = |reason: String| ReconfError::Collision { index, reason };
            if !mv.is_elementary() {
                return Err(fail(format!("{mv:?} is not a unit step")));
            }
            if !seen.insert(mv.from) || !seen.insert(mv.to) {
                return Err(fail(format!("{mv:?} shares a vertex within its batch")));
            }
            if !occ.contains(mv.from) {
                return Err(fail(format!("{mv:?} starts on an empty vertex")));
            }
            if occ.contains(mv.to) {
                return Err(fail(format!("{mv:?} ends on an occupied vertex")));
            }
            index += 1;
        }
        for mv in &batch.moves {
            occ.remove(mv.from);
        }
        for mv in &batch.moves {
            occ.insert(mv.to);
        }
    }
    Ok(occ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Geometry, Path, Vertex};
    use crate::solution::Solution;

    fn v(x: usize, y: usize) -> Vertex {
        Vertex::new(x, y)
    }

    fn mv(a: (usize, usize), b: (usize, usize)) -> ElementaryMove {
        ElementaryMove::new(v(a.0, a.1), v(b.0, b.1))
    }

    #[test]
    fn batching_examples() {
        let sol = Solution::from_ordered_paths(vec![
            Path::new(vec![v(0, 0), v(1, 0)]),
            Path::new(vec![v(3, 0), v(4, 0)]),
        ]);
        let b = batch_moves(&sol.path_system, &sol.dag, &ConstraintSet::none()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.batches[0].moves.len(), 2);

        // First edges meet at (1, 0): one must wait.
        let ps = PathSystem::new(vec![
            Path::new(vec![v(0, 0), v(1, 0)]),
            Path::new(vec![v(2, 0), v(1, 0)]),
        ]);
        let dag = MoveDag::new(2, vec![]).unwrap();
        assert_eq!(batch_moves(&ps, &dag, &ConstraintSet::none()).unwrap().len(), 2);

        let sol = Solution::from_ordered_paths(vec![Path::new(vec![v(0, 0), v(1, 0), v(2, 0), v(3, 0)])]);
        let b = batch_moves(&sol.path_system, &sol.dag, &ConstraintSet::none()).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.batches.iter().all(|b| b.moves.len() == 1));
    }

    #[test]
    fn deployed_constraint_examples() {
        let c = deployed_constraint();
        assert!(c.compatible(&mv((2, 3), (2, 4)), &mv((2, 7), (2, 8))));
        assert!(!c.compatible(&mv((2, 3), (2, 4)), &mv((2, 7), (2, 6))));
        assert!(!c.compatible(&mv((2, 3), (2, 4)), &mv((5, 3), (5, 4))));
        assert!(c.compatible(&mv((0, 3), (1, 3)), &mv((4, 3), (5, 3))));
    }

    #[test]
    fn constrained_batches_are_tagged_and_executable() {
        let g = Geometry::grid(4, 4).unwrap();
        let sol = Solution::from_ordered_paths(vec![
            Path::new(vec![v(0, 0), v(0, 1), v(0, 2)]),
            Path::new(vec![v(2, 0), v(2, 1)]),
            Path::new(vec![v(3, 3), v(2, 3)]),
        ]);
        let start = Configuration::from_vertices(g, [v(0, 0), v(2, 0), v(3, 3)]).unwrap();
        let free = batch_moves(&sol.path_system, &sol.dag, &ConstraintSet::none()).unwrap();
        let tied = batch_moves(&sol.path_system, &sol.dag, &deployed_constraint()).unwrap();
        assert_eq!(free.len(), 2);
        assert!(tied.len() >= free.len());
        assert!(tied.batches.iter().all(|b| b.axis.is_some() && b.dir.is_some()));
        let a = execute_batches(&start, &free).unwrap();
        let b = execute_batches(&start, &tied).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(v(0, 2)) && a.contains(v(2, 1)) && a.contains(v(2, 3)));
    }

    #[test]
    fn cyclic_dag_is_rejected() {
        assert!(MoveDag::new(2, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn simultaneous_executor_rejects_shared_vertices() {
        let g = Geometry::chain(3).unwrap();
        let start = Configuration::from_vertices(g, [v(0, 0), v(1, 0)]).unwrap();
        let bad = BatchSchedule {
            batches: vec![Batch { axis: None, dir: None, moves: vec![mv((1, 0), (2, 0)), mv((0, 0), (1, 0))] }],
        };
        assert!(execute_batches(&start, &bad).is_err());
    }

    #[test]
    fn schedule_json_shape() {
        let s = BatchSchedule {
            batches: vec![Batch { axis: Some(Axis::Col), dir: Some(Direction::Up), moves: vec![mv((0, 0), (0, 1))] }],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"batches":[{"axis":"col","dir":"up","moves":[[[0,0],[0,1]]]}]}"#);
        assert_eq!(serde_json::from_str::<BatchSchedule>(&json).unwrap(), s);
    }
}
