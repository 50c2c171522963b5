//! JSON formats for instances and solutions.
//!
//! An instance lists its sources and either explicit targets or a centered
//! target region. A one-row instance is read as a chain unless `kind` says
//! otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{ReconfError, Result};
use crate::geometry::{Configuration, ElementaryMove, Geometry, GeometryKind, Path, PathSystem, Problem, TargetRegion, Vertex};
use crate::solution::{MoveDag, Solution, SolutionStats};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    List(Vec<Vertex>),
    Region { target_region: TargetRegion },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub width: usize,
    pub height: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<GeometryKind>,
    pub sources: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<TargetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_region: Option<TargetRegion>,
}

impl InstanceFile {
    pub fn from_problem(problem: &Problem) -> Self {
        let g = problem.geometry;
        let targets = match problem.target_region {
            Some(r) => TargetSpec::Region { target_region: r },
            None => TargetSpec::List(problem.targets.iter().collect()),
        };
        InstanceFile {
            width: g.width(),
            height: g.height(),
            kind: Some(g.kind()),
            sources: problem.sources.iter().collect(),
            targets: Some(targets),
            target_region: None,
        }
    }

    pub fn to_problem(&self) -> Result<Problem> {
        let kind = self.kind.unwrap_or(if self.height == 1 { GeometryKind::Chain } else { GeometryKind::Grid });
        let g = match kind {
            GeometryKind::Chain if self.height == 1 => Geometry::chain(self.width)?,
            GeometryKind::Chain => {
                return Err(ReconfError::InvalidInput("a chain has height 1".into()));
            }
            GeometryKind::Grid => Geometry::grid(self.width, self.height)?,
        };
        let sources = Configuration::from_vertices(g, self.sources.iter().copied())?;
        if sources.len() != self.sources.len() {
            return Err(ReconfError::InvalidInput("duplicate source vertex".into()));
        }
        match (&self.targets, &self.target_region) {
            (Some(TargetSpec::List(t)), None) => {
                let targets = Configuration::from_vertices(g, t.iter().copied())?;
                if targets.len() != t.len() {
                    return Err(ReconfError::InvalidInput("duplicate target vertex".into()));
                }
                Problem::new(g, sources, targets)
            }
            (Some(TargetSpec::Region { target_region: TargetRegion { h_prime } }), None)
            | (None, Some(TargetRegion { h_prime })) => Problem::centered(g, sources, *h_prime),
            (None, None) => Err(ReconfError::InvalidInput("instance has no targets".into())),
            (Some(_), Some(_)) => Err(ReconfError::InvalidInput("give either targets or target_region".into())),
        }
    }
}

pub fn read_instance(json: &str) -> Result<Problem> {
    let file: InstanceFile =
        serde_json::from_str(json).map_err(|e| ReconfError::InvalidInput(format!("instance JSON: {e}")))?;
    file.to_problem()
}

pub fn write_instance(problem: &Problem) -> String {
    serde_json::to_string(&InstanceFile::from_problem(problem)).expect("instance serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub moves: Vec<ElementaryMove>,
    pub dag_edges: Vec<(usize, usize)>,
    pub paths: Vec<Path>,
}

impl SolutionFile {
    pub fn from_solution(solution: &Solution) -> Self {
        SolutionFile {
            moves: solution.schedule.clone(),
            dag_edges: solution.dag.edges().to_vec(),
            paths: solution.path_system.paths.clone(),
        }
    }

    /// Rebuilds a solution. The moves must be the paths' edges in order.
    pub fn to_solution(&self) -> Result<Solution> {
        let flat: Vec<ElementaryMove> = self.paths.iter().flat_map(Path::moves).collect();
        if flat != self.moves {
            return Err(ReconfError::InvalidInput("moves do not follow the listed paths".into()));
        }
        if self.paths.iter().any(|p| p.vertices.is_empty()) {
            return Err(ReconfError::InvalidInput("empty path".into()));
        }
        let dag = MoveDag::new(self.paths.len(), self.dag_edges.clone())?;
        Ok(Solution {
            stats: SolutionStats {
                displaced_tokens: self.paths.iter().filter(|p| !p.is_trivial()).count(),
                total_displacement: flat.len(),
            },
            path_system: PathSystem::new(self.paths.clone()),
            schedule: flat,
            dag,
        })
    }
}

pub fn read_solution(json: &str) -> Result<Solution> {
    let file: SolutionFile =
        serde_json::from_str(json).map_err(|e| ReconfError::InvalidInput(format!("solution JSON: {e}")))?;
    file.to_solution()
}

pub fn write_solution(solution: &Solution) -> String {
    serde_json::to_string(&SolutionFile::from_solution(solution)).expect("solution serializes")
}
