use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ReconfError, Result};
use crate::geometry::{GeometryKind, Problem};
use crate::solution::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact1d,
    Redrec,
    Bird,
    Aro,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Exact1d, Algorithm::Redrec, Algorithm::Bird, Algorithm::Aro];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact1d => "exact1d",
            Algorithm::Redrec => "redrec",
            Algorithm::Bird => "bird",
            Algorithm::Aro => "aro",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ReconfError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ReconfError::InvalidInput(format!("unknown algorithm {s:?}")))
    }
}

/// Dispatches to the named solver. `exact1d` accepts chains only; red-rec
/// and bird need a centered target region.
pub fn solve(problem: &Problem, algorithm: Algorithm) -> Result<Solution> {
    match algorithm {
        Algorithm::Exact1d => {
            if problem.geometry.kind() != GeometryKind::Chain {
                return Err(ReconfError::InvalidInput("exact1d runs on chains".into()));
            }
            let n = problem.geometry.vertex_count();
            let s: Vec<usize> = problem.sources.iter().map(|v| v.x).collect();
            let t: Vec<usize> = problem.targets.iter().map(|v| v.x).collect();
            crate::exact1d::solve_1d(n, &s, &t)
        }
        Algorithm::Redrec => crate::redrec::red_rec(problem),
        Algorithm::Bird => crate::bird::bird(problem),
        Algorithm::Aro => crate::aro::aro(problem),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{a}\""));
        }
        assert!("red-rec".parse::<Algorithm>().is_err());
    }
}
