//! Brute-force references for tests: minimum-weight matchings by subset DP
//! and by the Hungarian method, exhaustive 1D assignment, and a plain
//! set-based schedule checker that shares no code with the main executor.

use std::collections::HashSet;

use crate::error::{ReconfError, Result};
use crate::geometry::{ElementaryMove, Problem, Vertex};

/// Subset DP is limited to this many targets.
pub const EXHAUSTIVE_MAX_TARGETS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    Hungarian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub weight: u64,
    /// `(source, target)` pairs of one optimal matching.
    pub witness: Vec<(Vertex, Vertex)>,
}

/// Minimum cost of assigning every target a distinct source, by DP over the
/// set of targets already covered while scanning sources. Returns the
/// weight and, for each target, its source index.
fn subset_dp(n_src: usize, n_tgt: usize, cost: impl Fn(usize, usize) -> u64) -> Result<(u64, Vec<usize>)> {
    if n_src < n_tgt {
        return Err(ReconfError::infeasible(n_src, n_tgt));
    }
    if n_tgt > EXHAUSTIVE_MAX_TARGETS {
        return Err(ReconfError::InvalidInput(format!(
            "exhaustive oracle supports at most {EXHAUSTIVE_MAX_TARGETS} targets, got {n_tgt}"
        )));
    }
    let full = 1usize << n_tgt;
    const INF: u64 = u64::MAX / 2;
    let mut dp = vec![INF; full];
    dp[0] = 0;
    // choice[s][mask]: target taken by source s to reach mask, or u8::MAX.
    let mut choice = vec![vec![u8::MAX; full]; n_src];
    for s in 0..n_src {
        let mut next = dp.clone();
        for mask in 0..full {
            if dp[mask] >= INF {
                continue;
            }
            for t in 0..n_tgt {
                if mask & (1 << t) != 0 {
                    continue;
                }
                let m2 = mask | (1 << t);
                let c = dp[mask] + cost(s, t);
                if c < next[m2] {
                    next[m2] = c;
                    choice[s][m2] = t as u8;
                }
            }
        }
        dp = next;
    }
    let mut owner = vec![usize::MAX; n_tgt];
    let mut mask = full - 1;
    for s in (0..n_src).rev() {
        let t = choice[s][mask];
        if t != u8::MAX {
            owner[t as usize] = s;
            mask &= !(1 << t);
        }
    }
    debug_assert_eq!(mask, 0);
    Ok((dp[full - 1], owner))
}

/// Rectangular Hungarian method with potentials, `O(n^2 m)` for `n` targets
/// and `m >= n` sources. Returns the weight and each target's source index.
fn hungarian(n_src: usize, n_tgt: usize, cost: impl Fn(usize, usize) -> u64) -> Result<(u64, Vec<usize>)> {
    if n_src < n_tgt {
        return Err(ReconfError::infeasible(n_src, n_tgt));
    }
    let (n, m) = (n_tgt, n_src);
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut row_of = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(j - 1, i0 - 1) as i64 - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut owner = vec![usize::MAX; n];
    let mut weight = 0;
    for j in 1..=m {
        if row_of[j] != 0 {
            owner[row_of[j] - 1] = j - 1;
            weight += cost(j - 1, row_of[j] - 1);
        }
    }
    Ok((weight, owner))
}

/// Exact minimum `sum d(s, t)` over injections from targets into sources.
pub fn brute_force_min_matching(problem: &Problem, mode: OracleMode) -> Result<OracleResult> {
    let src: Vec<Vertex> = problem.sources.iter().collect();
    let tgt: Vec<Vertex> = problem.targets.iter().collect();
    let cost = |s: usize, t: usize| src[s].manhattan(tgt[t]) as u64;
    let (weight, owner) = match mode {
        OracleMode::Exhaustive => subset_dp(src.len(), tgt.len(), cost)?,
        OracleMode::Hungarian => hungarian(src.len(), tgt.len(), cost)?,
    };
    let witness = owner.iter().enumerate().map(|(t, &s)| (src[s], tgt[t])).collect();
    Ok(OracleResult { weight, witness })
}

/// Exhaustive minimum for a line instance. Positions may repeat in
/// `sources` to model several tokens on one vertex.
pub fn exhaustive_line_assignment(sources: &[i64], targets: &[i64]) -> Result<u64> {
    subset_dp(sources.len(), targets.len(), |s, t| sources[s].abs_diff(targets[t])).map(|r| r.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    /// `solver - oracle`; negative values mean the oracle is wrong.
    pub gap: i64,
}

/// Exact solvers must hit the oracle weight; heuristics may exceed it.
pub fn check_equivalence(solver_weight: u64, oracle_weight: u64, expect_exact: bool) -> Verdict {
    let gap = solver_weight as i64 - oracle_weight as i64;
    let ok = if expect_exact { gap == 0 } else { gap >= 0 };
    Verdict { ok, gap }
}

/// Replays a schedule on a plain vertex set. True when every move is a unit
/// step from an occupied vertex to a free one and the end state covers the
/// targets.
pub fn reference_schedule_check(problem: &Problem, schedule: &[ElementaryMove]) -> bool {
    let mut occ: HashSet<Vertex> = problem.sources.iter().collect();
    for mv in schedule {
        if mv.from.manhattan(mv.to) != 1 || !problem.geometry.contains(mv.to) {
            return false;
        }
        if !occ.remove(&mv.from) || !occ.insert(mv.to) {
            return false;
        }
    }
    problem.targets.iter().all(|t| occ.contains(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Configuration, Geometry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(g: Geometry, s: &[(usize, usize)], t: &[(usize, usize)]) -> Problem {
        let conf = |vs: &[(usize, usize)]| {
            Configuration::from_vertices(g, vs.iter().map(|&v| Vertex::from(v))).unwrap()
        };
        Problem::new(g, conf(s), conf(t)).unwrap()
    }

    #[test]
    fn examples() {
        let chain = Geometry::chain(4).unwrap();
        let p = problem(chain, &[(0, 0), (3, 0)], &[(1, 0), (2, 0)]);
        for mode in [OracleMode::Exhaustive, OracleMode::Hungarian] {
            assert_eq!(brute_force_min_matching(&p, mode).unwrap().weight, 2);
        }
        let p = problem(chain, &[(0, 0), (2, 0)], &[(0, 0), (2, 0)]);
        assert_eq!(brute_force_min_matching(&p, OracleMode::Hungarian).unwrap().weight, 0);
        let g = Geometry::grid(2, 2).unwrap();
        let p = problem(g, &[(0, 0)], &[(1, 1)]);
        assert_eq!(brute_force_min_matching(&p, OracleMode::Exhaustive).unwrap().weight, 2);
        let p = problem(g, &[(0, 0)], &[(1, 1), (0, 1)]);
        assert!(matches!(
            brute_force_min_matching(&p, OracleMode::Hungarian),
            Err(ReconfError::Infeasible { .. })
        ));
    }

    #[test]
    fn modes_agree_on_random_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (w, h) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let g = Geometry::grid(w, h).unwrap();
            let mut s = Configuration::empty(g);
            let mut t = Configuration::empty(g);
            for v in g.vertices() {
                if rng.gen_bool(0.5) {
                    s.insert(v);
                }
                if rng.gen_bool(0.25) && t.len() < 9 {
                    t.insert(v);
                }
            }
            if s.len() < t.len() {
                continue;
            }
            let p = Problem::new(g, s, t).unwrap();
            let a = brute_force_min_matching(&p, OracleMode::Exhaustive).unwrap();
            let b = brute_force_min_matching(&p, OracleMode::Hungarian).unwrap();
            assert_eq!(a.weight, b.weight);
            for r in [a, b] {
                let sum: u64 = r.witness.iter().map(|(s, t)| s.manhattan(*t) as u64).sum();
                assert_eq!(sum, r.weight);
            }
        }
    }

    #[test]
    fn line_oracle_with_multiplicity() {
        assert_eq!(exhaustive_line_assignment(&[0, 0, 3], &[1, 2]).unwrap(), 2);
        assert_eq!(exhaustive_line_assignment(&[0, 0, 0], &[1, 2]).unwrap(), 3);
        assert!(exhaustive_line_assignment(&[0], &[1, 2]).is_err());
    }

    #[test]
    fn verdicts() {
        assert!(check_equivalence(5, 5, true).ok);
        assert!(!check_equivalence(6, 5, true).ok);
        let v = check_equivalence(7, 5, false);
        assert!(v.ok);
        assert_eq!(v.gap, 2);
        assert!(check_equivalence(5, 5, false).ok);
    }
}
