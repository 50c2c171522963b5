//! Exact reconfiguration on paths (chains).
//!
//! The assignment works on the net token flow `f_k` across the edge between
//! positions `k` and `k + 1`: a matching saturating the targets costs
//! `sum |f_k|`, and any optimal flow decomposes into an order-preserving
//! matching. The optimal flow is found with a single left-to-right sweep over
//! a convex piecewise-linear cost kept as two heaps of breakpoints, followed
//! by a right-to-left pass that reads off how many tokens each source vertex
//! contributes.

use std::cmp::Reverse;

use rayon::prelude::*;

use crate::error::{ReconfError, Result};
use crate::geometry::{ElementaryMove, Geometry, Path, Vertex};
use crate::solution::{MoveDag, Solution};

/// Matched `(source position, target position)` pairs, sorted by target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching1D {
    pub pairs: Vec<(i64, i64)>,
    pub weight: u64,
}

impl Matching1D {
    fn from_pairs(pairs: Vec<(i64, i64)>) -> Self {
        let weight = pairs.iter().map(|&(s, t)| s.abs_diff(t)).sum();
        Matching1D { pairs, weight }
    }
}

/// A 1D instance whose sources may carry several tokens. Positions run over
/// `offset .. offset + len` and may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generalized1DInstance {
    offset: i64,
    multiplicity: Vec<u32>,
    targets: Vec<bool>,
}

impl Generalized1DInstance {
    /// Empty instance covering positions `lo ..= hi`.
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty position range");
        let len = (hi - lo + 1) as usize;
        Generalized1DInstance {
            offset: lo,
            multiplicity: vec![0; len],
            targets: vec![false; len],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.multiplicity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicity.is_empty()
    }

    fn slot(&self, pos: i64) -> Result<usize> {
        let i = pos - self.offset;
        if i < 0 || i as usize >= self.len() {
            return Err(ReconfError::InvalidInput(format!(
                "position {pos} outside [{}, {}]",
                self.offset,
                self.offset + self.len() as i64 - 1
            )));
        }
        Ok(i as usize)
    }

    pub fn add_tokens(&mut self, pos: i64, count: u32) -> Result<()> {
        let i = self.slot(pos)?;
        self.multiplicity[i] += count;
        Ok(())
    }

    /// Targets hold a single token; adding one twice is an error.
    pub fn add_target(&mut self, pos: i64) -> Result<()> {
        let i = self.slot(pos)?;
        if self.targets[i] {
            return Err(ReconfError::InvalidInput(format!("target {pos} added twice")));
        }
        self.targets[i] = true;
        Ok(())
    }

    pub fn multiplicity(&self, pos: i64) -> u32 {
        self.slot(pos).map(|i| self.multiplicity[i]).unwrap_or(0)
    }

    pub fn is_target(&self, pos: i64) -> bool {
        self.slot(pos).map(|i| self.targets[i]).unwrap_or(false)
    }

    pub fn token_count(&self) -> usize {
        self.multiplicity.iter().map(|&m| m as usize).sum()
    }

    pub fn target_count(&self) -> usize {
        self.targets.iter().filter(|&&t| t).count()
    }
}

/// Tokens used at each slot by a distance-minimizing matching saturating
/// every target.
fn optimal_usage(multiplicity: &[u32], targets: &[bool]) -> Result<Vec<u32>> {
    let n = multiplicity.len();
    let tokens: usize = multiplicity.iter().map(|&m| m as usize).sum();
    let need = targets.iter().filter(|&&t| t).count();
    if tokens < need {
        return Err(ReconfError::infeasible(tokens, need));
    }
    if tokens == need {
        return Ok(multiplicity.to_vec());
    }

    // Breakpoints of the convex cost g(f) over the outgoing flow f, right of
    // its minimum. Adding |f| at an edge pushes two breakpoints at f = 0 and
    // drops the smallest one; the part left of the minimum never influences
    // the result because every breakpoint there already sits at f <= 0.
    // Breakpoints are stored at `f - shift` in a bucket queue, and the queue
    // starts with a wall of n + 1 breakpoints at zero that bounds the flow.
    // Keys lie in -tokens ..= n and the minimum pointer only climbs over
    // buckets it dropped below at most `m` per source, so the sweep is linear.
    let base = tokens as i64;
    let mut count = vec![0u32; tokens + n + 1];
    count[tokens] = (n + 1) as u32;
    let mut low = 0i64;
    let mut shift = 0i64;
    let mut rightmost_min = vec![0i64; n];

    for k in 0..n {
        let m = multiplicity[k] as i64;
        if m > 0 {
            rightmost_min[k] = low + shift;
            shift += m;
        }
        if targets[k] {
            shift -= 1;
        }
        if k + 1 < n {
            let key = -shift;
            count[(key + base) as usize] += 2;
            low = low.min(key);
            count[(low + base) as usize] -= 1;
            while count[(low + base) as usize] == 0 {
                low += 1;
            }
        }
    }

    let mut usage = vec![0u32; n];
    let mut f = 0i64;
    for k in (0..n).rev() {
        if targets[k] {
            f += 1;
        }
        let m = multiplicity[k] as i64;
        if m > 0 {
            let before = (f - m).max(f.min(rightmost_min[k]));
            usage[k] = (f - before) as u32;
            f = before;
        }
    }
    debug_assert_eq!(f, 0, "backward pass must end with zero flow");
    debug_assert_eq!(usage.iter().map(|&u| u as usize).sum::<usize>(), need);
    Ok(usage)
}

fn pairs_from_usage(offset: i64, usage: &[u32], targets: &[bool]) -> Vec<(i64, i64)> {
    let mut pairs = Vec::with_capacity(targets.iter().filter(|&&t| t).count());
    let used = usage
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| std::iter::repeat_n(i as i64 + offset, u as usize));
    let tgts = targets
        .iter()
        .enumerate()
        .filter(|(_, &t)| t)
        .map(|(i, _)| i as i64 + offset);
    pairs.extend(used.zip(tgts));
    pairs
}

fn index_masks(n: usize, sources: &[usize], targets: &[usize]) -> Result<(Vec<u32>, Vec<bool>)> {
    let mut mult = vec![0u32; n];
    let mut tgt = vec![false; n];
    for &s in sources {
        if s >= n {
            return Err(ReconfError::InvalidInput(format!("source {s} outside 0..{n}")));
        }
        if mult[s] > 0 {
            return Err(ReconfError::InvalidInput(format!("source {s} listed twice")));
        }
        mult[s] = 1;
    }
    for &t in targets {
        if t >= n {
            return Err(ReconfError::InvalidInput(format!("target {t} outside 0..{n}")));
        }
        if tgt[t] {
            return Err(ReconfError::InvalidInput(format!("target {t} listed twice")));
        }
        tgt[t] = true;
    }
    Ok((mult, tgt))
}

/// Distance-minimizing matching on an `n`-path that saturates `targets`.
pub fn assign_1d(n: usize, sources: &[usize], targets: &[usize]) -> Result<Matching1D> {
    let (mult, tgt) = index_masks(n, sources, targets)?;
    let usage = optimal_usage(&mult, &tgt)?;
    Ok(Matching1D::from_pairs(pairs_from_usage(0, &usage, &tgt)))
}

/// Same as [`assign_1d`] but a source position may supply several tokens.
pub fn assign_1d_generalized(instance: &Generalized1DInstance) -> Result<Matching1D> {
    let usage = optimal_usage(&instance.multiplicity, &instance.targets)?;
    Ok(Matching1D::from_pairs(pairs_from_usage(
        instance.offset,
        &usage,
        &instance.targets,
    )))
}

/// Tokens used per position, in the generalized instance's coordinates.
pub fn generalized_usage(instance: &Generalized1DInstance) -> Result<Vec<(i64, u32)>> {
    let usage = optimal_usage(&instance.multiplicity, &instance.targets)?;
    Ok(usage
        .into_iter()
        .enumerate()
        .filter(|(_, u)| *u > 0)
        .map(|(i, u)| (i as i64 + instance.offset, u))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Isolated,
}

/// A path on a line, given by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinePath {
    pub source: i64,
    pub target: i64,
}

impl LinePath {
    pub fn new(source: i64, target: i64) -> Self {
        LinePath { source, target }
    }

    pub fn orientation(&self) -> Orientation {
        match self.source.cmp(&self.target) {
            std::cmp::Ordering::Less => Orientation::Right,
            std::cmp::Ordering::Greater => Orientation::Left,
            std::cmp::Ordering::Equal => Orientation::Isolated,
        }
    }

    pub fn len(&self) -> u64 {
        self.source.abs_diff(self.target)
    }

    pub fn is_empty(&self) -> bool {
        self.source == self.target
    }

    /// Positions from source to target inclusive.
    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let (s, t) = (self.source, self.target);
        let step = if t >= s { 1 } else { -1 };
        (0..=s.abs_diff(t) as i64).map(move |k| s + step * k)
    }

    pub fn contains_in_interior(&self, other: &LinePath) -> bool {
        let (lo, hi) = (self.source.min(self.target), self.source.max(self.target));
        let (olo, ohi) = (other.source.min(other.target), other.source.max(other.target));
        lo < olo && ohi < hi
    }
}

/// Removes same-orientation containment by exchanging targets. Within one
/// orientation, sorting targets along sources is exactly the uncrossing;
/// paths keep their input order and total length.
pub fn resolve_nesting(paths: &[LinePath]) -> Vec<LinePath> {
    let mut out = paths.to_vec();
    for orient in [Orientation::Right, Orientation::Left] {
        let mut members: Vec<usize> = (0..out.len())
            .filter(|&i| out[i].orientation() == orient)
            .collect();
        members.sort_by_key(|&i| out[i].source);
        let mut tgts: Vec<i64> = members.iter().map(|&i| out[i].target).collect();
        tgts.sort_unstable();
        for (&i, t) in members.iter().zip(tgts) {
            out[i].target = t;
        }
    }
    out
}

/// Execution order: right-oriented paths from the highest target down, then
/// left-oriented paths from the lowest target up. Isolated paths are dropped.
pub fn execution_order(paths: &[LinePath]) -> Vec<LinePath> {
    let mut right: Vec<LinePath> = paths
        .iter()
        .copied()
        .filter(|p| p.orientation() == Orientation::Right)
        .collect();
    let mut left: Vec<LinePath> = paths
        .iter()
        .copied()
        .filter(|p| p.orientation() == Orientation::Left)
        .collect();
    right.sort_by_key(|p| Reverse(p.target));
    left.sort_by_key(|p| p.target);
    right.extend(left);
    right
}

fn chain_vertex(i: i64) -> Vertex {
    Vertex::new(i as usize, 0)
}

/// Schedule and dependency graph for nesting-free line paths on a chain.
pub fn order_moves_1d(paths: &[LinePath]) -> (Vec<ElementaryMove>, MoveDag) {
    let ordered: Vec<Path> = execution_order(paths)
        .iter()
        .map(|p| Path::new(p.positions().map(chain_vertex).collect()))
        .collect();
    let sol = Solution::from_ordered_paths(ordered);
    (sol.schedule, sol.dag)
}

/// Physical paths, in execution order, that solve the 1D problem laid out
/// along `line`. Indices in `sources` and `targets` refer to `line`.
pub fn solve_line(line: &[Vertex], sources: &[usize], targets: &[usize]) -> Result<Vec<Path>> {
    let m = assign_1d(line.len(), sources, targets)?;
    // The matching is order-preserving, so no path nests inside another of
    // the same orientation, and its pairs are already sorted by target.
    let physical = |&(s, t): &(i64, i64)| Path::new(LinePath::new(s, t).positions().map(|i| line[i as usize]).collect());
    let right = m.pairs.iter().rev().filter(|(s, t)| t > s);
    let left = m.pairs.iter().filter(|(s, t)| t < s);
    Ok(right.chain(left).map(physical).collect())
}

pub fn solve_1d(n: usize, sources: &[usize], targets: &[usize]) -> Result<Solution> {
    let geometry = Geometry::chain(n)?;
    let line: Vec<Vertex> = (0..n).map(|x| Vertex::new(x, 0)).collect();
    debug_assert_eq!(line.len(), geometry.vertex_count());
    Ok(Solution::from_ordered_paths(solve_line(&line, sources, targets)?))
}

/// `levels[i] = |S ∩ [0, i]| - |T ∩ [0, i - 1]|`, by prefix sum.
pub fn level_vector(n: usize, sources: &[usize], targets: &[usize]) -> Result<Vec<i64>> {
    let (mult, tgt) = index_masks(n, sources, targets)?;
    let mut target_before = 0i64;
    Ok((0..n)
        .scan(0i64, |src, i| {
            *src += mult[i] as i64;
            let level = *src - target_before;
            target_before += tgt[i] as i64;
            Some(level)
        })
        .collect())
}

/// An interval `start ..= end` of the chain with its own sources and targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubProblem {
    pub start: usize,
    pub end: usize,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

/// Splits a chain instance into intervals that no token crosses in an
/// optimal solution.
///
/// The cut test runs on the level of the optimal flow: with `U` the sources
/// picked by the assignment, `level_k = |U ∩ [0, k]| - |T ∩ [0, k]|` is the
/// number of tokens crossing edge `(k, k + 1)`, and the edge is a cut exactly
/// when it is zero. The level moves by at most one per vertex, so from a
/// vertex at level `g` the scan leaps `g` vertices ahead.
pub fn decompose_1d(n: usize, sources: &[usize], targets: &[usize]) -> Result<Vec<SubProblem>> {
    let (mult, tgt) = index_masks(n, sources, targets)?;
    let usage = optimal_usage(&mult, &tgt)?;
    let mut level = vec![0i64; n];
    let mut acc = 0i64;
    for k in 0..n {
        acc += usage[k] as i64 - tgt[k] as i64;
        level[k] = acc;
    }

    let mut cuts = Vec::new();
    let mut k = 0;
    while k < n {
        let g = level[k].unsigned_abs() as usize;
        if g == 0 {
            cuts.push(k);
            k += 1;
        } else {
            k += g;
        }
    }

    let mut out = Vec::new();
    let mut start = 0;
    for end in cuts {
        let targets: Vec<usize> = (start..=end).filter(|&i| tgt[i]).collect();
        if !targets.is_empty() {
            out.push(SubProblem {
                start,
                end,
                sources: (start..=end).filter(|&i| mult[i] > 0).collect(),
                targets,
            });
        }
        start = end + 1;
    }
    Ok(out)
}

/// Solves every sub-problem of [`decompose_1d`] on a pool of `jobs` workers
/// and concatenates the results in interval order.
pub fn solve_1d_decomposed(n: usize, sources: &[usize], targets: &[usize], jobs: usize) -> Result<Solution> {
    let parts = decompose_1d(n, sources, targets)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ReconfError::Internal(e.to_string()))?;
    let line: Vec<Vertex> = (0..n).map(|x| Vertex::new(x, 0)).collect();
    let solved: Vec<Result<Vec<Path>>> = pool.install(|| {
        parts
            .par_iter()
            .map(|p| {
                let local = &line[p.start..=p.end];
                let s: Vec<usize> = p.sources.iter().map(|&i| i - p.start).collect();
                let t: Vec<usize> = p.targets.iter().map(|&i| i - p.start).collect();
                solve_line(local, &s, &t)
            })
            .collect()
    });
    let mut paths = Vec::new();
    for r in solved {
        paths.extend(r?);
    }
    Ok(Solution::from_ordered_paths(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Configuration, Problem};
    use crate::oracle::exhaustive_line_assignment;
    use crate::solution::{execute_schedule, validate_solution};
    use proptest::prelude::*;

    #[test]
    fn assign_examples() {
        let m = assign_1d(6, &[0, 2, 5], &[1, 2, 3]).unwrap();
        assert_eq!(m.weight, 3);
        assert_eq!(m.pairs, vec![(0, 1), (2, 2), (5, 3)]);

        let m = assign_1d(4, &[1, 3], &[1, 3]).unwrap();
        assert_eq!(m.weight, 0);
        assert!(m.pairs.iter().all(|(s, t)| s == t));

        let m = assign_1d(5, &[0, 1, 4], &[2]).unwrap();
        assert_eq!(m.weight, 1);
        assert_eq!(m.pairs, vec![(1, 2)]);

        assert!(matches!(
            assign_1d(4, &[0], &[1, 2]),
            Err(ReconfError::Infeasible { available: 1, required: 2 })
        ));
    }

    #[test]
    fn generalized_examples() {
        let mut g = Generalized1DInstance::new(0, 3);
        g.add_tokens(0, 2).unwrap();
        g.add_tokens(3, 1).unwrap();
        g.add_target(1).unwrap();
        g.add_target(2).unwrap();
        let m = assign_1d_generalized(&g).unwrap();
        assert_eq!(m.weight, 2);
        assert_eq!(m.pairs, vec![(0, 1), (3, 2)]);

        let mut g = Generalized1DInstance::new(0, 3);
        g.add_tokens(1, 1).unwrap();
        g.add_target(1).unwrap();
        assert_eq!(assign_1d_generalized(&g).unwrap().weight, 0);

        let mut g = Generalized1DInstance::new(0, 3);
        g.add_tokens(0, 3).unwrap();
        g.add_target(1).unwrap();
        g.add_target(2).unwrap();
        let m = assign_1d_generalized(&g).unwrap();
        assert_eq!(m.weight, 3);
        assert_eq!(m.pairs, vec![(0, 1), (0, 2)]);

        let mut g = Generalized1DInstance::new(-2, 1);
        g.add_tokens(-2, 1).unwrap();
        g.add_target(0).unwrap();
        g.add_target(1).unwrap();
        assert!(assign_1d_generalized(&g).is_err());
        assert!(g.add_target(0).is_err());
    }

    #[test]
    fn nesting_examples() {
        let right = [LinePath::new(0, 5), LinePath::new(2, 3)];
        let fixed = resolve_nesting(&right);
        assert_eq!(fixed, vec![LinePath::new(0, 3), LinePath::new(2, 5)]);
        let w = |ps: &[LinePath]| ps.iter().map(LinePath::len).sum::<u64>();
        assert_eq!(w(&right), 6);
        assert_eq!(w(&fixed), 6);

        let left = [LinePath::new(5, 0), LinePath::new(3, 2)];
        assert_eq!(resolve_nesting(&left), vec![LinePath::new(5, 2), LinePath::new(3, 0)]);

        let plain = [LinePath::new(0, 2), LinePath::new(1, 3), LinePath::new(7, 5)];
        assert_eq!(resolve_nesting(&plain), plain.to_vec());
    }

    #[test]
    fn ordering_examples() {
        let (sched, dag) = order_moves_1d(&[LinePath::new(0, 1), LinePath::new(1, 2)]);
        let mv = |a: usize, b: usize| ElementaryMove::new(Vertex::new(a, 0), Vertex::new(b, 0));
        assert_eq!(sched, vec![mv(1, 2), mv(0, 1)]);
        assert_eq!(dag.edges(), &[(0, 1)]);
        let g = Geometry::chain(3).unwrap();
        let c = Configuration::from_vertices(g, [Vertex::new(0, 0), Vertex::new(1, 0)]).unwrap();
        assert!(execute_schedule(&c, &sched).is_ok());

        let (sched, dag) = order_moves_1d(&[LinePath::new(3, 3), LinePath::new(1, 1)]);
        assert!(sched.is_empty());
        assert_eq!(dag.node_count(), 0);

        let (_, dag) = order_moves_1d(&[LinePath::new(4, 2), LinePath::new(0, 1)]);
        assert_eq!(dag.node_count(), 2);
        assert!(dag.edges().is_empty());
        assert_eq!(dag.in_degrees(), vec![0, 0]);
    }

    #[test]
    fn worst_case_is_quadratic() {
        for k in [1usize, 3, 8, 20] {
            let s: Vec<usize> = (0..k).collect();
            let t: Vec<usize> = (k..2 * k).collect();
            let sol = solve_1d(2 * k, &s, &t).unwrap();
            assert_eq!(sol.stats.total_displacement, k * k);
        }
        assert!(solve_1d(5, &[1, 3], &[1, 3]).unwrap().schedule.is_empty());
    }

    #[test]
    fn decomposition_examples() {
        let parts = decompose_1d(6, &[0, 3], &[1, 4]).unwrap();
        let spans: Vec<(usize, usize)> = parts.iter().map(|p| (p.start, p.end)).collect();
        assert_eq!(spans, vec![(0, 1), (3, 4)]);
        assert!(decompose_1d(6, &[0, 3], &[]).unwrap().is_empty());
        let parts = decompose_1d(4, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!((parts[0].start, parts[0].end), (0, 3));
    }

    #[test]
    fn level_vector_definition() {
        // S = {0, 3}, T = {1, 4}
        assert_eq!(level_vector(6, &[0, 3], &[1, 4]).unwrap(), vec![1, 1, 0, 1, 1, 0]);
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
        (1usize..=12).prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_filter_map("need |S| >= |T|", |(n, s, t)| {
                    let s: Vec<usize> = (0..n).filter(|&i| s[i]).collect();
                    let t: Vec<usize> = (0..n).filter(|&i| t[i]).collect();
                    (s.len() >= t.len()).then_some((n, s, t))
                })
        })
    }

    proptest! {
        #[test]
        fn assignment_is_optimal((n, s, t) in instance()) {
            let m = assign_1d(n, &s, &t).unwrap();
            let oracle = exhaustive_line_assignment(
                &s.iter().map(|&i| i as i64).collect::<Vec<_>>(),
                &t.iter().map(|&i| i as i64).collect::<Vec<_>>(),
            ).unwrap();
            prop_assert_eq!(m.weight, oracle);
            let mut used: Vec<i64> = m.pairs.iter().map(|p| p.0).collect();
            used.sort_unstable();
            used.dedup();
            prop_assert_eq!(used.len(), t.len());
        }

        #[test]
        fn solutions_validate_and_never_mix_orientations((n, s, t) in instance()) {
            let m = assign_1d(n, &s, &t).unwrap();
            let paths: Vec<LinePath> = m.pairs.iter().map(|&(a, b)| LinePath::new(a, b)).collect();
            let mut dir = vec![None; n];
            for p in &paths {
                for x in p.positions() {
                    let o = p.orientation();
                    if o == Orientation::Isolated { continue; }
                    let slot = &mut dir[x as usize];
                    prop_assert!(slot.is_none() || *slot == Some(o));
                    *slot = Some(o);
                }
            }
            let fixed = resolve_nesting(&paths);
            for a in &fixed {
                for b in &fixed {
                    if a.orientation() == b.orientation() && a.orientation() != Orientation::Isolated {
                        prop_assert!(!a.contains_in_interior(b));
                    }
                }
            }
            let g = Geometry::chain(n).unwrap();
            let v = |i: &usize| Vertex::new(*i, 0);
            let problem = Problem::new(
                g,
                Configuration::from_vertices(g, s.iter().map(v)).unwrap(),
                Configuration::from_vertices(g, t.iter().map(v)).unwrap(),
            ).unwrap();
            let sol = solve_1d(n, &s, &t).unwrap();
            let report = validate_solution(&problem, &sol);
            prop_assert!(report.passed(), "{}", report);
            prop_assert_eq!(sol.stats.total_displacement as u64, m.weight);
        }

        #[test]
        fn decomposition_matches_serial((n, s, t) in instance(), jobs in 1usize..4) {
            let serial = solve_1d(n, &s, &t).unwrap();
            let parallel = solve_1d_decomposed(n, &s, &t, jobs).unwrap();
            prop_assert_eq!(serial.stats.total_displacement, parallel.stats.total_displacement);
        }
    }
}
