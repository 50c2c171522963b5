//! The redistribution-reconfiguration (red-rec) heuristic.
//!
//! Columns with zero surplus are solved first. The main loop then pairs a
//! positive-surplus donor with a negative-surplus receiver until no receiver
//! is left; leftover tokens of a donor that cannot saturate its receiver are
//! marked and only moved once the receiver is filled. A receiver is filled
//! in one step from its own tokens, its marked tokens and the tokens of its
//! final donor, so every token moves at most once.

use std::collections::HashSet;

use crate::error::{ReconfError, Result};
use crate::exact1d::{assign_1d_generalized, solve_line, Generalized1DInstance};
use crate::geometry::{Geometry, GeometryKind, Path, Problem, Vertex};
use crate::solution::Solution;

/// `sigma[i]` is the number of sources minus the number of targets in column `i`.
pub fn compute_surpluses(problem: &Problem) -> Vec<i64> {
    let g = problem.geometry;
    (0..g.width())
        .map(|x| problem.sources.column_count(x) as i64 - problem.targets.column_count(x) as i64)
        .collect()
}

/// Best donor-receiver pair as `(donor, receiver)`.
///
/// A receiver may only pair with the nearest unsolved column on either side,
/// and only if that column has positive surplus. Pairs are ranked by the
/// number of exchangeable tokens, then by column distance, then by how far
/// the receiver remains from saturation, then by column index.
pub fn select_best_pair(sigma: &[i64], solved: &[bool]) -> Result<(usize, usize)> {
    let mut best: Option<((i64, usize, i64, usize, usize), (usize, usize))> = None;
    for r in (0..sigma.len()).filter(|&r| !solved[r] && sigma[r] < 0) {
        let left = (0..r).rev().find(|&i| !solved[i]);
        let right = (r + 1..sigma.len()).find(|&i| !solved[i]);
        for d in [left, right].into_iter().flatten() {
            if sigma[d] <= 0 {
                continue;
            }
            let exchange = sigma[d].min(-sigma[r]);
            let remaining = -sigma[r] - exchange;
            let key = (-exchange, d.abs_diff(r), remaining, r, d);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (d, r)));
            }
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| ReconfError::Internal("no admissible donor-receiver pair".into()))
}

/// A token taking part in a receiver fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FillToken {
    /// Where the token currently sits.
    pub origin: Vertex,
    /// Tie key among tokens entering on the same row: tokens closer to the
    /// receiver sort nearer to the target region.
    tie: i64,
}

/// The 1D instance on the receiver column that realizes a fill, plus the
/// physical token behind each unit of multiplicity, in sorted order.
#[derive(Clone, Debug)]
pub struct RedistributionInstance {
    pub receiver: usize,
    pub instance: Generalized1DInstance,
    pub tokens: Vec<FillToken>,
}

/// Mutable solver state. Rows are counted from the bottom.
#[derive(Clone, Debug)]
pub struct RedRecState {
    geometry: Geometry,
    lo: usize,
    hi: usize,
    occupied: Vec<Vec<bool>>,
    sigma: Vec<i64>,
    solved: Vec<bool>,
    incoming: Vec<Vec<Vertex>>,
    paths: Vec<Path>,
}

impl RedRecState {
    pub fn new(problem: &Problem) -> Result<Self> {
        let g = problem.geometry;
        if g.kind() != GeometryKind::Grid {
            return Err(ReconfError::InvalidInput("red-rec runs on grids".into()));
        }
        let region = problem.require_region()?;
        problem.check_feasible()?;
        let (w, h) = (g.width(), g.height());
        let mut occupied = vec![vec![false; h]; w];
        for v in problem.sources.iter() {
            occupied[v.x][v.y] = true;
        }
        let rows = region.rows(h);
        Ok(RedRecState {
            geometry: g,
            lo: rows.start,
            hi: rows.end,
            occupied,
            sigma: compute_surpluses(problem),
            solved: vec![false; w],
            incoming: vec![Vec::new(); w],
            paths: Vec::new(),
        })
    }

    pub fn sigma(&self) -> &[i64] {
        &self.sigma
    }

    pub fn solved(&self) -> &[bool] {
        &self.solved
    }

    fn column_line(&self, x: usize) -> Vec<Vertex> {
        (0..self.geometry.height()).map(|y| Vertex::new(x, y)).collect()
    }

    /// Exact 1D solve of a column on its own tokens. Leftover tokens stay in
    /// the reservoir and are returned, farthest from the region last.
    fn solve_column(&mut self, x: usize) -> Result<Vec<Vertex>> {
        let line = self.column_line(x);
        let sources: Vec<usize> = (0..line.len()).filter(|&y| self.occupied[x][y]).collect();
        let targets: Vec<usize> = (self.lo..self.hi).collect();
        let paths = solve_line(&line, &sources, &targets)?;
        for p in &paths {
            self.occupied[x][p.source().y] = false;
        }
        for p in &paths {
            self.occupied[x][p.target().y] = true;
        }
        self.paths.extend(paths);
        self.solved[x] = true;
        self.sigma[x] = 0;
        Ok((0..line.len())
            .filter(|&y| self.occupied[x][y] && !(self.lo..self.hi).contains(&y))
            .map(|y| Vertex::new(x, y))
            .collect())
    }

    fn tie(&self, v: Vertex, receiver: usize) -> i64 {
        let dist = v.x.abs_diff(receiver) as i64;
        if v.y >= self.hi {
            dist
        } else if v.y < self.lo {
            -dist
        } else {
            0
        }
    }

    /// Picks `k` reservoir tokens of the donor for the receiver: `b` of the
    /// innermost bottom tokens and `k - b` of the innermost top tokens, with
    /// `b` minimizing the vertical cost of the resulting fill.
    fn choose_donor_tokens(&self, donor: usize, receiver: usize, k: usize) -> Vec<Vertex> {
        let h = self.geometry.height();
        let bottom: Vec<usize> = (0..self.lo).rev().filter(|&y| self.occupied[donor][y]).collect();
        let top: Vec<usize> = (self.hi..h).filter(|&y| self.occupied[donor][y]).collect();
        let mut base = vec![0i64; h];
        for y in (0..h).filter(|&y| self.occupied[receiver][y]) {
            base[y] += 1;
        }
        for v in &self.incoming[receiver] {
            base[v.y] += 1;
        }
        for y in self.lo..self.hi {
            base[y] -= 1;
        }
        let lo_b = k.saturating_sub(top.len());
        let hi_b = k.min(bottom.len());
        let mut best = (u64::MAX, lo_b);
        for b in lo_b..=hi_b {
            let mut bal = base.clone();
            bottom[..b].iter().for_each(|&y| bal[y] += 1);
            top[..k - b].iter().for_each(|&y| bal[y] += 1);
            let mut acc = 0i64;
            let cost: u64 = bal[..h - 1]
                .iter()
                .map(|c| {
                    acc += c;
                    acc.unsigned_abs()
                })
                .sum();
            if cost < best.0 {
                best = (cost, b);
            }
        }
        let b = best.1;
        bottom[..b]
            .iter()
            .chain(&top[..k - b])
            .map(|&y| Vertex::new(donor, y))
            .collect()
    }

    /// Instance filling `receiver` from its own tokens, its marked tokens and
    /// `extra`. The token count equals the number of target rows.
    pub fn build_redistribution_instance(&self, receiver: usize, extra: &[Vertex]) -> Result<RedistributionInstance> {
        let h = self.geometry.height();
        let mut tokens: Vec<FillToken> = (0..h)
            .filter(|&y| self.occupied[receiver][y])
            .map(|y| Vertex::new(receiver, y))
            .chain(self.incoming[receiver].iter().copied())
            .chain(extra.iter().copied())
            .map(|origin| FillToken {
                origin,
                tie: self.tie(origin, receiver),
            })
            .collect();
        tokens.sort_by_key(|t| (t.origin.y, t.tie));
        let mut instance = Generalized1DInstance::new(0, h as i64 - 1);
        for t in &tokens {
            instance.add_tokens(t.origin.y as i64, 1)?;
        }
        for y in self.lo..self.hi {
            instance.add_target(y as i64)?;
        }
        if tokens.len() != self.hi - self.lo {
            return Err(ReconfError::Internal(format!(
                "receiver {receiver} fill has {} tokens for {} targets",
                tokens.len(),
                self.hi - self.lo
            )));
        }
        Ok(RedistributionInstance {
            receiver,
            instance,
            tokens,
        })
    }

    /// Moves every token of the fill: horizontally along its own row into
    /// the receiver column, then vertically to its target row.
    fn fill(&mut self, receiver: usize, extra: &[Vertex]) -> Result<()> {
        let inst = self.build_redistribution_instance(receiver, extra)?;
        let matching = assign_1d_generalized(&inst.instance)?;
        let mut up = Vec::new();
        let mut down = Vec::new();
        for (tok, &(row, target)) in inst.tokens.iter().zip(&matching.pairs) {
            debug_assert_eq!(tok.origin.y as i64, row);
            let (o, t) = (tok.origin, target as usize);
            if o.x == receiver && o.y == t {
                continue;
            }
            let mut verts: Vec<Vertex> = Vec::new();
            let step = |a: usize, b: usize| -> Vec<usize> {
                if a <= b {
                    (a..=b).collect()
                } else {
                    (b..=a).rev().collect()
                }
            };
            verts.extend(step(o.x, receiver).into_iter().map(|x| Vertex::new(x, o.y)));
            verts.extend(step(o.y, t).into_iter().skip(1).map(|y| Vertex::new(receiver, y)));
            let path = Path::new(verts);
            if t > o.y {
                up.push((t, path));
            } else {
                down.push((t, path));
            }
        }
        up.sort_by_key(|(t, _)| std::cmp::Reverse(*t));
        down.sort_by_key(|(t, _)| *t);
        for (_, p) in up.into_iter().chain(down) {
            self.occupied[p.source().x][p.source().y] = false;
            self.paths.push(p);
        }
        for y in 0..self.geometry.height() {
            self.occupied[receiver][y] = (self.lo..self.hi).contains(&y);
        }
        self.incoming[receiver].clear();
        self.solved[receiver] = true;
        self.sigma[receiver] = 0;
        Ok(())
    }

    fn step(&mut self, donor: usize, receiver: usize) -> Result<()> {
        let (sd, need) = (self.sigma[donor], -self.sigma[receiver]);
        if sd > need {
            let chosen = self.choose_donor_tokens(donor, receiver, need as usize);
            for v in &chosen {
                self.occupied[v.x][v.y] = false;
            }
            self.sigma[donor] -= need;
            self.fill(receiver, &chosen)
        } else if sd == need {
            let leftovers = self.solve_column(donor)?;
            for v in &leftovers {
                self.occupied[v.x][v.y] = false;
            }
            self.fill(receiver, &leftovers)
        } else {
            let leftovers = self.solve_column(donor)?;
            for v in &leftovers {
                self.occupied[v.x][v.y] = false;
            }
            self.incoming[receiver].extend(leftovers);
            self.sigma[receiver] += sd;
            Ok(())
        }
    }

    fn run(mut self) -> Result<Solution> {
        let w = self.geometry.width();
        for x in 0..w {
            if self.sigma[x] == 0 {
                self.solve_column(x)?;
            }
        }
        while (0..w).any(|x| !self.solved[x] && self.sigma[x] < 0) {
            let (d, r) = select_best_pair(&self.sigma, &self.solved)?;
            self.step(d, r)?;
        }
        for x in 0..w {
            if !self.solved[x] {
                self.solve_column(x)?;
            }
        }
        Ok(Solution::from_ordered_paths(self.paths))
    }
}

pub fn red_rec(problem: &Problem) -> Result<Solution> {
    RedRecState::new(problem)?.run()
}

/// True when no path starts where an earlier path ended, i.e. no token is
/// displaced twice.
pub fn each_token_moves_once(solution: &Solution) -> bool {
    let mut arrived = HashSet::new();
    let mut left = HashSet::new();
    for p in &solution.path_system.paths {
        if arrived.contains(&p.source()) || !left.insert(p.source()) {
            return false;
        }
        arrived.insert(p.target());
    }
    true
}
