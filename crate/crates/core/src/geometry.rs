//! Trap geometries, token configurations and reconfiguration problems.
//!
//! Vertices are addressed as `(x, y)` with `x` the column (left to right) and
//! `y` the row counted from the bottom. Dense storage is column-major, so the
//! vertices of one column are contiguous. Solvers that think of rows from the
//! top use [`Geometry::row_from_top`] instead of recomputing the flip.

use serde::{Deserialize, Serialize};

use crate::error::{ReconfError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Vertex { x, y }
    }

    pub fn manhattan(self, other: Vertex) -> usize {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn is_adjacent(self, other: Vertex) -> bool {
        self.manhattan(other) == 1
    }
}

impl From<(usize, usize)> for Vertex {
    fn from((x, y): (usize, usize)) -> Self {
        Vertex { x, y }
    }
}

impl From<Vertex> for (usize, usize) {
    fn from(v: Vertex) -> Self {
        (v.x, v.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Chain,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Geometry {
    kind: GeometryKind,
    width: usize,
    height: usize,
}

impl Geometry {
    pub fn chain(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(ReconfError::InvalidInput("chain length must be positive".into()));
        }
        Ok(Geometry {
            kind: GeometryKind::Chain,
            width: length,
            height: 1,
        })
    }

    pub fn grid(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(ReconfError::InvalidInput(format!(
                "grid dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(Geometry {
            kind: GeometryKind::Grid,
            width,
            height,
        })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        self.width * self.height
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x < self.width && v.y < self.height
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(ReconfError::OutOfBounds {
                vertex: v,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Column-major dense index.
    pub fn index(&self, v: Vertex) -> usize {
        debug_assert!(self.contains(v));
        v.x * self.height + v.y
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        Vertex::new(index / self.height, index % self.height)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex(i))
    }

    /// Row counted from the bottom edge, starting at 0.
    pub fn row_from_bottom(&self, v: Vertex) -> usize {
        v.y
    }

    /// Row counted from the top edge, starting at 0.
    pub fn row_from_top(&self, v: Vertex) -> usize {
        self.height - 1 - v.y
    }

    pub fn from_top(&self, x: usize, row_from_top: usize) -> Vertex {
        Vertex::new(x, self.height - 1 - row_from_top)
    }

    /// Neighbors in the fixed order up, down, left, right.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> {
        let (w, h) = (self.width, self.height);
        let up = (v.y + 1 < h).then(|| Vertex::new(v.x, v.y + 1));
        let down = (v.y > 0).then(|| Vertex::new(v.x, v.y - 1));
        let left = (v.x > 0).then(|| Vertex::new(v.x - 1, v.y));
        let right = (v.x + 1 < w).then(|| Vertex::new(v.x + 1, v.y));
        [up, down, left, right].into_iter().flatten()
    }

    pub fn manhattan_distance(&self, u: Vertex, v: Vertex) -> Result<usize> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.manhattan(v))
    }

    pub fn shortest_path(&self, u: Vertex, v: Vertex, policy: StaircasePolicy) -> Result<Path> {
        self.check(u)?;
        self.check(v)?;
        Ok(staircase(u, v, policy))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StaircasePolicy {
    #[default]
    VerticalFirst,
    HorizontalFirst,
}

/// Monotone staircase from `u` to `v`; no bounds checks.
pub(crate) fn staircase(u: Vertex, v: Vertex, policy: StaircasePolicy) -> Path {
    let mut vertices = Vec::with_capacity(u.manhattan(v) + 1);
    let mut cur = u;
    vertices.push(cur);
    let step_y = |cur: &mut Vertex, vertices: &mut Vec<Vertex>| {
        while cur.y != v.y {
            cur.y = if cur.y < v.y { cur.y + 1 } else { cur.y - 1 };
            vertices.push(*cur);
        }
    };
    let step_x = |cur: &mut Vertex, vertices: &mut Vec<Vertex>| {
        while cur.x != v.x {
            cur.x = if cur.x < v.x { cur.x + 1 } else { cur.x - 1 };
            vertices.push(*cur);
        }
    };
    match policy {
        StaircasePolicy::VerticalFirst => {
            step_y(&mut cur, &mut vertices);
            step_x(&mut cur, &mut vertices);
        }
        StaircasePolicy::HorizontalFirst => {
            step_x(&mut cur, &mut vertices);
            step_y(&mut cur, &mut vertices);
        }
    }
    Path { vertices }
}

/// Occupancy of a geometry: at most one token per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    geometry: Geometry,
    occupied: Vec<bool>,
    count: usize,
}

impl Configuration {
    pub fn empty(geometry: Geometry) -> Self {
        Configuration {
            geometry,
            occupied: vec![false; geometry.vertex_count()],
            count: 0,
        }
    }

    pub fn full(geometry: Geometry) -> Self {
        Configuration {
            geometry,
            occupied: vec![true; geometry.vertex_count()],
            count: geometry.vertex_count(),
        }
    }

    /// Fails on out-of-bounds or repeated vertices.
    pub fn from_vertices<I>(geometry: Geometry, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut config = Configuration::empty(geometry);
        for v in vertices {
            geometry.check(v)?;
            if !config.insert(v) {
                return Err(ReconfError::InvalidInput(format!(
                    "vertex ({}, {}) listed twice",
                    v.x, v.y
                )));
            }
        }
        Ok(config)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.geometry.contains(v) && self.occupied[self.geometry.index(v)]
    }

    /// Returns false if the vertex was already occupied.
    pub fn insert(&mut self, v: Vertex) -> bool {
        let i = self.geometry.index(v);
        if self.occupied[i] {
            return false;
        }
        self.occupied[i] = true;
        self.count += 1;
        true
    }

    /// Returns false if the vertex was empty.
    pub fn remove(&mut self, v: Vertex) -> bool {
        let i = self.geometry.index(v);
        if !self.occupied[i] {
            return false;
        }
        self.occupied[i] = false;
        self.count -= 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.occupied
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(|(i, _)| self.geometry.vertex(i))
    }

    pub fn is_superset_of(&self, other: &Configuration) -> bool {
        other.iter().all(|v| self.contains(v))
    }

    /// Occupied count in column `x`.
    pub fn column_count(&self, x: usize) -> usize {
        let h = self.geometry.height();
        self.occupied[x * h..(x + 1) * h].iter().filter(|&&o| o).count()
    }
}

/// A `W x H'` block of rows vertically centered in the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRegion {
    pub h_prime: usize,
}

impl TargetRegion {
    /// Lowest target row, counted from the bottom.
    pub fn bottom_row(&self, height: usize) -> usize {
        (height - self.h_prime) / 2
    }

    /// Rows `[bottom, top)` counted from the bottom.
    pub fn rows(&self, height: usize) -> std::ops::Range<usize> {
        let b = self.bottom_row(height);
        b..b + self.h_prime
    }

    pub fn contains_row(&self, height: usize, y: usize) -> bool {
        self.rows(height).contains(&y)
    }

    pub fn vertices(&self, geometry: Geometry) -> impl Iterator<Item = Vertex> {
        let rows = self.rows(geometry.height());
        (0..geometry.width()).flat_map(move |x| rows.clone().map(move |y| Vertex::new(x, y)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub geometry: Geometry,
    pub sources: Configuration,
    pub targets: Configuration,
    pub target_region: Option<TargetRegion>,
}

impl Problem {
    pub fn new(geometry: Geometry, sources: Configuration, targets: Configuration) -> Result<Self> {
        if sources.geometry() != geometry || targets.geometry() != geometry {
            return Err(ReconfError::InvalidInput(
                "configurations do not match the problem geometry".into(),
            ));
        }
        Ok(Problem {
            geometry,
            sources,
            targets,
            target_region: None,
        })
    }

    /// Centered-compact problem: the target set is the whole centered block.
    pub fn centered(geometry: Geometry, sources: Configuration, h_prime: usize) -> Result<Self> {
        if h_prime == 0 || h_prime >= geometry.height() {
            return Err(ReconfError::InvalidInput(format!(
                "target height {h_prime} must lie in [1, {})",
                geometry.height()
            )));
        }
        let region = TargetRegion { h_prime };
        let targets = Configuration::from_vertices(geometry, region.vertices(geometry))?;
        let mut p = Problem::new(geometry, sources, targets)?;
        p.target_region = Some(region);
        Ok(p)
    }

    pub fn check_feasible(&self) -> Result<()> {
        if self.sources.len() < self.targets.len() {
            Err(ReconfError::infeasible(self.sources.len(), self.targets.len()))
        } else {
            Ok(())
        }
    }

    pub fn require_region(&self) -> Result<TargetRegion> {
        self.target_region.ok_or_else(|| {
            ReconfError::InvalidInput("solver requires a centered-compact target region".into())
        })
    }

    pub fn is_solved(&self) -> bool {
        self.sources.is_superset_of(&self.targets)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(Vertex, Vertex)", into = "(Vertex, Vertex)")]
pub struct ElementaryMove {
    pub from: Vertex,
    pub to: Vertex,
}

impl From<(Vertex, Vertex)> for ElementaryMove {
    fn from((from, to): (Vertex, Vertex)) -> Self {
        ElementaryMove { from, to }
    }
}

impl From<ElementaryMove> for (Vertex, Vertex) {
    fn from(m: ElementaryMove) -> Self {
        (m.from, m.to)
    }
}

impl ElementaryMove {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        ElementaryMove { from, to }
    }

    pub fn is_elementary(&self) -> bool {
        self.from.is_adjacent(self.to)
    }

    /// `None` when the move is not elementary.
    pub fn direction(&self) -> Option<Direction> {
        let (f, t) = (self.from, self.to);
        match (t.x as isize - f.x as isize, t.y as isize - f.y as isize) {
            (0, 1) => Some(Direction::Up),
            (0, -1) => Some(Direction::Down),
            (-1, 0) => Some(Direction::Left),
            (1, 0) => Some(Direction::Right),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    pub vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path { vertices }
    }

    pub fn source(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn target(&self) -> Vertex {
        *self.vertices.last().expect("non-empty path")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn moves(&self) -> impl Iterator<Item = ElementaryMove> + '_ {
        self.vertices
            .windows(2)
            .map(|w| ElementaryMove::new(w[0], w[1]))
    }

    /// Consecutive vertices adjacent and all vertices distinct.
    pub fn is_simple(&self) -> bool {
        if !self.vertices.windows(2).all(|w| w[0].is_adjacent(w[1])) {
            return false;
        }
        let mut seen: Vec<Vertex> = self.vertices.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_shortest(&self) -> bool {
        self.is_simple() && self.len() == self.source().manhattan(self.target())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSystem {
    pub paths: Vec<Path>,
}

impl PathSystem {
    pub fn new(paths: Vec<Path>) -> Self {
        PathSystem { paths }
    }

    pub fn weight(&self) -> usize {
        self.paths.iter().map(Path::len).sum()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn moves(&self) -> impl Iterator<Item = ElementaryMove> + '_ {
        self.paths.iter().flat_map(Path::moves)
    }

    pub fn has_distinct_endpoints(&self) -> bool {
        let mut sources: Vec<Vertex> = self.paths.iter().map(Path::source).collect();
        let mut targets: Vec<Vertex> = self.paths.iter().map(Path::target).collect();
        sources.sort_unstable();
        targets.sort_unstable();
        sources.windows(2).all(|w| w[0] != w[1]) && targets.windows(2).all(|w| w[0] != w[1])
    }

    /// Tokens sitting on a non-final vertex of a non-trivial path, i.e. every
    /// token that has to move (directly or as an obstruction) when the system
    /// is executed from `occupied`.
    pub fn displaced_tokens(&self, occupied: &Configuration) -> usize {
        let mut hit = vec![false; occupied.geometry().vertex_count()];
        let g = occupied.geometry();
        let mut count = 0;
        for p in self.paths.iter().filter(|p| !p.is_trivial()) {
            for &v in &p.vertices[..p.vertices.len() - 1] {
                let i = g.index(v);
                if occupied.contains(v) && !hit[i] {
                    hit[i] = true;
                    count += 1;
                }
            }
        }
        count
    }
}
