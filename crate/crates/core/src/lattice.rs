//! Polyhexes on the hexagonal tessellation.
//!
//! Cells use axial coordinates `(q, r)`. Vertices use integer coordinates
//! scaled by three, so the corner `k` of cell `c` sits at `3c + CORNERS[k]`
//! and cartesian position is `(a + b/2, b * sqrt(3)/2)`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::patch::{PatchError, PlanarPatch};

pub type Cell = (i32, i32);
pub type Point = (i32, i32);

/// Neighbouring cells, counterclockwise from angle 0.
pub const DIRECTIONS: [Cell; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Cell corners at angles `30 + 60k` degrees; also the six edge vectors.
pub const CORNERS: [Point; 6] = [(1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("polyhex has no cells")]
    Empty,
    #[error("polyhex is not connected")]
    Disconnected,
    #[error("polyhex has a hole")]
    Hole,
}

pub fn add(a: Cell, b: Cell) -> Cell {
    (a.0 + b.0, a.1 + b.1)
}

pub fn sub(a: Cell, b: Cell) -> Cell {
    (a.0 - b.0, a.1 - b.1)
}

pub fn neighbours(c: Cell) -> impl Iterator<Item = Cell> {
    DIRECTIONS.into_iter().map(move |d| add(c, d))
}

pub fn corner(c: Cell, k: usize) -> Point {
    (3 * c.0 + CORNERS[k % 6].0, 3 * c.1 + CORNERS[k % 6].1)
}

pub fn cartesian(p: Point) -> (f64, f64) {
    let (a, b) = (p.0 as f64, p.1 as f64);
    (a + b / 2.0, b * 3f64.sqrt() / 2.0)
}

/// One of the twelve lattice symmetries fixing the origin: an optional
/// reflection followed by `rotation` turns of 60 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub reflect: bool,
    pub rotation: u8,
}

impl Symmetry {
    pub fn all() -> impl Iterator<Item = Symmetry> {
        [false, true]
            .into_iter()
            .flat_map(|reflect| (0..6).map(move |rotation| Symmetry { reflect, rotation }))
    }

    pub fn apply(self, c: Cell) -> Cell {
        let mut c = if self.reflect { (c.1, c.0) } else { c };
        for _ in 0..self.rotation {
            c = (-c.1, c.0 + c.1);
        }
        c
    }
}

/// A finite set of cells, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Polyhex {
    cells: Vec<Cell>,
}

/// A symmetry and the translation applied after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub symmetry: Symmetry,
    pub shift: Cell,
}

impl Placement {
    pub fn apply(&self, c: Cell) -> Cell {
        sub(self.symmetry.apply(c), self.shift)
    }
}

fn min_corner(cells: &[Cell]) -> Cell {
    let q = cells.iter().map(|c| c.0).min().unwrap_or(0);
    let r = cells.iter().map(|c| c.1).min().unwrap_or(0);
    (q, r)
}

impl Polyhex {
    /// Checks connectivity and simple connectivity.
    pub fn new<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Polyhex, LatticeError> {
        let p = Polyhex::from_cells(cells);
        if p.cells.is_empty() {
            return Err(LatticeError::Empty);
        }
        if !p.is_connected() {
            return Err(LatticeError::Disconnected);
        }
        if p.has_hole() {
            return Err(LatticeError::Hole);
        }
        Ok(p)
    }

    /// No validation.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Polyhex {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        Polyhex { cells }
    }

    pub fn benzene() -> Polyhex {
        Polyhex { cells: vec![(0, 0)] }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of hexagons.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    pub fn with_cell(&self, c: Cell) -> Polyhex {
        let mut cells = self.cells.clone();
        if let Err(pos) = cells.binary_search(&c) {
            cells.insert(pos, c);
        }
        Polyhex { cells }
    }

    pub fn without_cell(&self, c: Cell) -> Polyhex {
        Polyhex {
            cells: self.cells.iter().copied().filter(|&x| x != c).collect(),
        }
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.cells.first() else {
            return true;
        };
        let set: HashSet<Cell> = self.cells.iter().copied().collect();
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for nb in neighbours(c) {
                if set.contains(&nb) && seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        seen.len() == set.len()
    }

    /// True iff some empty cell is enclosed by the polyhex.
    pub fn has_hole(&self) -> bool {
        if self.cells.len() < 6 {
            return false;
        }
        let set: HashSet<Cell> = self.cells.iter().copied().collect();
        let (q0, r0) = min_corner(&self.cells);
        let q1 = self.cells.iter().map(|c| c.0).max().unwrap() + 1;
        let r1 = self.cells.iter().map(|c| c.1).max().unwrap() + 1;
        let (q0, r0) = (q0 - 1, r0 - 1);
        let inside = |c: Cell| c.0 >= q0 && c.0 <= q1 && c.1 >= r0 && c.1 <= r1;
        let total = ((q1 - q0 + 1) * (r1 - r0 + 1)) as usize - set.len();
        let mut seen = HashSet::from([(q0, r0)]);
        let mut queue = VecDeque::from([(q0, r0)]);
        while let Some(c) = queue.pop_front() {
            for nb in neighbours(c) {
                if inside(nb) && !set.contains(&nb) && seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        seen.len() != total
    }

    fn placed(&self, sym: Symmetry) -> (Vec<Cell>, Cell) {
        let moved: Vec<Cell> = self.cells.iter().map(|&c| sym.apply(c)).collect();
        let shift = min_corner(&moved);
        let mut out: Vec<Cell> = moved.into_iter().map(|c| sub(c, shift)).collect();
        out.sort_unstable();
        (out, shift)
    }

    /// Translated so the componentwise minimum is the origin.
    pub fn normalized(&self) -> Polyhex {
        let (cells, _) = self.placed(Symmetry { reflect: false, rotation: 0 });
        Polyhex { cells }
    }

    /// The least normalized image over all twelve symmetries, together with
    /// every placement attaining it.
    pub fn canonical_placements(&self) -> (Polyhex, Vec<Placement>) {
        let mut best: Option<Vec<Cell>> = None;
        let mut placements = Vec::new();
        for symmetry in Symmetry::all() {
            let (cells, shift) = self.placed(symmetry);
            let placement = Placement { symmetry, shift };
            match &best {
                Some(b) if cells > *b => {}
                Some(b) if cells == *b => placements.push(placement),
                _ => {
                    best = Some(cells);
                    placements = vec![placement];
                }
            }
        }
        (Polyhex { cells: best.unwrap_or_default() }, placements)
    }

    pub fn canonical(&self) -> Polyhex {
        self.canonical_placements().0
    }

    /// Number of lattice symmetries mapping the polyhex onto itself.
    pub fn symmetry_order(&self) -> usize {
        self.canonical_placements().1.len()
    }

    /// Corner points with the number of cells sharing each.
    pub fn vertex_multiplicity(&self) -> HashMap<Point, usize> {
        let mut out = HashMap::new();
        for &c in &self.cells {
            for k in 0..6 {
                *out.entry(corner(c, k)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Vertices shared by three hexagons.
    pub fn internal_vertices(&self) -> usize {
        self.vertex_multiplicity().values().filter(|&&m| m == 3).count()
    }

    pub fn is_catafused(&self) -> bool {
        self.internal_vertices() == 0
    }

    /// Molecular graph and plane embedding. Vertices are numbered in
    /// row-major order of their lattice position.
    pub fn to_patch(&self) -> Result<PlanarPatch, PatchError> {
        let points: BTreeSet<(i32, i32)> = self
            .cells
            .iter()
            .flat_map(|&c| (0..6).map(move |k| corner(c, k)))
            .map(|(a, b)| (b, a))
            .collect();
        let index: HashMap<Point, usize> = points
            .iter()
            .enumerate()
            .map(|(i, &(b, a))| ((a, b), i))
            .collect();
        let mut edges = Vec::with_capacity(6 * self.cells.len());
        for &c in &self.cells {
            for k in 0..6 {
                edges.push((index[&corner(c, k)], index[&corner(c, k + 1)]));
            }
        }
        let graph = Graph::new(points.len(), edges)?;
        let coords: Vec<(f64, f64)> = points.iter().map(|&(b, a)| cartesian((a, b))).collect();
        PlanarPatch::from_coordinates(graph, &coords)
    }
}
