//! Boundary edge codes of benzenoids.
//!
//! A digit counts the perimeter edges between consecutive degree-3 perimeter
//! vertices. The canonical code is the lexicographically greatest digit
//! string over all rotations and reversals; a benzenoid without degree-3
//! perimeter vertices (benzene) has the one-digit code `6`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::lattice::{add, corner, Cell, Point, Polyhex, CORNERS, DIRECTIONS};
use crate::patch::{PatchError, PlanarPatch};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryEdgeCode(Vec<u8>);

impl BoundaryEdgeCode {
    /// Canonicalizes the given digits.
    pub fn new(digits: Vec<u8>) -> BoundaryEdgeCode {
        BoundaryEdgeCode(canonical_digits(&digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    /// Sum of digits.
    pub fn perimeter(&self) -> usize {
        self.0.iter().map(|&d| d as usize).sum()
    }

    /// Number of perimeter edges joining two degree-2 vertices: `d - 2` per
    /// run, except that a lone cycle has no degree-3 vertex at all.
    pub fn n22(&self) -> usize {
        match self.0.as_slice() {
            [d] => *d as usize,
            digits => digits.iter().map(|&d| (d as usize).saturating_sub(2)).sum(),
        }
    }
}

impl fmt::Display for BoundaryEdgeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for BoundaryEdgeCode {
    type Err = PatchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(BoundaryEdgeCode::new(parse_digits(s)?))
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>, PatchError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PatchError::InvalidCode("empty code".into()));
    }
    s.chars()
        .map(|c| match c.to_digit(10) {
            Some(d) if d > 0 => Ok(d as u8),
            _ => Err(PatchError::InvalidCode(format!("bad digit {c:?} in {s:?}"))),
        })
        .collect()
}

/// Greatest rotation of the sequence or of its reversal.
pub fn canonical_digits(digits: &[u8]) -> Vec<u8> {
    let k = digits.len();
    let reversed: Vec<u8> = digits.iter().rev().copied().collect();
    [digits, reversed.as_slice()]
        .into_iter()
        .flat_map(|seq| (0..k).map(move |s| [&seq[s..], &seq[..s]].concat()))
        .max()
        .unwrap_or_default()
}

/// The canonical code of a patch's perimeter.
pub fn boundary_edge_code(patch: &PlanarPatch) -> Result<BoundaryEdgeCode, PatchError> {
    let degrees = patch.degree_code();
    let p = degrees.len();
    let threes: Vec<usize> = (0..p).filter(|&i| degrees[i] == 3).collect();
    let digits: Vec<usize> = if threes.is_empty() {
        vec![p]
    } else {
        (0..threes.len())
            .map(|i| {
                let next = threes[(i + 1) % threes.len()];
                (next + p - threes[i]) % p + if threes.len() == 1 { p } else { 0 }
            })
            .collect()
    };
    if let Some(d) = digits.iter().find(|&&d| d > 9) {
        return Err(PatchError::InvalidCode(format!("run of {d} perimeter edges")));
    }
    Ok(BoundaryEdgeCode::new(digits.into_iter().map(|d| d as u8).collect()))
}

/// Rebuilds the polyhex bounded by a code, read as a counterclockwise walk:
/// within a digit every arrival but the last turns left, the last turns right.
pub fn parse_bec_polyhex(code: &str) -> Result<Polyhex, PatchError> {
    let digits = parse_digits(code)?;
    if digits == [6] {
        return Ok(Polyhex::benzene());
    }
    let total: i64 = digits.iter().map(|&d| d as i64).sum();
    if total - 2 * digits.len() as i64 != 6 {
        return Err(PatchError::InvalidCode(format!(
            "{code}: turning number does not close the walk"
        )));
    }
    let start: Point = (1, 1);
    let mut point = start;
    let mut heading = 0usize;
    let mut visited = HashSet::new();
    let mut boundary: HashSet<(Point, Point)> = HashSet::new();
    let mut left_cells = Vec::new();
    for &d in &digits {
        for step in 1..=d {
            if !visited.insert(point) {
                return Err(PatchError::InvalidCode(format!("{code}: walk self-intersects")));
            }
            let j = (heading + 4) % 6;
            let base = (point.0 - CORNERS[j].0, point.1 - CORNERS[j].1);
            if base.0 % 3 != 0 || base.1 % 3 != 0 {
                return Err(PatchError::InvalidCode(format!("{code}: walk leaves the lattice")));
            }
            left_cells.push((base.0 / 3, base.1 / 3));
            let next = (point.0 + CORNERS[heading].0, point.1 + CORNERS[heading].1);
            boundary.insert((point.min(next), point.max(next)));
            point = next;
            heading = if step < d { (heading + 1) % 6 } else { (heading + 5) % 6 };
        }
    }
    if point != start || heading != 0 {
        return Err(PatchError::InvalidCode(format!("{code}: walk does not close")));
    }
    let cap = (total * total) as usize + 1;
    let mut cells: HashSet<Cell> = left_cells.iter().copied().collect();
    let mut queue: VecDeque<Cell> = cells.iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        for j in 0..6 {
            let (a, b) = (corner(c, j), corner(c, j + 1));
            if boundary.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            let nb = add(c, DIRECTIONS[(j + 1) % 6]);
            if cells.insert(nb) {
                if cells.len() > cap {
                    return Err(PatchError::InvalidCode(format!("{code}: region is unbounded")));
                }
                queue.push_back(nb);
            }
        }
    }
    let poly = Polyhex::new(cells)
        .map_err(|e| PatchError::InvalidCode(format!("{code}: {e}")))?;
    let patch = poly.to_patch()?;
    if boundary_edge_code(&patch)?.digits() != canonical_digits(&digits) {
        return Err(PatchError::InvalidCode(format!("{code}: perimeter does not reproduce the code")));
    }
    Ok(poly)
}

pub fn parse_bec(code: &str) -> Result<PlanarPatch, PatchError> {
    parse_bec_polyhex(code)?.to_patch()
}
