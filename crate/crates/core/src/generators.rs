//! Isomorph-free generation of benzenoids, catafused benzenoids and convex
//! benzenoids.
//!
//! General and catafused families grow one hexagon at a time by canonical
//! augmentation: a parent adds one representative of every orbit of
//! addable cells, and a child is kept only if the added cell is equivalent
//! to its canonical deletion cell.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{add, neighbours, Cell, Polyhex, DIRECTIONS};

pub const DEFAULT_CAP: usize = 10;

/// Levels grown breadth-first before the search splits into parallel subtrees.
const SPLIT_LEVEL: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{eps} hexagons exceeds the cap of {cap}")]
    CapExceeded { eps: usize, cap: usize },
    #[error("hexagon count must be at least 1")]
    ZeroSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Benzenoid,
    Catafused,
}

fn closes_triangle(p: &Polyhex, c: Cell) -> bool {
    (0..6).any(|k| p.contains(add(c, DIRECTIONS[k])) && p.contains(add(c, DIRECTIONS[(k + 1) % 6])))
}

fn removable(p: &Polyhex, x: Cell) -> bool {
    let degree = neighbours(x).filter(|&n| p.contains(n)).count();
    degree < 6 && p.without_cell(x).is_connected()
}

/// Canonical children of a canonical polyhex.
pub fn children(parent: &Polyhex, family: Family) -> Vec<Polyhex> {
    let (_, automorphisms) = parent.canonical_placements();
    let candidates: BTreeSet<Cell> = parent
        .cells()
        .iter()
        .flat_map(|&c| neighbours(c))
        .filter(|&c| !parent.contains(c))
        .collect();
    let representatives: BTreeSet<Cell> = candidates
        .into_iter()
        .map(|c| automorphisms.iter().map(|a| a.apply(c)).min().unwrap())
        .collect();
    let mut out = Vec::new();
    for c in representatives {
        if family == Family::Catafused && closes_triangle(parent, c) {
            continue;
        }
        let child = parent.with_cell(c);
        if child.has_hole() {
            continue;
        }
        let (canonical, placements) = child.canonical_placements();
        let first = placements[0];
        let target = child
            .cells()
            .iter()
            .copied()
            .filter(|&x| removable(&child, x))
            .map(|x| first.apply(x))
            .max();
        if let Some(target) = target {
            if placements.iter().any(|pl| pl.apply(c) == target) {
                out.push(canonical);
            }
        }
    }
    out
}

fn check(eps: usize, cap: usize) -> Result<(), GeneratorError> {
    if eps == 0 {
        return Err(GeneratorError::ZeroSize);
    }
    if eps > cap {
        return Err(GeneratorError::CapExceeded { eps, cap });
    }
    Ok(())
}

fn descend<T, F>(p: &Polyhex, eps: usize, family: Family, f: &F, out: &mut Vec<T>)
where
    F: Fn(&Polyhex) -> Option<T>,
{
    if p.len() == eps {
        out.extend(f(p));
        return;
    }
    for child in children(p, family) {
        descend(&child, eps, family, f, out);
    }
}

/// Applies `f` to one representative of every class with `eps` hexagons and
/// keeps the `Some` results. Subtrees run in parallel; the output order is
/// deterministic.
pub fn par_filter_map_family<T, F>(eps: usize, family: Family, cap: usize, f: F) -> Result<Vec<T>, GeneratorError>
where
    T: Send,
    F: Fn(&Polyhex) -> Option<T> + Sync,
{
    check(eps, cap)?;
    let mut level = vec![Polyhex::benzene()];
    while level[0].len() < eps.min(SPLIT_LEVEL) {
        level = level.iter().flat_map(|p| children(p, family)).collect();
        if level.is_empty() {
            return Ok(Vec::new());
        }
    }
    let chunks: Vec<Vec<T>> = level
        .par_iter()
        .map(|p| {
            let mut out = Vec::new();
            descend(p, eps, family, &f, &mut out);
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn sorted(mut v: Vec<Polyhex>) -> Vec<Polyhex> {
    v.sort();
    v
}

/// All benzenoids with `eps` hexagons, one per class under the twelve
/// lattice symmetries, in canonical form.
pub fn enumerate_benzenoids(eps: usize) -> Result<Vec<Polyhex>, GeneratorError> {
    enumerate_benzenoids_capped(eps, DEFAULT_CAP)
}

pub fn enumerate_benzenoids_capped(eps: usize, cap: usize) -> Result<Vec<Polyhex>, GeneratorError> {
    par_filter_map_family(eps, Family::Benzenoid, cap, |p| Some(p.clone())).map(sorted)
}

/// Benzenoids without internal vertices.
pub fn enumerate_catafused(eps: usize) -> Result<Vec<Polyhex>, GeneratorError> {
    enumerate_catafused_capped(eps, DEFAULT_CAP)
}

pub fn enumerate_catafused_capped(eps: usize, cap: usize) -> Result<Vec<Polyhex>, GeneratorError> {
    par_filter_map_family(eps, Family::Catafused, cap, |p| Some(p.clone())).map(sorted)
}

/// A convex benzenoid as the cells `0 <= q <= a`, `0 <= r <= b`,
/// `c <= q + r <= d`, with `0 <= c <= min(a, b)` and
/// `max(a, b) <= d <= a + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConvexSpec {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

fn triangle(k: u32) -> u64 {
    k as u64 * (k as u64 + 1) / 2
}

impl ConvexSpec {
    pub fn is_valid(&self) -> bool {
        self.c <= self.a.min(self.b) && self.a.max(self.b) <= self.d && self.d <= self.a + self.b
    }

    pub fn hexagons(&self) -> u64 {
        (self.a as u64 + 1) * (self.b as u64 + 1) - triangle(self.c) - triangle(self.a + self.b - self.d)
    }

    /// Boundary side lengths in cyclic order; zero where a corner is cut
    /// down to a point.
    pub fn sides(&self) -> [u32; 6] {
        let ConvexSpec { a, b, c, d } = *self;
        [a - c, d - a, a + b - d, d - b, b - c, c]
    }

    /// Least side sequence over rotations and reversal.
    pub fn canonical_sides(&self) -> [u32; 6] {
        let s = self.sides();
        let mut rev = s;
        rev.reverse();
        (0..6)
            .flat_map(|k| {
                let mut x = s;
                x.rotate_left(k);
                let mut y = rev;
                y.rotate_left(k);
                [x, y]
            })
            .min()
            .unwrap()
    }

    pub fn polyhex(&self) -> Polyhex {
        let (a, b, c, d) = (self.a as i32, self.b as i32, self.c as i32, self.d as i32);
        Polyhex::from_cells(
            (0..=a)
                .flat_map(|q| (0..=b).map(move |r| (q, r)))
                .filter(|&(q, r)| (c..=d).contains(&(q + r))),
        )
    }
}

/// All convex benzenoids with at most `eps_max` hexagons, one per class,
/// ordered by hexagon count and then by canonical side sequence.
pub fn convex_specs(eps_max: u64) -> Vec<ConvexSpec> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let bound = eps_max as u32;
    for a in 0..bound {
        for b in 0..=a {
            let least = (a as u64 + 1) * (b as u64 + 1) - 2 * triangle(b);
            if least > eps_max {
                break;
            }
            for c in 0..=b {
                for d in a..=a + b {
                    let spec = ConvexSpec { a, b, c, d };
                    if spec.hexagons() <= eps_max && seen.insert(spec.canonical_sides()) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out.sort_by_key(|s| (s.hexagons(), s.canonical_sides()));
    out
}

pub fn enumerate_convex(eps_max: u64) -> Vec<Polyhex> {
    convex_specs(eps_max).iter().map(ConvexSpec::polyhex).collect()
}
