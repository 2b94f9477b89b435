//! Plane patches given by a rotation system.
//!
//! Rotations are stored counterclockwise. Face traversal follows the dart
//! `u -> v` with `v -> w`, where `w` precedes `u` in the rotation at `v`, so
//! bounded faces come out counterclockwise and the outer face comes out as a
//! clockwise walk around the patch. That clockwise walk is the perimeter
//! order used for natural attachment sets and boundary codes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AltanPair, AttachmentSet, Graph, GraphError};
use crate::linalg::nullity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatchError {
    #[error("inconsistent embedding: {0}")]
    InconsistentEmbedding(String),
    #[error("{candidates} faces qualify as the outer face")]
    AmbiguousOuterFace { candidates: usize },
    #[error("not a patch: {0}")]
    NotAPatch(String),
    #[error("patch has no degree-2 vertices")]
    NoDegreeTwoVertices,
    #[error("face identity violated: {0}")]
    IdentityViolation(String),
    #[error("patch is not bipartite")]
    NotBipartite,
    #[error("invalid boundary edge code: {0}")]
    InvalidCode(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How the outer face of a rotation system is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterFace {
    /// The unique face incident with every degree-2 vertex.
    Detect,
    /// The face containing the dart `u -> v`.
    Dart(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPatch {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    outer_face: usize,
}

/// Traces every face of a rotation system and checks Euler's formula.
pub fn faces(graph: &Graph, rotation: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, PatchError> {
    let n = graph.order();
    if rotation.len() != n {
        return Err(PatchError::InconsistentEmbedding(format!(
            "rotation lists {} vertices, graph has {n}",
            rotation.len()
        )));
    }
    for (v, rot) in rotation.iter().enumerate() {
        let mut sorted = rot.clone();
        sorted.sort_unstable();
        if sorted != graph.neighbors(v) {
            return Err(PatchError::InconsistentEmbedding(format!(
                "rotation at vertex {v} does not match its neighbours"
            )));
        }
    }
    if !graph.is_connected() {
        return Err(PatchError::InconsistentEmbedding("graph is disconnected".into()));
    }
    let position = |v: usize, u: usize| rotation[v].iter().position(|&w| w == u).unwrap();
    let mut seen: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut out = Vec::new();
    for start in 0..n {
        for k in 0..rotation[start].len() {
            if seen[start][k] {
                continue;
            }
            let mut walk = Vec::new();
            let (mut u, mut idx) = (start, k);
            while !seen[u][idx] {
                seen[u][idx] = true;
                walk.push(u);
                let v = rotation[u][idx];
                let deg = rotation[v].len();
                let w_idx = (position(v, u) + deg - 1) % deg;
                u = v;
                idx = w_idx;
            }
            if (u, idx) != (start, k) {
                return Err(PatchError::InconsistentEmbedding("face walk does not close".into()));
            }
            out.push(walk);
        }
    }
    let euler = n as i64 - graph.size() as i64 + out.len() as i64;
    if euler != 2 {
        return Err(PatchError::InconsistentEmbedding(format!(
            "V - E + F = {euler}, rotation system is not planar"
        )));
    }
    Ok(out)
}

/// The unique face incident with all degree-2 vertices.
pub fn outer_face_detect(graph: &Graph, faces: &[Vec<usize>]) -> Result<usize, PatchError> {
    let deg2: Vec<usize> = (0..graph.order()).filter(|&v| graph.degree(v) == 2).collect();
    let candidates: Vec<usize> = faces
        .iter()
        .enumerate()
        .filter(|(_, f)| deg2.iter().all(|v| f.contains(v)))
        .map(|(i, _)| i)
        .collect();
    match candidates.as_slice() {
        [one] => Ok(*one),
        _ => Err(PatchError::AmbiguousOuterFace {
            candidates: candidates.len(),
        }),
    }
}

fn face_with_dart(faces: &[Vec<usize>], u: usize, v: usize) -> Option<usize> {
    faces.iter().position(|f| {
        (0..f.len()).any(|i| f[i] == u && f[(i + 1) % f.len()] == v)
    })
}

impl PlanarPatch {
    /// Builds and validates a patch: 2-connected, degrees in `2..=3`, every
    /// degree-2 vertex on the outer face, consistent planar rotation.
    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>, outer: OuterFace) -> Result<PlanarPatch, PatchError> {
        let faces = faces(&graph, &rotation)?;
        let outer_face = match outer {
            OuterFace::Detect => outer_face_detect(&graph, &faces)?,
            OuterFace::Dart(u, v) => face_with_dart(&faces, u, v).ok_or_else(|| {
                PatchError::InconsistentEmbedding(format!("{u} -> {v} is not a dart"))
            })?,
        };
        let patch = PlanarPatch {
            graph,
            rotation,
            faces,
            outer_face,
        };
        patch.validate()?;
        Ok(patch)
    }

    /// Rotation from planar straight-line coordinates; the outer face is the
    /// face with negative signed area.
    pub fn from_coordinates(graph: Graph, coords: &[(f64, f64)]) -> Result<PlanarPatch, PatchError> {
        if coords.len() != graph.order() {
            return Err(PatchError::InconsistentEmbedding(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                graph.order()
            )));
        }
        let rotation: Vec<Vec<usize>> = (0..graph.order())
            .map(|v| {
                let (x0, y0) = coords[v];
                let mut nbrs = graph.neighbors(v).to_vec();
                nbrs.sort_by(|&a, &b| {
                    let ta = (coords[a].1 - y0).atan2(coords[a].0 - x0);
                    let tb = (coords[b].1 - y0).atan2(coords[b].0 - x0);
                    ta.total_cmp(&tb)
                });
                nbrs
            })
            .collect();
        let fs = faces(&graph, &rotation)?;
        let area = |f: &Vec<usize>| {
            (0..f.len())
                .map(|i| {
                    let (a, b) = (coords[f[i]], coords[f[(i + 1) % f.len()]]);
                    a.0 * b.1 - a.1 * b.0
                })
                .sum::<f64>()
        };
        let outer = (0..fs.len())
            .min_by(|&a, &b| area(&fs[a]).total_cmp(&area(&fs[b])))
            .ok_or_else(|| PatchError::InconsistentEmbedding("no faces".into()))?;
        let (u, v) = (fs[outer][0], fs[outer][1 % fs[outer].len()]);
        PlanarPatch::new(graph, rotation, OuterFace::Dart(u, v))
    }

    fn validate(&self) -> Result<(), PatchError> {
        let g = &self.graph;
        if g.order() < 3 || !g.is_biconnected() {
            return Err(PatchError::NotAPatch("graph is not 2-connected".into()));
        }
        if let Some(v) = (0..g.order()).find(|&v| !(2..=3).contains(&g.degree(v))) {
            return Err(PatchError::NotAPatch(format!(
                "vertex {v} has degree {}",
                g.degree(v)
            )));
        }
        let outer = &self.faces[self.outer_face];
        if let Some(v) = (0..g.order()).find(|&v| g.degree(v) == 2 && !outer.contains(&v)) {
            return Err(PatchError::NotAPatch(format!(
                "degree-2 vertex {v} is not on the outer face"
            )));
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    /// All faces, outer face included.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face
    }

    /// The perimeter as a clockwise vertex walk.
    pub fn outer_walk(&self) -> &[usize] {
        &self.faces[self.outer_face]
    }

    pub fn bounded_faces(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        let outer = self.outer_face;
        self.faces
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i != outer)
            .map(|(_, f)| f)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len() - 1
    }

    /// Histogram of bounded face lengths.
    pub fn face_lengths(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in self.bounded_faces() {
            *out.entry(f.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn perimeter(&self) -> usize {
        self.outer_walk().len()
    }

    pub fn n2(&self) -> usize {
        self.graph.degrees().iter().filter(|&&d| d == 2).count()
    }

    pub fn n3(&self) -> usize {
        self.order() - self.n2()
    }

    pub fn n3_boundary(&self) -> usize {
        self.outer_walk()
            .iter()
            .filter(|&&v| self.graph.degree(v) == 3)
            .count()
    }

    pub fn n3_internal(&self) -> usize {
        self.n3() - self.n3_boundary()
    }

    /// Degrees along the perimeter walk.
    pub fn degree_code(&self) -> Vec<u8> {
        self.outer_walk()
            .iter()
            .map(|&v| self.graph.degree(v) as u8)
            .collect()
    }

    pub fn boundary_profile(&self) -> BoundaryProfile {
        bay_features(&self.degree_code())
    }

    /// Level-0 altan pair on the natural attachment set.
    pub fn altan_pair(&self) -> Result<AltanPair, PatchError> {
        let h = natural_attachment_set(self)?;
        Ok(AltanPair::new(self.graph.clone(), h)?)
    }

    pub fn to_document(&self) -> PatchDocument {
        PatchDocument {
            n: self.order(),
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
            rotation: self.rotation.clone(),
            outer_face: self.outer_walk().to_vec(),
        }
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(None)
    }
}

/// JSON export shape of a patch, rotation system included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub rotation: Vec<Vec<usize>>,
    pub outer_face: Vec<usize>,
}

impl PatchDocument {
    pub fn patch(&self) -> Result<PlanarPatch, PatchError> {
        let graph = Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?;
        let outer = match self.outer_face.as_slice() {
            [u, v, ..] => OuterFace::Dart(*u, *v),
            _ => OuterFace::Detect,
        };
        PlanarPatch::new(graph, self.rotation.clone(), outer)
    }
}

/// Degree-2 vertices in perimeter order, canonically rotated.
pub fn natural_attachment_set(patch: &PlanarPatch) -> Result<AttachmentSet, PatchError> {
    let vertices: Vec<usize> = patch
        .outer_walk()
        .iter()
        .copied()
        .filter(|&v| patch.graph.degree(v) == 2)
        .collect();
    if vertices.is_empty() {
        return Err(PatchError::NoDegreeTwoVertices);
    }
    Ok(AttachmentSet::new(vertices, &patch.graph)?.canonical_rotation())
}

/// The altan on the natural attachment set, with the rotation extended so
/// the new x/y ring bounds the outer face. Vertex numbering matches
/// [`AltanPair::altan`].
pub fn altan_of_patch(patch: &PlanarPatch) -> Result<PlanarPatch, PatchError> {
    let pair = patch.altan_pair()?.altan()?;
    let n = patch.order();
    let h = pair.h();
    let walk = patch.outer_walk();
    let p = walk.len();
    let mut rotation = patch.rotation.clone();
    rotation.resize(n + 2 * h, Vec::new());
    let parent_h = natural_attachment_set(patch)?;
    for (k, &v) in parent_h.vertices().iter().enumerate() {
        let i = k + 1;
        let (x, y, y_prev) = (pair.x(i), pair.y(i), pair.y(if i == 1 { h } else { i - 1 }));
        let at = walk.iter().position(|&w| w == v).unwrap();
        let pred = walk[(at + p - 1) % p];
        let slot = rotation[v].iter().position(|&w| w == pred).unwrap();
        rotation[v].insert(slot, x);
        rotation[x] = vec![y, y_prev, v];
        let x_next = pair.x(if i == h { 1 } else { i + 1 });
        rotation[y] = vec![x, x_next];
    }
    PlanarPatch::new(pair.graph, rotation, OuterFace::Dart(n, n + h))
}

/// Bounded-face histograms of an altan, and of the faces its last step added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCensus {
    pub f: BTreeMap<usize, usize>,
    pub f_tilde: BTreeMap<usize, usize>,
}

/// `sum (6 - r) * count_r`.
pub fn defect_sum(counts: &BTreeMap<usize, usize>) -> i64 {
    counts
        .iter()
        .map(|(&r, &c)| (6 - r as i64) * c as i64)
        .sum()
}

impl FaceCensus {
    pub fn f(&self, r: usize) -> usize {
        self.f.get(&r).copied().unwrap_or(0)
    }

    pub fn f_tilde(&self, r: usize) -> usize {
        self.f_tilde.get(&r).copied().unwrap_or(0)
    }
}

/// Face census of `altan` relative to `parent`, checking
/// `sum (6-r) f_r = 6`, `sum (6-r) f~_r = n_2 - n_3^b` with no new triangles
/// or quadrilaterals, the hexagonal-parent form
/// `f~_5 - f~_7 - 2 f~_8 - 3 f~_9 = 6`, and the parity of the odd-length
/// new faces for bipartite parents.
pub fn face_census(parent: &PlanarPatch, altan: &PlanarPatch) -> Result<FaceCensus, PatchError> {
    let n = parent.order();
    let f = altan.face_lengths();
    let mut f_tilde = BTreeMap::new();
    for face in altan.bounded_faces().filter(|fc| fc.iter().any(|&v| v >= n)) {
        *f_tilde.entry(face.len()).or_insert(0) += 1;
    }
    let census = FaceCensus { f, f_tilde };
    let violation = |what: String| Err(PatchError::IdentityViolation(what));
    if defect_sum(&census.f) != 6 {
        return violation(format!("sum (6-r) f_r = {}", defect_sum(&census.f)));
    }
    let rhs = parent.n2() as i64 - parent.n3_boundary() as i64;
    if defect_sum(&census.f_tilde) != rhs {
        return violation(format!(
            "sum (6-r) f~_r = {}, expected {rhs}",
            defect_sum(&census.f_tilde)
        ));
    }
    if census.f_tilde(3) + census.f_tilde(4) != 0 {
        return violation("altan step added a face shorter than 5".into());
    }
    let added: usize = census.f_tilde.values().sum();
    if added != parent.n2() {
        return violation(format!("{added} new faces for h = {}", parent.n2()));
    }
    if parent.bounded_faces().all(|fc| fc.len() == 6) {
        let long = census.f_tilde.range(10..).map(|(_, &c)| c).sum::<usize>();
        let lhs = census.f_tilde(5) as i64
            - census.f_tilde(7) as i64
            - 2 * census.f_tilde(8) as i64
            - 3 * census.f_tilde(9) as i64;
        if lhs != 6 || long != 0 {
            return violation(format!("f~_5 - f~_7 - 2f~_8 - 3f~_9 = {lhs}"));
        }
    }
    if parent.graph.is_bipartite() {
        let odd: i64 = census
            .f_tilde
            .iter()
            .filter(|(&r, _)| r % 2 == 1)
            .map(|(&r, &c)| (6 - r as i64) * c as i64)
            .sum();
        if odd.rem_euclid(2) != 0 {
            return violation("odd new faces have odd weighted count".into());
        }
    }
    Ok(census)
}

/// Perimeter degree code with its fissure/bay/cove/fjord counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub code: Vec<u8>,
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
    pub b4: usize,
    pub b: usize,
    pub n22: usize,
}

impl BoundaryProfile {
    /// `n22 = 6 + b`, which holds for benzenoids.
    pub fn satisfies_bay_identity(&self) -> bool {
        self.n22 == 6 + self.b
    }
}

/// Counts maximal runs of `k` degree-3 vertices between degree-2 vertices
/// (`232`, `2332`, `23332`, `233332`) and cyclically adjacent `22` pairs.
pub fn bay_features(code: &[u8]) -> BoundaryProfile {
    let len = code.len();
    let mut runs = [0usize; 5];
    let mut n22 = 0;
    if let Some(start) = code.iter().position(|&d| d == 2) {
        let mut run = 0;
        for k in 1..=len {
            let d = code[(start + k) % len];
            if d == 2 {
                if (1..=4).contains(&run) {
                    runs[run] += 1;
                }
                if run == 0 {
                    n22 += 1;
                }
                run = 0;
            } else {
                run += 1;
            }
        }
    }
    BoundaryProfile {
        code: code.to_vec(),
        b1: runs[1],
        b2: runs[2],
        b3: runs[3],
        b4: runs[4],
        b: runs[2] + 2 * runs[3] + 3 * runs[4],
        n22,
    }
}

/// True iff `eta = h (mod 2)` and `h, n_3^i, n_3^b, n` share that parity.
pub fn parity_check(patch: &PlanarPatch) -> Result<bool, PatchError> {
    if !patch.graph.is_bipartite() {
        return Err(PatchError::NotBipartite);
    }
    let eta = nullity(&patch.graph);
    let h = patch.n2();
    let chain = [h, patch.n3_internal(), patch.n3_boundary(), patch.order(), eta];
    Ok(chain.iter().all(|&x| x % 2 == h % 2))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn hexagon_faces() {
        let p = hexagon();
        assert_eq!(p.faces().len(), 2);
        assert_eq!(p.face_lengths(), BTreeMap::from([(6, 1)]));
        assert_eq!(p.perimeter(), 6);
    }

    #[test]
    fn hexagon_without_mark_is_ambiguous() {
        let g = crate::graph::cycle_graph(6);
        let rotation = (0..6).map(|v| vec![(v + 1) % 6, (v + 5) % 6]).collect();
        assert_eq!(
            PlanarPatch::new(g, rotation, OuterFace::Detect),
            Err(PatchError::AmbiguousOuterFace { candidates: 2 })
        );
    }

    #[test]
    fn pentalene_faces_and_outer_walk() {
        let p = pentalene();
        assert_eq!(p.faces().len(), 3);
        assert_eq!(p.face_lengths(), BTreeMap::from([(5, 2)]));
        assert_eq!(p.perimeter(), 8);
        assert_eq!(outer_face_detect(p.graph(), p.faces()).unwrap(), p.outer_face());
        assert_eq!((p.n2(), p.n3_boundary(), p.n3_internal()), (6, 2, 0));
    }

    #[test]
    fn bad_rotation_is_rejected() {
        let g = crate::graph::cycle_graph(4);
        let rotation = vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 1]];
        assert!(matches!(
            faces(&g, &rotation),
            Err(PatchError::InconsistentEmbedding(_))
        ));
        // K4 with a non-planar rotation
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let rotation = vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]];
        assert!(matches!(
            faces(&k4, &rotation),
            Err(PatchError::InconsistentEmbedding(_))
        ));
    }

    #[test]
    fn path_is_not_a_patch() {
        let g = crate::graph::path_graph(3);
        let rotation = vec![vec![1], vec![0, 2], vec![1]];
        assert!(matches!(
            PlanarPatch::new(g, rotation, OuterFace::Detect),
            Err(PatchError::NotAPatch(_))
        ));
    }

    #[test]
    fn natural_attachment_sets() {
        assert_eq!(natural_attachment_set(&hexagon()).unwrap().len(), 6);
        let h = natural_attachment_set(&pentalene()).unwrap();
        assert_eq!(h.len(), 6);
        assert!(!h.vertices().contains(&0) && !h.vertices().contains(&1));
    }

    #[test]
    fn altan_of_hexagon_adds_six_pentagons() {
        let hex = hexagon();
        let alt = altan_of_patch(&hex).unwrap();
        assert_eq!(alt.order(), 18);
        assert_eq!(alt.perimeter(), 12);
        let census = face_census(&hex, &alt).unwrap();
        assert_eq!(census.f_tilde, BTreeMap::from([(5, 6)]));
        assert_eq!(census.f, BTreeMap::from([(5, 6), (6, 1)]));
    }

    #[test]
    fn altan_of_pentalene() {
        let pent = pentalene();
        let alt = altan_of_patch(&pent).unwrap();
        assert_eq!(alt.order(), 20);
        let census = face_census(&pent, &alt).unwrap();
        assert_eq!(defect_sum(&census.f_tilde), 4);
        assert!(census.f_tilde.keys().all(|&r| r >= 5));
        assert_eq!(nullity(pent.graph()), 1);
        assert_eq!(nullity(alt.graph()), 2);
    }

    #[test]
    fn iterated_patch_altan_has_hexagon_strips() {
        let hex = hexagon();
        let a1 = altan_of_patch(&hex).unwrap();
        let a2 = altan_of_patch(&a1).unwrap();
        let census = face_census(&a1, &a2).unwrap();
        assert_eq!(census.f_tilde, BTreeMap::from([(6, 6)]));
        let code = a1.degree_code();
        assert_eq!(code.len(), 12);
        assert!((0..12).all(|i| code[i] != code[(i + 1) % 12]));
    }

    #[test]
    fn bay_feature_counts() {
        let hex = bay_features(&[2; 6]);
        assert_eq!((hex.b, hex.n22), (0, 6));
        // naphthalene perimeter
        let naph = bay_features(&[2, 2, 2, 2, 3, 2, 2, 2, 2, 3]);
        assert_eq!((naph.b1, naph.b, naph.n22), (2, 0, 6));
        assert!(naph.satisfies_bay_identity());
        let bay = bay_features(&[2, 3, 3, 2, 2]);
        assert_eq!((bay.b2, bay.b, bay.n22), (1, 1, 2));
    }

    #[test]
    fn parity_examples() {
        assert!(parity_check(&hexagon()).unwrap());
        assert_eq!(parity_check(&pentalene()), Err(PatchError::NotBipartite));
    }

    #[test]
    fn document_round_trip() {
        let p = pentalene();
        let doc = p.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back: PatchDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.patch().unwrap(), p);
    }
}
