//! Simple undirected graphs, cyclic attachment sets and the altan construction.

use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    IndexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid attachment set: {0}")]
    InvalidAttachment(String),
}

/// A simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::IndexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.order();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// A proper 2-colouring if the graph is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            stack.push(start);
            while let Some(v) = stack.pop() {
                let cv = color[v].unwrap();
                for &w in &self.adjacency[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            stack.push(w);
                        }
                        Some(cw) if cw == cv => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// True when the graph is connected, has at least three vertices and no
    /// cut vertex.
    pub fn is_biconnected(&self) -> bool {
        let n = self.order();
        if n < 3 || !self.is_connected() {
            return false;
        }
        // iterative Tarjan low-link from vertex 0
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut time = 0;
        let mut root_children = 0;
        let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
        disc[0] = 0;
        low[0] = 0;
        time += 1;
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.2 < self.adjacency[v].len() {
                let w = self.adjacency[v][top.2];
                top.2 += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != 0 && low[v] >= disc[parent] {
                        return false;
                    }
                }
            }
        }
        root_children <= 1
    }

    /// Induced subgraph on `keep`, vertices relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.order()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut adjacency = vec![Vec::new(); keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adjacency[v] {
                if index[w] != usize::MAX {
                    adjacency[i].push(index[w]);
                }
            }
            adjacency[i].sort_unstable();
        }
        Graph { adjacency }
    }

    /// Graphviz rendering; `labels` (if given) are attached per vertex.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut out = String::from("graph G {\n");
        if let Some(labels) = labels {
            for (v, label) in labels.iter().enumerate() {
                let _ = writeln!(out, "  {v} [label=\"{label}\"];");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// A cyclic tuple of vertices where spokes of the altan attach. Repeated
/// vertices are allowed. Equality ignores circular shifts.
#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttachmentSet(Vec<usize>);

impl AttachmentSet {
    /// Validates the tuple against `graph` (length at least two, every entry
    /// a vertex of `graph`).
    pub fn new(vertices: Vec<usize>, graph: &Graph) -> Result<AttachmentSet, GraphError> {
        let set = AttachmentSet(vertices);
        set.validate(graph)?;
        Ok(set)
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), GraphError> {
        if self.0.len() < 2 {
            return Err(GraphError::InvalidAttachment(format!(
                "length {} is below 2",
                self.0.len()
            )));
        }
        if let Some(&v) = self.0.iter().find(|&&v| v >= graph.order()) {
            return Err(GraphError::InvalidAttachment(format!(
                "vertex {v} is not in a graph on {} vertices",
                graph.order()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_even(&self) -> bool {
        self.0.len().is_multiple_of(2)
    }

    pub fn rotated(&self, shift: usize) -> AttachmentSet {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = shift % v.len();
            v.rotate_left(k);
        }
        AttachmentSet(v)
    }

    /// Lexicographically least circular shift.
    pub fn canonical_rotation(&self) -> AttachmentSet {
        let h = self.0.len();
        let best = (0..h)
            .min_by(|&a, &b| {
                let ra = self.0[a..].iter().chain(&self.0[..a]);
                let rb = self.0[b..].iter().chain(&self.0[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        self.rotated(best)
    }
}

impl PartialEq for AttachmentSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.canonical_rotation().0 == other.canonical_rotation().0
    }
}

impl Hash for AttachmentSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_rotation().0.hash(state);
    }
}

/// A graph with an attachment set, plus the bookkeeping of the most recent
/// altan step.
#[derive(Debug, Clone, PartialEq)]
pub struct AltanPair {
    pub graph: Graph,
    pub attachment: AttachmentSet,
    pub level: usize,
    pub x_range: Range<usize>,
    pub y_range: Range<usize>,
}

impl AltanPair {
    /// Level-0 pair. The attachment set is stored in canonical rotation so
    /// the alternating signs of later steps are reproducible.
    pub fn new(graph: Graph, attachment: AttachmentSet) -> Result<AltanPair, GraphError> {
        attachment.validate(&graph)?;
        let n = graph.order();
        Ok(AltanPair {
            graph,
            attachment: attachment.canonical_rotation(),
            level: 0,
            x_range: n..n,
            y_range: n..n,
        })
    }

    /// Builds a pair without rotating the attachment tuple.
    pub fn with_exact_order(graph: Graph, attachment: AttachmentSet) -> Result<AltanPair, GraphError> {
        attachment.validate(&graph)?;
        let n = graph.order();
        Ok(AltanPair {
            graph,
            attachment,
            level: 0,
            x_range: n..n,
            y_range: n..n,
        })
    }

    pub fn h(&self) -> usize {
        self.attachment.len()
    }

    /// Vertex index of `x_i` for 1-based `i` in the most recent step.
    pub fn x(&self, i: usize) -> usize {
        self.x_range.start + i - 1
    }

    /// Vertex index of `y_i` for 1-based `i` in the most recent step.
    pub fn y(&self, i: usize) -> usize {
        self.y_range.start + i - 1
    }

    /// One altan step. New vertices `x_1..x_h` take indices `n..n+h` and
    /// `y_1..y_h` take `n+h..n+2h`; the induced attachment set is the y-block.
    pub fn altan(&self) -> Result<AltanPair, GraphError> {
        self.attachment.validate(&self.graph)?;
        let n = self.graph.order();
        let h = self.attachment.len();
        let mut adjacency = self.graph.adjacency.clone();
        adjacency.resize(n + 2 * h, Vec::new());
        let x = |i: usize| n + i;
        let y = |i: usize| n + h + i;
        for (i, &v) in self.attachment.vertices().iter().enumerate() {
            adjacency[v].push(x(i));
            adjacency[x(i)].push(v);
            adjacency[x(i)].push(y(i));
            adjacency[y(i)].push(x(i));
            let next = (i + 1) % h;
            adjacency[y(i)].push(x(next));
            adjacency[x(next)].push(y(i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(AltanPair {
            graph: Graph { adjacency },
            attachment: AttachmentSet((n + h..n + 2 * h).collect()),
            level: self.level + 1,
            x_range: n..n + h,
            y_range: n + h..n + 2 * h,
        })
    }

    /// `k` successive altan steps, each on the induced attachment set.
    pub fn iterated_altan(&self, k: usize) -> Result<AltanPair, GraphError> {
        let mut pair = self.clone();
        for _ in 0..k {
            pair = pair.altan()?;
        }
        Ok(pair)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.graph.order(),
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
            attachment: Some(self.attachment.vertices().to_vec()),
            level: self.level,
        }
    }
}

/// JSON interchange form of a graph with an optional attachment set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attachment: Option<Vec<usize>>,
    #[serde(default)]
    pub level: usize,
}

impl GraphDocument {
    pub fn from_graph(graph: &Graph) -> GraphDocument {
        GraphDocument {
            n: graph.order(),
            edges: graph.edges().map(|(u, v)| [u, v]).collect(),
            attachment: None,
            level: 0,
        }
    }

    pub fn graph(&self) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Rebuilds a level-0 pair; the stored level is informational only since
    /// the x/y blocks of earlier steps are not recorded.
    pub fn pair(&self) -> Result<AltanPair, GraphError> {
        let graph = self.graph()?;
        let attachment = self
            .attachment
            .clone()
            .ok_or_else(|| GraphError::InvalidAttachment("document has no attachment set".into()))?;
        AltanPair::with_exact_order(graph.clone(), AttachmentSet::new(attachment, &graph)?)
    }
}

/// Path on `n` vertices `0 - 1 - ... - n-1`.
pub fn path_graph(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn make_graph_examples() {
        assert_eq!(p3().degrees(), vec![1, 2, 1]);
        let single = Graph::new(1, []).unwrap();
        assert_eq!((single.order(), single.size()), (1, 0));
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(c4.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn make_graph_errors_and_dedup() {
        assert_eq!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::IndexOutOfRange { vertex: 2, order: 2 })
        );
        assert_eq!(Graph::new(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        let g = Graph::new(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.size(), 1);
    }

    #[test]
    fn altan_counts() {
        let g = p3();
        let h2 = AttachmentSet::new(vec![0, 2], &g).unwrap();
        let pair = AltanPair::new(g.clone(), h2).unwrap();
        let a = pair.altan().unwrap();
        assert_eq!((a.graph.order(), a.graph.size()), (7, 8));
        assert_eq!(a.level, 1);
        assert_eq!(a.attachment.vertices(), &[5, 6]);
        let a2 = pair.iterated_altan(2).unwrap();
        assert_eq!((a2.graph.order(), a2.graph.size()), (11, 14));
        assert_eq!(pair.iterated_altan(0).unwrap(), pair);
    }

    #[test]
    fn repeated_attachment_vertex_gets_two_spokes() {
        let g = p3();
        let h4 = AttachmentSet::new(vec![0, 0, 2, 2], &g).unwrap();
        let a = AltanPair::new(g, h4).unwrap().altan().unwrap();
        assert_eq!(a.graph.neighbors(0), &[1, 3, 4]);
        for i in 1..=4 {
            assert_eq!(a.graph.degree(a.x(i)), 3);
            assert_eq!(a.graph.degree(a.y(i)), 2);
        }
    }

    #[test]
    fn altan_edge_pattern() {
        let g = p3();
        let h = AttachmentSet::new(vec![0, 1, 2], &g).unwrap();
        let a = AltanPair::new(g, h).unwrap().altan().unwrap();
        // x_i - y_i, y_i - x_{i+1}, y_h - x_1
        for i in 1..=3 {
            assert!(a.graph.has_edge(a.x(i), a.y(i)));
            let next = if i == 3 { 1 } else { i + 1 };
            assert!(a.graph.has_edge(a.y(i), a.x(next)));
        }
    }

    #[test]
    fn altan_connectivity_rule() {
        // two components, attachment touches only one
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let one_side = AttachmentSet::new(vec![0, 1], &g).unwrap();
        let both = AttachmentSet::new(vec![0, 2], &g).unwrap();
        assert!(!AltanPair::new(g.clone(), one_side).unwrap().altan().unwrap().graph.is_connected());
        assert!(AltanPair::new(g, both).unwrap().altan().unwrap().graph.is_connected());
    }

    #[test]
    fn canonical_rotation_examples() {
        let g = Graph::empty(4);
        let c = |v: Vec<usize>| AttachmentSet::new(v, &g).unwrap().canonical_rotation();
        assert_eq!(c(vec![2, 0, 1]).vertices(), &[0, 1, 2]);
        assert_eq!(c(vec![0, 0, 3, 3]).vertices(), &[0, 0, 3, 3]);
        assert_eq!(c(vec![3, 0, 0, 3]).vertices(), &[0, 0, 3, 3]);
        // reflection is not identified
        assert_ne!(c(vec![0, 1, 2, 3]), c(vec![3, 2, 1, 0]));
    }

    #[test]
    fn attachment_errors() {
        let g = p3();
        assert!(matches!(
            AttachmentSet::new(vec![0], &g),
            Err(GraphError::InvalidAttachment(_))
        ));
        assert!(matches!(
            AttachmentSet::new(vec![0, 3], &g),
            Err(GraphError::InvalidAttachment(_))
        ));
    }

    #[test]
    fn biconnectivity() {
        assert!(cycle_graph(5).is_biconnected());
        assert!(!path_graph(4).is_biconnected());
        // two triangles sharing a vertex
        let bowtie = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!bowtie.is_biconnected());
    }

    #[test]
    fn document_round_trip() {
        let g = p3();
        let pair = AltanPair::new(g.clone(), AttachmentSet::new(vec![0, 2], &g).unwrap()).unwrap();
        let doc = pair.altan().unwrap().to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.graph().unwrap(), pair.altan().unwrap().graph);
    }
}
