//! Undirected simple graphs with stable vertex labels.
//!
//! Every surgery returns a fresh [`Graph`]; labels are never compacted, so a
//! vertex removed at one reduction step can still be named in the trace and
//! matched against covers built many steps later.

mod generate;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use generate::{GeneratorKind, ParseGeneratorError};
pub use io::{parse_graph, write_dimacs, write_edge_list, Format};

/// Opaque vertex label. Input files number vertices from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered edge, stored with the smaller label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Edge {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{0} is not an edge")]
    NotAnEdge(Edge),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of declared range 1..={n} on line {line}")]
    OutOfRange { line: usize, vertex: u64, n: u64 },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Graph on vertices `1..=n` with no edges.
    pub fn with_vertices(n: u32) -> Graph {
        let mut g = Graph::new();
        for v in 1..=n {
            g.add_vertex(VertexId(v));
        }
        g
    }

    /// Builds a graph on `1..=n` from 1-based label pairs.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut g = Graph::with_vertices(n);
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::UnknownVertex(VertexId(v)));
                }
            }
            g.add_edge(VertexId(a), VertexId(b))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Inserts an edge, adding missing endpoints. Returns `false` if it was
    /// already present.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<bool, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let fresh = self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        if fresh {
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    /// Vertices in ascending label order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |n| n.len())
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range(a..).map(move |&b| Edge(a, b)))
    }

    /// Induced subgraph on the complement of `removed`.
    pub fn delete_vertices(&self, removed: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        if let Some(&v) = removed.iter().find(|v| !self.contains(**v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.without(removed))
    }

    fn without(&self, removed: &BTreeSet<VertexId>) -> Graph {
        let mut g = Graph::new();
        for (&v, ns) in &self.adj {
            if removed.contains(&v) {
                continue;
            }
            let kept: BTreeSet<VertexId> = ns.iter().filter(|u| !removed.contains(u)).copied().collect();
            g.edge_count += kept.len();
            g.adj.insert(v, kept);
        }
        g.edge_count /= 2;
        g
    }

    /// Active edge surgery: joins every vertex of `D_i = N(i) \ {j}` to every
    /// vertex of `D_j = N(j) \ {i}`, then drops `i` and `j`.
    pub fn active_edge_rewire(
        &self,
        i: VertexId,
        j: VertexId,
    ) -> Result<(Graph, BTreeSet<VertexId>, BTreeSet<VertexId>), GraphError> {
        if !self.has_edge(i, j) {
            return Err(GraphError::NotAnEdge(Edge::new(i, j)));
        }
        let d_i: BTreeSet<VertexId> = self.neighbors(i).filter(|&s| s != j).collect();
        let d_j: BTreeSet<VertexId> = self.neighbors(j).filter(|&t| t != i).collect();
        let mut g = self.without(&[i, j].into_iter().collect());
        for &s in &d_i {
            for &t in &d_j {
                // s == t means a triangle through (i, j); the join would be a loop.
                if s != t {
                    g.add_edge(s, t)?;
                }
            }
        }
        Ok((g, d_i, d_j))
    }

    /// Lexicographically smallest triangle, if any.
    pub fn find_triangle(&self) -> Option<OddCycle> {
        for (&a, na) in &self.adj {
            for &b in na.range(a..) {
                let nb = &self.adj[&b];
                if let Some(&c) = na.range(b..).find(|c| nb.contains(c)) {
                    return Some(OddCycle::from_sequence(vec![a, b, c]));
                }
            }
        }
        None
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = vec![v];
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Disjoint union; the labels of `other` are shifted past `self`'s largest.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.vertices().last().map_or(0, |v| v.0);
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(VertexId(v.0 + offset));
        }
        for e in other.edges() {
            g.add_edge(VertexId(e.0 .0 + offset), VertexId(e.1 .0 + offset))
                .expect("simple input stays simple");
        }
        g
    }

    /// Uncovered edges for a candidate vertex set; empty means `cover` is a cover.
    pub fn uncovered_edges(&self, cover: &BTreeSet<VertexId>) -> Vec<Edge> {
        self.edges()
            .filter(|e| !cover.contains(&e.0) && !cover.contains(&e.1))
            .collect()
    }
}

/// A simple odd cycle given by its cyclic vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OddCycle {
    vertices: Vec<VertexId>,
}

impl OddCycle {
    /// Canonicalizes the rotation (smallest label first) and direction
    /// (smaller of the two neighbours second).
    pub fn from_sequence(mut seq: Vec<VertexId>) -> OddCycle {
        assert!(seq.len() >= 3 && seq.len() % 2 == 1, "odd cycle needs odd length >= 3");
        let start = (0..seq.len()).min_by_key(|&k| seq[k]).unwrap();
        seq.rotate_left(start);
        if seq[seq.len() - 1] < seq[1] {
            seq[1..].reverse();
        }
        OddCycle { vertices: seq }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The `s` of a cycle of length `2s + 1`.
    pub fn half_length(&self) -> usize {
        (self.vertices.len() - 1) / 2
    }

    /// Right-hand side `s + 1` of the cycle's covering inequality.
    pub fn rhs(&self) -> usize {
        self.half_length() + 1
    }

    /// Sorted vertex set: equivalent cycles share it.
    pub fn vertex_set(&self) -> Vec<VertexId> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| Edge::new(self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// True if every consecutive pair is an edge of `g` and the labels are distinct.
    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        distinct.len() == self.vertices.len() && self.edges().all(|e| g.has_edge(e.0, e.1))
    }

    pub fn has_chord(&self, g: &Graph) -> bool {
        let n = self.vertices.len();
        (0..n).any(|a| {
            ((a + 2)..n).any(|b| {
                !(a == 0 && b == n - 1) && g.has_edge(self.vertices[a], self.vertices[b])
            })
        })
    }

    /// 0/1 incidence vector over `g`'s vertices in ascending label order.
    pub fn incidence(&self, g: &Graph) -> Vec<u8> {
        let members: BTreeSet<_> = self.vertices.iter().copied().collect();
        g.vertices().map(|v| u8::from(members.contains(&v))).collect()
    }
}

impl fmt::Display for OddCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A vertex set intended to cover every edge of some reference graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cover {
    pub members: BTreeSet<VertexId>,
}

impl Cover {
    pub fn new() -> Cover {
        Cover::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }
}

impl FromIterator<VertexId> for Cover {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Cover {
        Cover { members: iter.into_iter().collect() }
    }
}

/// Shorthand for a set of 1-based labels, handy in tests and examples.
pub fn vset(labels: &[u32]) -> BTreeSet<VertexId> {
    labels.iter().map(|&v| VertexId(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges_of(g: &Graph) -> Vec<(u32, u32)> {
        g.edges().map(|e| (e.0 .0, e.1 .0)).collect()
    }

    #[test]
    fn triangle_search() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        let t = k3.find_triangle().unwrap();
        assert_eq!(t.vertices(), &[VertexId(1), VertexId(2), VertexId(3)]);
        assert!(GeneratorKind::Cycle(5).generate().unwrap().find_triangle().is_none());
        assert!(GeneratorKind::Petersen.generate().unwrap().find_triangle().is_none());
        let k4 = GeneratorKind::Complete(4).generate().unwrap();
        assert_eq!(k4.find_triangle().unwrap().vertex_set(), vset(&[1, 2, 3]).into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn delete_vertices_examples() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        let k2 = k3.delete_vertices(&vset(&[3])).unwrap();
        assert_eq!(edges_of(&k2), vec![(1, 2)]);
        assert_eq!(k2.vertex_count(), 2);

        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        assert_eq!(c5.delete_vertices(&BTreeSet::new()).unwrap(), c5);

        let p5 = GeneratorKind::Path(5).generate().unwrap();
        let split = p5.delete_vertices(&vset(&[3])).unwrap();
        assert_eq!(edges_of(&split), vec![(1, 2), (4, 5)]);

        assert_eq!(k3.delete_vertices(&vset(&[9])), Err(GraphError::UnknownVertex(VertexId(9))));
    }

    #[test]
    fn rewire_examples() {
        let p5 = GeneratorKind::Path(5).generate().unwrap();
        let (g, di, dj) = p5.active_edge_rewire(VertexId(2), VertexId(3)).unwrap();
        assert_eq!(di, vset(&[1]));
        assert_eq!(dj, vset(&[4]));
        assert_eq!(edges_of(&g), vec![(1, 4), (4, 5)]);

        let k2 = GeneratorKind::Complete(2).generate().unwrap();
        let (g, di, dj) = k2.active_edge_rewire(VertexId(1), VertexId(2)).unwrap();
        assert!(g.is_empty() && di.is_empty() && dj.is_empty());

        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        let (g, di, dj) = c5.active_edge_rewire(VertexId(1), VertexId(2)).unwrap();
        assert_eq!(di, vset(&[5]));
        assert_eq!(dj, vset(&[3]));
        assert_eq!(edges_of(&g), vec![(3, 4), (3, 5), (4, 5)]);

        assert!(matches!(c5.active_edge_rewire(VertexId(1), VertexId(3)), Err(GraphError::NotAnEdge(_))));
    }

    #[test]
    fn odd_cycle_canonical_form() {
        let c = OddCycle::from_sequence(vec![VertexId(4), VertexId(5), VertexId(1), VertexId(2), VertexId(3)]);
        assert_eq!(c.vertices(), &[VertexId(1), VertexId(2), VertexId(3), VertexId(4), VertexId(5)]);
        let r = OddCycle::from_sequence(vec![VertexId(1), VertexId(5), VertexId(4), VertexId(3), VertexId(2)]);
        assert_eq!(c, r);
        assert_eq!(c.half_length(), 2);
        assert_eq!(c.rhs(), 3);
        let c5 = GeneratorKind::Cycle(5).generate().unwrap();
        assert!(c.is_cycle_of(&c5));
        assert!(!c.has_chord(&c5));
        assert_eq!(c.incidence(&c5).iter().filter(|&&b| b == 1).count(), 5);
    }

    #[test]
    fn chord_detection() {
        let mut g = GeneratorKind::Cycle(5).generate().unwrap();
        g.add_edge(VertexId(1), VertexId(3)).unwrap();
        let c = OddCycle::from_sequence((1..=5).map(VertexId).collect());
        assert!(c.has_chord(&g));
    }

    #[test]
    fn uncovered_edges_listed() {
        let k3 = GeneratorKind::Complete(3).generate().unwrap();
        assert!(k3.uncovered_edges(&vset(&[1, 2])).is_empty());
        assert_eq!(k3.uncovered_edges(&vset(&[1])), vec![Edge(VertexId(2), VertexId(3))]);
    }
}
