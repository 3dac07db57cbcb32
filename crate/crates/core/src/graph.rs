//! Simple undirected graphs stored as symmetric bitset adjacency.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..order`.
///
/// Values are immutable once built; every constructor checks symmetry and the
/// absence of loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<BitSet>,
}

impl Graph {
    /// Graph of the given order with no edges.
    pub fn empty(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGraph("order must be at least 1".into()));
        }
        Ok(Graph {
            rows: vec![BitSet::new(order); order],
        })
    }

    pub fn complete(order: usize) -> Result<Self> {
        Graph::from_fn(order, |u, v| u != v)
    }

    /// Builds a graph from an edge list. Loops, duplicates and out-of-range
    /// endpoints are rejected.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(order)?;
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for order {order}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if g.rows[u].contains(v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            g.rows[u].insert(v);
            g.rows[v].insert(u);
        }
        Ok(g)
    }

    /// Builds a graph from an adjacency predicate evaluated on every pair `u < v`.
    pub fn from_fn(order: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut g = Graph::empty(order)?;
        for u in 0..order {
            for v in u + 1..order {
                if adjacent(u, v) {
                    g.rows[u].insert(v);
                    g.rows[v].insert(u);
                }
            }
        }
        Ok(g)
    }

    /// Wraps adjacency rows, checking symmetry and loop-freeness.
    pub fn from_rows(rows: Vec<BitSet>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGraph("order must be at least 1".into()));
        }
        for (u, row) in rows.iter().enumerate() {
            if row.capacity() != order {
                return Err(Error::InvalidGraph(format!("row {u} has wrong width")));
            }
            if row.contains(u) {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if let Some(v) = row.iter().find(|&v| !rows[v].contains(u)) {
                return Err(Error::InvalidGraph(format!("asymmetric pair ({u},{v})")));
            }
        }
        Ok(Graph { rows })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.rows[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.order() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// Open neighbourhood N(v).
    pub fn neighbors(&self, v: usize) -> Result<&BitSet> {
        self.check_vertex(v)?;
        Ok(&self.rows[v])
    }

    /// Closed neighbourhood N[v] = N(v) ∪ {v}.
    pub fn closed_neighbors(&self, v: usize) -> Result<BitSet> {
        self.check_vertex(v)?;
        let mut s = self.rows[v].clone();
        s.insert(v);
        Ok(s)
    }

    pub(crate) fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        Ok(self.neighbors(v)?.count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.rows.iter().map(BitSet::count).collect()
    }

    /// The common valency if the graph is regular.
    pub fn regularity(&self) -> Option<usize> {
        let k = self.rows[0].count();
        self.rows.iter().all(|r| r.count() == k).then_some(k)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let n = self.order();
        let mut seen = BitSet::new(n);
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            components += 1;
            seen.insert(start);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for v in self.rows[u].iter() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let rows = (0..n)
            .map(|u| {
                let mut r = BitSet::full(n);
                r.difference_with(&self.rows[u]);
                r.remove(u);
                r
            })
            .collect();
        Graph { rows }
    }

    /// Image of the graph under a vertex bijection: edge `uv` becomes `f(u)f(v)`.
    pub fn apply_vertex_map(&self, f: &VertexMap) -> Result<Graph> {
        if f.order() != self.order() {
            return Err(Error::OrderMismatch {
                expected: self.order(),
                found: f.order(),
            });
        }
        let mut g = Graph::empty(self.order())?;
        for (u, v) in self.edges() {
            let (a, b) = (f.apply(u), f.apply(v));
            g.rows[a].insert(b);
            g.rows[b].insert(a);
        }
        Ok(g)
    }

    /// True iff `f` maps this graph onto `h` edge for edge.
    pub fn is_isomorphism_witness(&self, h: &Graph, f: &VertexMap) -> Result<bool> {
        if h.order() != self.order() {
            return Err(Error::OrderMismatch {
                expected: self.order(),
                found: h.order(),
            });
        }
        Ok(&self.apply_vertex_map(f)? == h)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            order: self.order(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        Graph::from_edges(json.order, json.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Serialized graph: `{"order": m, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub order: usize,
    pub edges: Vec<[usize; 2]>,
}

/// A permutation of `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    image: Vec<usize>,
}

impl VertexMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let order = image.len();
        let mut seen = vec![false; order];
        for &i in &image {
            if i >= order || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotPermutation { order });
            }
        }
        Ok(VertexMap { image })
    }

    pub fn identity(order: usize) -> Self {
        VertexMap {
            image: (0..order).collect(),
        }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        VertexMap::new((0..order).map(f).collect())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> VertexMap {
        let mut inv = vec![0; self.order()];
        for (v, &fv) in self.image.iter().enumerate() {
            inv[fv] = v;
        }
        VertexMap { image: inv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{circulant, hypercube};

    fn set(s: &BitSet) -> Vec<usize> {
        s.iter().collect()
    }

    #[test]
    fn neighbourhoods() {
        let c = circulant(8, &[1, 4]).unwrap();
        assert_eq!(set(c.neighbors(0).unwrap()), vec![1, 4, 7]);
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(set(k4.neighbors(2).unwrap()), vec![0, 1, 3]);
        let e = Graph::empty(4).unwrap();
        assert_eq!(set(&e.closed_neighbors(0).unwrap()), vec![0]);
        assert!(matches!(
            e.neighbors(4),
            Err(Error::VertexOutOfRange {
                vertex: 4,
                order: 4
            })
        ));
    }

    #[test]
    fn regularity_cases() {
        assert_eq!(circulant(8, &[1, 4]).unwrap().regularity(), Some(3));
        let k44 = Graph::from_fn(8, |u, v| (u < 4) != (v < 4)).unwrap();
        assert_eq!(k44.regularity(), Some(4));
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.regularity(), None);
    }

    #[test]
    fn connectivity_cases() {
        assert!(!circulant(16, &[2, 4]).unwrap().is_connected());
        assert!(circulant(16, &[1]).unwrap().is_connected());
        assert!(!Graph::from_edges(4, [(0, 1), (2, 3)])
            .unwrap()
            .is_connected());
        assert!(Graph::empty(1).unwrap().is_connected());
    }

    #[test]
    fn complement_cases() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.complement(), Graph::empty(4).unwrap());
        assert_eq!(
            circulant(8, &[1, 4]).unwrap().complement(),
            circulant(8, &[2, 3]).unwrap()
        );
        let q3 = hypercube(3).unwrap();
        assert_eq!(q3.complement().complement(), q3);
    }

    #[test]
    fn vertex_maps() {
        let c = circulant(8, &[1, 4]).unwrap();
        assert_eq!(c.apply_vertex_map(&VertexMap::identity(8)).unwrap(), c);
        let rot = VertexMap::from_fn(8, |i| (i + 1) % 8).unwrap();
        assert!(c.is_isomorphism_witness(&c, &rot).unwrap());

        let f = VertexMap::from_fn(16, |i| if i % 2 == 0 { i } else { (i + 8) % 16 }).unwrap();
        let g = circulant(16, &[1, 6, 8]).unwrap();
        let h = circulant(16, &[6, 7, 8]).unwrap();
        assert_eq!(g.apply_vertex_map(&f).unwrap(), h);

        assert!(matches!(
            VertexMap::new(vec![0, 0, 1]),
            Err(Error::NotPermutation { order: 3 })
        ));
        assert!(VertexMap::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::empty(0).is_err());
    }

    #[test]
    fn json_roundtrip_is_sorted() {
        let g = Graph::from_edges(4, [(2, 3), (1, 0), (0, 2)]).unwrap();
        let json = g.to_json();
        assert_eq!(json.edges, vec![[0, 1], [0, 2], [2, 3]]);
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(text, r#"{"order":4,"edges":[[0,1],[0,2],[2,3]]}"#);
        assert_eq!(Graph::from_json(&json).unwrap(), g);
    }
}
