//! Finite simple undirected graphs, homomorphisms and weighted graphs.
//!
//! Vertices are dense indices `0..n`. Every constructor in this module and in
//! [`construct`] defines a deterministic labeling so exact outputs can be
//! asserted vertex by vertex.

pub mod catalog;
pub mod construct;
pub mod family;
pub mod io;

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(min, max)`.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = LabError;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges,
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(LabError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(LabError::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(LabError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: canon,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// A tree: connected with `|E| = |V| - 1`. The graph on zero vertices is
    /// not a tree.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() + 1 == self.n && self.is_connected()
    }

    pub fn require_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(LabError::NotATree(format!(
                "{} vertices, {} edges, {} component(s)",
                self.n,
                self.edges.len(),
                self.components().len()
            )))
        }
    }

    /// Induced subgraph on `vertices`, relabeled so that the `i`-th smallest
    /// chosen vertex becomes `i`. Returns the subgraph and the sorted vertex
    /// list (the map back to `self`).
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let g = Graph::new(verts.len(), edges).expect("induced subgraph is simple");
        (g, verts)
    }

    /// Number of edges of `self` with both endpoints in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(u, v)| inside[u] && inside[v])
            .count()
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(self.n + other.n, edges).expect("disjoint union is simple")
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }

    /// Codegree (number of common neighbors); `codegree(v, v) = deg(v)`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Full codegree matrix, diagonal included.
    pub fn codegree_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.codegree(u, v)).collect())
            .collect()
    }

    /// Adjacency rows as 64-bit bitsets.
    pub fn bit_rows(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        self.adjacency
            .iter()
            .map(|list| {
                let mut row = vec![0u64; words];
                for &w in list {
                    row[w / 64] |= 1 << (w % 64);
                }
                row
            })
            .collect()
    }
}

/// An element of `Hom(H, G)`: `image[v]` is the image of pattern vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Homomorphism(pub Vec<usize>);

impl Homomorphism {
    /// Checks that `image` maps every edge of `pattern` onto an edge of
    /// `target`.
    pub fn new(pattern: &Graph, target: &Graph, image: Vec<usize>) -> Result<Self> {
        check_homomorphism(pattern, target, &image)?;
        Ok(Homomorphism(image))
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// Restriction to `vertices`, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Vec<usize> {
        vertices.iter().map(|&v| self.0[v]).collect()
    }
}

pub fn check_homomorphism(pattern: &Graph, target: &Graph, image: &[usize]) -> Result<()> {
    if image.len() != pattern.n() {
        return Err(LabError::InvalidParameter(format!(
            "map has length {} but the pattern has {} vertices",
            image.len(),
            pattern.n()
        )));
    }
    if let Some(&bad) = image.iter().find(|&&x| x >= target.n()) {
        return Err(LabError::VertexOutOfRange {
            vertex: bad,
            n: target.n(),
        });
    }
    for &(u, v) in pattern.edges() {
        if !target.has_edge(image[u], image[v]) {
            return Err(LabError::NotAHomomorphism(u, v));
        }
    }
    Ok(())
}

/// A symmetric matrix of rational weights in `[0, 1]`, diagonal allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    weight: Vec<BigRational>,
}

impl WeightedGraph {
    pub fn new(n: usize, weight: Vec<Vec<BigRational>>) -> Result<Self> {
        if weight.len() != n || weight.iter().any(|row| row.len() != n) {
            return Err(LabError::InvalidParameter(format!(
                "weight matrix must be {n}x{n}"
            )));
        }
        let (zero, one) = (BigRational::zero(), BigRational::one());
        for (u, row) in weight.iter().enumerate() {
            for (v, w) in row.iter().enumerate() {
                if *w < zero || *w > one {
                    return Err(LabError::InvalidParameter(format!(
                        "weight({u},{v}) = {} is outside [0,1]",
                        crate::rational::format(w)
                    )));
                }
                if *w != weight[v][u] {
                    return Err(LabError::InvalidParameter(format!(
                        "weight matrix is not symmetric at ({u},{v})"
                    )));
                }
            }
        }
        Ok(WeightedGraph {
            n,
            weight: weight.into_iter().flatten().collect(),
        })
    }

    /// Constant weight `w` on every ordered pair, diagonal included.
    pub fn constant(n: usize, w: BigRational) -> Result<Self> {
        WeightedGraph::new(n, vec![vec![w; n]; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, u: usize, v: usize) -> &BigRational {
        &self.weight[u * self.n + v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(LabError::SelfLoop(0)));
        assert_eq!(
            Graph::new(2, [(0, 1), (1, 0)]),
            Err(LabError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(LabError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn adjacency_matches_edges() {
        let g = Graph::new(4, [(2, 0), (0, 1), (3, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 1);
        assert!(g.is_tree());
    }

    #[test]
    fn induced_relabels_in_sorted_order() {
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (sub, map) = c4.induced(&[3, 0, 1]);
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(sub.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn codegree_diagonal_is_degree() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.codegree(0, 0), 2);
        assert_eq!(k3.codegree(0, 1), 1);
    }

    #[test]
    fn weighted_graph_validates() {
        use crate::rational::ratio;
        assert!(WeightedGraph::constant(2, ratio(3, 2)).is_err());
        let asym = vec![vec![ratio(0, 1), ratio(1, 2)], vec![ratio(1, 3), ratio(0, 1)]];
        assert!(WeightedGraph::new(2, asym).is_err());
    }
}
