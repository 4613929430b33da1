//! Named graph families and the graph operations used throughout the lab:
//! subdivision, `K_{2,t}`-replacement, Cartesian product and `ψ_K(G)`.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{LabError, Result};
use crate::hom;
use crate::rng;

/// A named family member with its size parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedGraph {
    /// `K_k`.
    Complete(usize),
    /// `K_{s,t}`: side A is `0..s`, side B is `s..s+t`.
    CompleteBipartite(usize, usize),
    /// Path on `n` vertices `0-1-...-(n-1)`.
    Path(usize),
    /// Cycle `C_n`, `n >= 3`.
    Cycle(usize),
    /// Star `K_{1,k}` with center `0`.
    Star(usize),
    /// `n` isolated vertices.
    Empty(usize),
    /// Binomial random graph; edge `{u,v}`, `u < v`, is present iff the
    /// counter draw at index `u*n + v` is below `p`.
    Gnp { n: usize, p: BigRational, seed: u64 },
}

pub fn build_named_graph(spec: &NamedGraph) -> Result<Graph> {
    let positive = |x: usize, what: &str| {
        if x >= 1 {
            Ok(())
        } else {
            Err(LabError::InvalidParameter(format!("{what} must be at least 1")))
        }
    };
    match *spec {
        NamedGraph::Complete(k) => {
            positive(k, "complete graph order")?;
            Graph::new(k, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))))
        }
        NamedGraph::CompleteBipartite(s, t) => {
            positive(s, "bipartite side")?;
            positive(t, "bipartite side")?;
            Graph::new(s + t, (0..s).flat_map(|u| (s..s + t).map(move |v| (u, v))))
        }
        NamedGraph::Path(n) => {
            positive(n, "path order")?;
            Graph::new(n, (1..n).map(|v| (v - 1, v)))
        }
        NamedGraph::Cycle(n) => {
            if n < 3 {
                return Err(LabError::InvalidParameter(format!(
                    "cycle length must be at least 3, got {n}"
                )));
            }
            Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
        }
        NamedGraph::Star(k) => {
            positive(k, "star leaf count")?;
            Graph::new(k + 1, (1..=k).map(|v| (0, v)))
        }
        NamedGraph::Empty(n) => {
            positive(n, "vertex count")?;
            Ok(Graph::empty(n))
        }
        NamedGraph::Gnp { n, ref p, seed } => {
            positive(n, "vertex count")?;
            if *p < BigRational::zero() || *p > BigRational::one() {
                return Err(LabError::InvalidParameter(
                    "edge probability must lie in [0,1]".into(),
                ));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng::draw_below(rng::counter_draw(seed, (u * n + v) as u64), p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, edges)
        }
    }
}

/// Replaces every edge by a path of length two through a fresh vertex.
/// Original vertices keep their labels; the new vertex of the `i`-th edge
/// (in sorted edge order) is `n + i`.
pub fn subdivision(h: &Graph) -> Graph {
    k2t_replacement(h, 1).expect("t = 1 is valid")
}

/// Replaces every edge `{u,v}` by a copy of `K_{2,t}` whose two-vertex side is
/// `{u,v}`. The `t` fresh vertices of the `i`-th edge are
/// `n + i*t .. n + (i+1)*t`.
pub fn k2t_replacement(h: &Graph, t: usize) -> Result<Graph> {
    if t < 1 {
        return Err(LabError::InvalidParameter(format!(
            "replacement width must be at least 1, got {t}"
        )));
    }
    let n = h.n();
    let mut edges = Vec::with_capacity(2 * t * h.num_edges());
    for (i, &(u, v)) in h.edges().iter().enumerate() {
        for j in 0..t {
            let w = n + i * t + j;
            edges.push((u, w));
            edges.push((v, w));
        }
    }
    Graph::new(n + t * h.num_edges(), edges)
}

/// Cartesian product; `(x1, x2)` is vertex `x1 * |V(h2)| + x2`.
pub fn cartesian_product(h1: &Graph, h2: &Graph) -> Graph {
    let m = h2.n();
    let mut edges = Vec::with_capacity(m * h1.num_edges() + h1.n() * h2.num_edges());
    for &(a, b) in h1.edges() {
        for x2 in 0..m {
            edges.push((a * m + x2, b * m + x2));
        }
    }
    for x1 in 0..h1.n() {
        for &(a, b) in h2.edges() {
            edges.push((x1 * m + a, x1 * m + b));
        }
    }
    Graph::new(h1.n() * m, edges).expect("product of simple graphs is simple")
}

/// `ψ_K(G)`: vertices are `Hom(K, G)` in lexicographic order of image
/// arrays; `h1 ~ h2` iff `h1(v) ~ h2(v)` in `G` for every `v ∈ V(K)`.
///
/// Returns the graph together with its vertex list.
pub fn psi_graph(k: &Graph, g: &Graph, max_vertices: usize) -> Result<(Graph, Vec<Vec<usize>>)> {
    let homs = hom::enumerate_homomorphisms(k, g, max_vertices)?;
    let rows = g.bit_rows();
    let adjacent = |a: &[usize], b: &[usize]| {
        a.iter()
            .zip(b)
            .all(|(&x, &y)| rows[x][y / 64] >> (y % 64) & 1 == 1)
    };
    let edges: Vec<(usize, usize)> = {
        use rayon::prelude::*;
        (0..homs.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let homs = &homs;
                (i + 1..homs.len())
                    .filter(move |&j| adjacent(&homs[i], &homs[j]))
                    .map(move |j| (i, j))
            })
            .collect()
    };
    let psi = Graph::new(homs.len(), edges).expect("psi graph is simple");
    Ok((psi, homs))
}

/// Bipartiteness test; on success returns a 2-coloring (`0`/`1` per vertex),
/// each component colored by BFS from its smallest vertex with color `0`.
pub fn is_bipartite(h: &Graph) -> Option<Vec<u8>> {
    let mut color = vec![u8::MAX; h.n()];
    for start in 0..h.n() {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in h.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::are_isomorphic;
    use crate::rational::ratio;

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn cycle_four_edges() {
        let c4 = named(NamedGraph::Cycle(4));
        assert_eq!(c4.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn complete_and_bipartite() {
        assert_eq!(named(NamedGraph::Complete(3)).num_edges(), 3);
        let k22 = named(NamedGraph::CompleteBipartite(2, 2));
        assert_eq!((k22.n(), k22.num_edges()), (4, 4));
        assert!((0..4).all(|v| k22.degree(v) == 2));
        assert!(is_bipartite(&k22).is_some());
        assert!(are_isomorphic(&k22, &named(NamedGraph::Cycle(4))));
    }

    #[test]
    fn invalid_sizes_are_rejected() {
        assert!(build_named_graph(&NamedGraph::Cycle(2)).is_err());
        assert!(build_named_graph(&NamedGraph::Complete(0)).is_err());
        assert!(build_named_graph(&NamedGraph::CompleteBipartite(0, 3)).is_err());
        assert!(build_named_graph(&NamedGraph::Gnp {
            n: 3,
            p: ratio(3, 2),
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn gnp_is_reproducible() {
        let spec = NamedGraph::Gnp {
            n: 12,
            p: ratio(1, 2),
            seed: 42,
        };
        assert_eq!(named(spec.clone()), named(spec));
        let full = named(NamedGraph::Gnp {
            n: 5,
            p: ratio(1, 1),
            seed: 1,
        });
        assert_eq!(full.num_edges(), 10);
        let none = named(NamedGraph::Gnp {
            n: 5,
            p: ratio(0, 1),
            seed: 1,
        });
        assert_eq!(none.num_edges(), 0);
    }

    #[test]
    fn subdivision_examples() {
        let s = subdivision(&named(NamedGraph::Complete(3)));
        assert_eq!((s.n(), s.num_edges()), (6, 6));
        assert!(are_isomorphic(&s, &named(NamedGraph::Cycle(6))));
        let p3 = subdivision(&named(NamedGraph::Complete(2)));
        assert_eq!(p3.edges(), &[(0, 2), (1, 2)]);
        let s4 = subdivision(&named(NamedGraph::Complete(4)));
        assert_eq!((s4.n(), s4.num_edges()), (10, 12));
    }

    #[test]
    fn replacement_examples() {
        let k3 = named(NamedGraph::Complete(3));
        assert_eq!(k2t_replacement(&k3, 1).unwrap(), subdivision(&k3));
        let r = k2t_replacement(&named(NamedGraph::Complete(2)), 2).unwrap();
        assert!(are_isomorphic(&r, &named(NamedGraph::Cycle(4))));
        let r = k2t_replacement(&k3, 2).unwrap();
        assert_eq!((r.n(), r.num_edges()), (9, 12));
        assert!(k2t_replacement(&k3, 0).is_err());
    }

    #[test]
    fn product_examples() {
        let k2 = named(NamedGraph::Complete(2));
        let sq = cartesian_product(&k2, &k2);
        assert!(are_isomorphic(&sq, &named(NamedGraph::Cycle(4))));
        let c5 = named(NamedGraph::Cycle(5));
        assert_eq!(cartesian_product(&c5, &Graph::empty(1)), c5);
        let p3 = named(NamedGraph::Path(3));
        let grid = cartesian_product(&p3, &p3);
        assert_eq!((grid.n(), grid.num_edges()), (9, 12));
        // row-major labeling
        assert!(grid.has_edge(0, 1) && grid.has_edge(0, 3) && !grid.has_edge(2, 3));
    }

    #[test]
    fn psi_examples() {
        let k2 = named(NamedGraph::Complete(2));
        let k3 = named(NamedGraph::Complete(3));
        let (psi, verts) = psi_graph(&k2, &k3, 1000).unwrap();
        assert_eq!(psi.n(), 6);
        assert_eq!(psi.num_edges(), 9);
        assert!((0..6).all(|v| psi.degree(v) == 3));
        assert_eq!(verts[0], vec![0, 1]);
        assert_eq!(verts[5], vec![2, 1]);

        let (psi, _) = psi_graph(&k2, &k2, 1000).unwrap();
        assert_eq!((psi.n(), psi.num_edges()), (2, 1));

        let (psi, verts) = psi_graph(&k3, &k2, 1000).unwrap();
        assert_eq!(psi.n(), 0);
        assert!(verts.is_empty());
    }

    #[test]
    fn bipartite_examples() {
        let coloring = is_bipartite(&named(NamedGraph::Cycle(4))).unwrap();
        assert_eq!(coloring, vec![0, 1, 0, 1]);
        assert!(is_bipartite(&named(NamedGraph::Complete(3))).is_none());
        assert!(is_bipartite(&named(NamedGraph::Cycle(6))).is_some());
    }
}
