//! Budgeted search for strong tree decompositions.
//!
//! Bags of a strong decomposition induce edge-disjoint trees covering every
//! edge, so the search first partitions `E(H)` into vertex sets inducing
//! trees (largest parts first), adds a singleton bag for each isolated
//! vertex, and then looks for a bag tree. A tree satisfying the
//! path-connectivity axiom exists iff a maximum-weight spanning tree of the
//! intersection-weighted complete graph does, and every such tree is a
//! maximum-weight spanning tree, so only those are enumerated.
//!
//! Singleton bags for non-isolated vertices are never needed: such a bag
//! can be dropped and its tree neighbours joined directly without breaking
//! any condition.

use std::collections::HashSet;

use serde::Serialize;

use super::{intersect, validate_strong, TreeDecomposition};
use crate::error::{LabError, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_vertices: usize,
    /// Search nodes (edge-partition steps plus candidate bag trees).
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vertices: 10,
            max_nodes: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongSearch {
    pub decomposition: Option<TreeDecomposition>,
    /// True when the whole search space was explored, so `None` proves
    /// that no strong decomposition exists.
    pub exhaustive: bool,
    pub nodes: u64,
}

struct Searcher<'a> {
    h: &'a Graph,
    nodes: u64,
    max_nodes: u64,
    exhausted_budget: bool,
}

impl Searcher<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted_budget = true;
        }
        !self.exhausted_budget
    }
}

fn check_size(h: &Graph, budget: &SearchBudget) -> Result<()> {
    if h.n() > budget.max_vertices.min(64) {
        return Err(LabError::BudgetExceeded(format!(
            "{} vertices exceeds the search cap of {}",
            h.n(),
            budget.max_vertices.min(64)
        )));
    }
    Ok(())
}

pub fn find_strong_decomposition(h: &Graph, budget: &SearchBudget) -> Result<StrongSearch> {
    check_size(h, budget)?;
    if h.n() == 0 {
        return Err(LabError::InvalidParameter("the pattern has no vertices".into()));
    }
    let mut s = Searcher {
        h,
        nodes: 0,
        max_nodes: budget.max_nodes,
        exhausted_budget: false,
    };
    let mut assigned = vec![false; h.num_edges()];
    let mut parts = Vec::new();
    let found = partition(&mut s, &mut assigned, &mut parts);
    Ok(StrongSearch {
        exhaustive: found.is_some() || !s.exhausted_budget,
        decomposition: found,
        nodes: s.nodes,
    })
}

fn edge_index(h: &Graph, u: usize, v: usize) -> usize {
    let key = (u.min(v), u.max(v));
    h.edges().binary_search(&key).expect("edge present")
}

fn partition(s: &mut Searcher, assigned: &mut [bool], parts: &mut Vec<u64>) -> Option<TreeDecomposition> {
    if !s.tick() {
        return None;
    }
    let h = s.h;
    let Some(first) = assigned.iter().position(|a| !a) else {
        let mut bags: Vec<Vec<usize>> = parts.iter().map(|&m| mask_to_vec(m)).collect();
        bags.extend((0..h.n()).filter(|&v| h.degree(v) == 0).map(|v| vec![v]));
        return arrange(s, bags);
    };
    let (u, v) = h.edges()[first];
    for mask in induced_trees_through(h, u, v, assigned) {
        let used: Vec<usize> = h
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|(i, _)| i)
            .collect();
        for &i in &used {
            assigned[i] = true;
        }
        parts.push(mask);
        let found = partition(s, assigned, parts);
        parts.pop();
        for &i in &used {
            assigned[i] = false;
        }
        if found.is_some() || s.exhausted_budget {
            return found;
        }
    }
    None
}

/// Vertex sets containing the edge `uv` whose induced subgraph is a tree
/// made of unassigned edges; largest first, then by mask.
fn induced_trees_through(h: &Graph, u: usize, v: usize, assigned: &[bool]) -> Vec<u64> {
    let start = 1u64 << u | 1u64 << v;
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(mask) = stack.pop() {
        for w in 0..h.n() {
            if mask >> w & 1 == 1 {
                continue;
            }
            let links: Vec<usize> = h.neighbors(w).iter().copied().filter(|&x| mask >> x & 1 == 1).collect();
            if links.len() != 1 || assigned[edge_index(h, w, links[0])] {
                continue;
            }
            let next = mask | 1u64 << w;
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    out
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Searches the maximum-weight spanning trees on `bags` for one that makes
/// a valid strong decomposition.
fn arrange(s: &mut Searcher, bags: Vec<Vec<usize>>) -> Option<TreeDecomposition> {
    let k = bags.len();
    if k == 1 {
        let d = TreeDecomposition {
            bags,
            tree_edges: Vec::new(),
        };
        return is_strong(s.h, &d).then_some(d);
    }
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            pairs.push((intersect(&bags[a], &bags[b]).len(), a, b));
        }
    }
    pairs.sort_by_key(|&(w, a, b)| (std::cmp::Reverse(w), a, b));

    // Kruskal for the optimum weight
    let mut uf = UnionFind::new(k);
    let mut best = 0;
    for &(w, a, b) in &pairs {
        if uf.union(a, b) {
            best += w;
        }
    }

    let mut ctx = TreeEnum {
        bags: &bags,
        pairs: &pairs,
        best,
        checked_axioms: false,
        abandoned: false,
    };
    ctx.enumerate(s, 0, 0, &mut UnionFind::new(k), &mut Vec::with_capacity(k - 1))
}

struct TreeEnum<'a> {
    bags: &'a [Vec<usize>],
    pairs: &'a [(usize, usize, usize)],
    best: usize,
    checked_axioms: bool,
    /// Set when the first maximum-weight tree fails the axioms; all others
    /// then fail too.
    abandoned: bool,
}

impl TreeEnum<'_> {
    fn enumerate(
        &mut self,
        s: &mut Searcher,
        start: usize,
        weight: usize,
        uf: &mut UnionFind,
        chosen: &mut Vec<(usize, usize)>,
    ) -> Option<TreeDecomposition> {
        let k = self.bags.len();
        if chosen.len() == k - 1 {
            if !s.tick() {
                return None;
            }
            let d = TreeDecomposition {
                bags: self.bags.to_vec(),
                tree_edges: chosen.clone(),
            };
            if !self.checked_axioms {
                self.checked_axioms = true;
                let base = super::validate_decomposition(s.h, &d).expect("well formed");
                if !base.is_decomposition() {
                    self.abandoned = true;
                    return None;
                }
            }
            return is_strong(s.h, &d).then_some(d);
        }
        let need = k - 1 - chosen.len();
        for i in start..self.pairs.len() {
            if self.abandoned || s.exhausted_budget {
                return None;
            }
            // pairs are sorted by weight, so the next `need` are the best case
            let bound: usize = self.pairs[i..].iter().take(need).map(|p| p.0).sum();
            if weight + bound < self.best {
                return None;
            }
            let (w, a, b) = self.pairs[i];
            if uf.find(a) == uf.find(b) {
                continue;
            }
            let mut next = uf.clone();
            next.union(a, b);
            chosen.push((a, b));
            let found = self.enumerate(s, i + 1, weight + w, &mut next, chosen);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn is_strong(h: &Graph, d: &TreeDecomposition) -> bool {
    validate_strong(h, d).is_ok_and(|diag| diag.is_valid())
}

#[derive(Clone)]
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// The bag tree is a star (one or two bags count).
    pub reflection_tree: bool,
    /// An independent set `A` whose closed neighbourhoods are the bags of
    /// some strong decomposition.
    pub tree_arrangeable_witness: Option<Vec<usize>>,
}

/// Requires `d` to be a valid strong decomposition of `h`. The
/// tree-arrangeable search ignores `d`.
pub fn classify_family(h: &Graph, d: &TreeDecomposition, budget: &SearchBudget) -> Result<Classification> {
    let diag = validate_strong(h, d)?;
    if !diag.is_valid() {
        return Err(LabError::InvalidDecomposition(format!(
            "not a strong decomposition: {:?}",
            diag.first_witness()
        )));
    }
    let t = d.bag_tree();
    let k = t.n();
    let reflection_tree = k <= 2 || (0..k).any(|c| t.degree(c) == k - 1);
    Ok(Classification {
        reflection_tree,
        tree_arrangeable_witness: tree_arrangeable_witness(h, budget)?,
    })
}

/// Smallest (then lexicographically first) independent set `A` such that
/// `{N[a] : a ∈ A}` admits a bag tree making it a strong decomposition.
pub fn tree_arrangeable_witness(h: &Graph, budget: &SearchBudget) -> Result<Option<Vec<usize>>> {
    check_size(h, budget)?;
    let n = h.n();
    if n == 0 || n > 24 {
        return Err(LabError::BudgetExceeded(format!(
            "independent-set search over {n} vertices"
        )));
    }
    let mut sets: Vec<Vec<usize>> = (1u32..1 << n)
        .filter(|&m| h.edges().iter().all(|&(u, v)| m >> u & 1 == 0 || m >> v & 1 == 0))
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut s = Searcher {
        h,
        nodes: 0,
        max_nodes: budget.max_nodes,
        exhausted_budget: false,
    };
    for a in sets {
        let bags: Vec<Vec<usize>> = a
            .iter()
            .map(|&x| {
                let mut b = h.neighbors(x).to_vec();
                b.push(x);
                b.sort_unstable();
                b
            })
            .collect();
        let mut covered = vec![false; n];
        for b in &bags {
            for &v in b {
                covered[v] = true;
            }
        }
        if covered.contains(&false) {
            continue;
        }
        if arrange(&mut s, bags).is_some() {
            return Ok(Some(a));
        }
        if s.exhausted_budget {
            return Err(LabError::BudgetExceeded("tree-arrangeable search".into()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::{connected_graphs_up_to, trees_up_to};
    use crate::graph::construct::{build_named_graph, is_bipartite, NamedGraph};

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    fn search(h: &Graph) -> StrongSearch {
        find_strong_decomposition(h, &SearchBudget::default()).unwrap()
    }

    #[test]
    fn trees_get_one_bag() {
        for t in trees_up_to(7).iter().filter(|t| t.n() >= 2) {
            let r = search(t);
            assert_eq!(r.decomposition.unwrap().num_bags(), 1);
        }
    }

    #[test]
    fn cycles() {
        let c4 = named(NamedGraph::Cycle(4));
        let d = search(&c4).decomposition.unwrap();
        assert_eq!(d.num_bags(), 2);
        assert!(validate_strong(&c4, &d).unwrap().is_valid());

        let c6 = named(NamedGraph::Cycle(6));
        let d = search(&c6).decomposition.unwrap();
        assert!(validate_strong(&c6, &d).unwrap().is_valid());

        let r = search(&named(NamedGraph::Complete(3)));
        assert!(r.decomposition.is_none() && r.exhaustive);
    }

    #[test]
    fn found_decompositions_are_strong_and_bipartite() {
        for h in connected_graphs_up_to(5) {
            let r = search(&h);
            assert!(r.exhaustive);
            if let Some(d) = r.decomposition {
                assert!(validate_strong(&h, &d).unwrap().is_valid());
                assert!(is_bipartite(&h).is_some());
            }
        }
    }

    #[test]
    fn disconnected_and_isolated() {
        let h = Graph::new(5, [(0, 1), (2, 3)]).unwrap();
        let d = search(&h).decomposition.unwrap();
        assert!(validate_strong(&h, &d).unwrap().is_valid());
        assert!(d.bags.contains(&vec![4]));
        let d = search(&Graph::empty(1)).decomposition.unwrap();
        assert_eq!(d.bags, vec![vec![0]]);
    }

    #[test]
    fn budgets() {
        let big = named(NamedGraph::Cycle(12));
        assert!(matches!(
            find_strong_decomposition(&big, &SearchBudget::default()),
            Err(LabError::BudgetExceeded(_))
        ));
        let tiny = SearchBudget {
            max_vertices: 10,
            max_nodes: 2,
        };
        let r = find_strong_decomposition(&named(NamedGraph::Cycle(6)), &tiny).unwrap();
        assert!(r.decomposition.is_none() && !r.exhaustive);
    }

    #[test]
    fn classification() {
        let budget = SearchBudget::default();
        let p = named(NamedGraph::Path(4));
        let c = classify_family(&p, &TreeDecomposition::single_bag(&p), &budget).unwrap();
        assert!(c.reflection_tree);

        let c4 = named(NamedGraph::Cycle(4));
        let d = TreeDecomposition::new(vec![vec![0, 1, 2], vec![2, 3, 0]], vec![(0, 1)]).unwrap();
        let c = classify_family(&c4, &d, &budget).unwrap();
        assert!(c.reflection_tree);
        assert_eq!(c.tree_arrangeable_witness, Some(vec![0, 2]));

        let k23 = named(NamedGraph::CompleteBipartite(2, 3));
        assert_eq!(tree_arrangeable_witness(&k23, &budget).unwrap(), Some(vec![0, 1]));

        // the closed neighbourhoods of {0,2,4} pairwise meet in one vertex
        // that the third bag misses, so no bag tree works
        let c6 = named(NamedGraph::Cycle(6));
        assert_eq!(tree_arrangeable_witness(&c6, &budget).unwrap(), None);

        assert!(classify_family(&c4, &TreeDecomposition::single_bag(&c4), &budget).is_err());
    }
}
