//! Tree decompositions and strong tree decompositions.
//!
//! A decomposition is a list of bags (vertex subsets of `H`) together with a
//! tree on the bag indices. Bags are kept as sorted, duplicate-free lists.

mod search;

pub use search::{
    classify_family, find_strong_decomposition, tree_arrangeable_witness, Classification,
    SearchBudget, StrongSearch,
};

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::graph::catalog::find_isomorphism;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Normalizes bags (sorted, deduplicated) and checks that `tree_edges`
    /// form a tree on the bag indices.
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Result<Self> {
        let bags: Vec<Vec<usize>> = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let d = TreeDecomposition { bags, tree_edges };
        d.check_structure()?;
        Ok(d)
    }

    /// The one-bag decomposition `{V(H)}`.
    pub fn single_bag(h: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![(0..h.n()).collect()],
            tree_edges: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TreeDecomposition = serde_json::from_str(text)
            .map_err(|e| LabError::MalformedDecomposition(format!("bad JSON: {e}")))?;
        TreeDecomposition::new(raw.bags, raw.tree_edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    pub fn num_bags(&self) -> usize {
        self.bags.len()
    }

    /// The tree `T` on bag indices.
    pub fn bag_tree(&self) -> Graph {
        Graph::new(self.bags.len(), self.tree_edges.iter().copied())
            .expect("structure checked on construction")
    }

    pub fn intersection(&self, a: usize, b: usize) -> Vec<usize> {
        intersect(&self.bags[a], &self.bags[b])
    }

    fn check_structure(&self) -> Result<()> {
        if self.bags.is_empty() {
            return Err(LabError::MalformedDecomposition("no bags".into()));
        }
        if let Some(i) = self.bags.iter().position(Vec::is_empty) {
            return Err(LabError::MalformedDecomposition(format!("bag {i} is empty")));
        }
        let t = Graph::new(self.bags.len(), self.tree_edges.iter().copied())
            .map_err(|e| LabError::MalformedDecomposition(format!("bad tree edge: {e}")))?;
        if !t.is_tree() {
            return Err(LabError::MalformedDecomposition(format!(
                "{} tree edges do not form a tree on {} bags",
                self.tree_edges.len(),
                self.bags.len()
            )));
        }
        Ok(())
    }

    fn check_against(&self, h: &Graph) -> Result<()> {
        self.check_structure()?;
        for bag in &self.bags {
            if let Some(&v) = bag.iter().find(|&&v| v >= h.n()) {
                return Err(LabError::MalformedDecomposition(format!(
                    "bag vertex {v} out of range for a graph on {} vertices",
                    h.n()
                )));
            }
        }
        Ok(())
    }

    /// Bag indices on the path from `a` to `b` in the bag tree, inclusive.
    pub fn bag_path(&self, a: usize, b: usize) -> Vec<usize> {
        let t = self.bag_tree();
        let parent = bfs_parents(&t, b);
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = parent[cur];
            path.push(cur);
        }
        path
    }
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect()
}

fn bfs_parents(t: &Graph, root: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; t.n()];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Counterexample attached to a failed axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    UncoveredVertex { vertex: usize },
    UncoveredEdge { edge: (usize, usize) },
    /// `vertex ∈ X ∩ Y` but not in `Z`, which lies on the path from `X` to `Y`.
    PathViolation { x: usize, y: usize, z: usize, vertex: usize },
    BagNotTree { bag: usize },
    EdgeInSeveralBags { edge: (usize, usize), bags: Vec<usize> },
    NoFixingIsomorphism { bags: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn from_witness(witness: Option<Witness>) -> Self {
        AxiomCheck {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionDiagnostics {
    pub axiom_cover_vertices: AxiomCheck,
    pub axiom_cover_edges: AxiomCheck,
    pub axiom_path_connectivity: AxiomCheck,
    /// Present only when the strong conditions were requested.
    pub strong_edge_disjoint_trees: Option<AxiomCheck>,
    pub strong_iso_condition: Option<AxiomCheck>,
    /// Tree-adjacent bag pairs with empty intersection. For these the
    /// minimal subtrees are the lowest-index vertex of each bag, so the
    /// isomorphism condition holds vacuously.
    pub empty_intersections: Vec<(usize, usize)>,
}

impl DecompositionDiagnostics {
    pub fn is_decomposition(&self) -> bool {
        self.axiom_cover_vertices.holds
            && self.axiom_cover_edges.holds
            && self.axiom_path_connectivity.holds
    }

    /// True when every requested check holds.
    pub fn is_valid(&self) -> bool {
        self.is_decomposition()
            && self.strong_edge_disjoint_trees.as_ref().is_none_or(|c| c.holds)
            && self.strong_iso_condition.as_ref().is_none_or(|c| c.holds)
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        [
            Some(&self.axiom_cover_vertices),
            Some(&self.axiom_cover_edges),
            Some(&self.axiom_path_connectivity),
            self.strong_edge_disjoint_trees.as_ref(),
            self.strong_iso_condition.as_ref(),
        ]
        .into_iter()
        .flatten()
        .find_map(|c| c.witness.as_ref())
    }
}

/// Checks the three tree-decomposition axioms.
pub fn validate_decomposition(h: &Graph, d: &TreeDecomposition) -> Result<DecompositionDiagnostics> {
    d.check_against(h)?;
    let mut covered = vec![false; h.n()];
    for bag in &d.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    let uncovered_vertex = covered
        .iter()
        .position(|c| !c)
        .map(|vertex| Witness::UncoveredVertex { vertex });
    let uncovered_edge = h
        .edges()
        .iter()
        .find(|&&(u, v)| !d.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok()))
        .map(|&edge| Witness::UncoveredEdge { edge });

    let k = d.num_bags();
    let mut path_violation = None;
    'outer: for x in 0..k {
        for y in x + 1..k {
            let common = d.intersection(x, y);
            if common.is_empty() {
                continue;
            }
            for z in d.bag_path(x, y) {
                if let Some(&vertex) = common.iter().find(|v| d.bags[z].binary_search(v).is_err()) {
                    path_violation = Some(Witness::PathViolation { x, y, z, vertex });
                    break 'outer;
                }
            }
        }
    }
    Ok(DecompositionDiagnostics {
        axiom_cover_vertices: AxiomCheck::from_witness(uncovered_vertex),
        axiom_cover_edges: AxiomCheck::from_witness(uncovered_edge),
        axiom_path_connectivity: AxiomCheck::from_witness(path_violation),
        strong_edge_disjoint_trees: None,
        strong_iso_condition: None,
        empty_intersections: Vec::new(),
    })
}

/// Checks the axioms and, when they hold, the two strong conditions.
///
/// Fails with [`LabError::InvalidDecomposition`] when `d` is not a tree
/// decomposition of `h`.
pub fn validate_strong(h: &Graph, d: &TreeDecomposition) -> Result<DecompositionDiagnostics> {
    let mut diag = validate_decomposition(h, d)?;
    if !diag.is_decomposition() {
        return Err(LabError::InvalidDecomposition(format!(
            "not a tree decomposition: {:?}",
            diag.first_witness().expect("a failing axiom has a witness")
        )));
    }
    let trees: Vec<LabeledTree> = d.bags.iter().map(|b| LabeledTree::induced(h, b)).collect();
    let mut tree_witness = trees
        .iter()
        .position(|t| !t.graph.is_tree())
        .map(|bag| Witness::BagNotTree { bag });
    if tree_witness.is_none() {
        for &(u, v) in h.edges() {
            let bags: Vec<usize> = (0..d.num_bags())
                .filter(|&i| d.bags[i].binary_search(&u).is_ok() && d.bags[i].binary_search(&v).is_ok())
                .collect();
            if bags.len() > 1 {
                tree_witness = Some(Witness::EdgeInSeveralBags { edge: (u, v), bags });
                break;
            }
        }
    }

    let mut iso_witness = None;
    for &(a, b) in &d.tree_edges {
        let common = d.intersection(a, b);
        if common.is_empty() {
            diag.empty_intersections.push((a, b));
            continue;
        }
        let (ta, tb) = (&trees[a], &trees[b]);
        if !ta.graph.is_tree() || !tb.graph.is_tree() {
            continue;
        }
        let sa = ta.minimal_subtree(&common);
        let sb = tb.minimal_subtree(&common);
        if rooted_iso_fixing(&sa, &sb, &common).is_none() && iso_witness.is_none() {
            iso_witness = Some(Witness::NoFixingIsomorphism { bags: (a, b) });
        }
    }
    diag.strong_edge_disjoint_trees = Some(AxiomCheck::from_witness(tree_witness));
    diag.strong_iso_condition = Some(AxiomCheck::from_witness(iso_witness));
    Ok(diag)
}

/// A graph whose vertex `i` carries the label `labels[i]` (a vertex of some
/// ambient graph). Labels are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    pub graph: Graph,
    pub labels: Vec<usize>,
}

impl LabeledTree {
    /// `H[vertices]` with the labels of `H`.
    pub fn induced(h: &Graph, vertices: &[usize]) -> Self {
        let (graph, labels) = h.induced(vertices);
        LabeledTree { graph, labels }
    }

    /// Builds a labeled graph from edges between labels.
    pub fn from_labeled_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let mut labels: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        let local = |x: usize| labels.binary_search(&x).expect("label present");
        let graph = Graph::new(labels.len(), edges.iter().map(|&(u, v)| (local(u), local(v))))?;
        Ok(LabeledTree { graph, labels })
    }

    pub fn local(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// The minimal subtree containing the labels `s`; see [`minimal_subtree`].
    pub fn minimal_subtree(&self, s: &[usize]) -> LabeledTree {
        let local: Vec<usize> = s.iter().filter_map(|&x| self.local(x)).collect();
        let keep = minimal_subtree(&self.graph, &local).expect("caller passes a tree");
        let (graph, map) = self.graph.induced(&keep);
        LabeledTree {
            graph,
            labels: map.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// The inclusion-minimal connected vertex set of the tree `t` containing
/// `s`, sorted. For empty `s` this is the single vertex `0`.
pub fn minimal_subtree(t: &Graph, s: &[usize]) -> Result<Vec<usize>> {
    t.require_tree()?;
    if let Some(&v) = s.iter().find(|&&v| v >= t.n()) {
        return Err(LabError::VertexOutOfRange { vertex: v, n: t.n() });
    }
    if s.is_empty() {
        return Ok(vec![0]);
    }
    let mut keep = vec![true; t.n()];
    let mut required = vec![false; t.n()];
    for &v in s {
        required[v] = true;
    }
    let mut degree: Vec<usize> = (0..t.n()).map(|v| t.degree(v)).collect();
    let mut leaves: Vec<usize> = (0..t.n()).filter(|&v| degree[v] <= 1 && !required[v]).collect();
    while let Some(v) = leaves.pop() {
        if !keep[v] {
            continue;
        }
        keep[v] = false;
        for &w in t.neighbors(v) {
            if keep[w] {
                degree[w] -= 1;
                if degree[w] == 1 && !required[w] {
                    leaves.push(w);
                }
            }
        }
    }
    Ok((0..t.n()).filter(|&v| keep[v]).collect())
}

/// An isomorphism `φ: T1 → T2` (as a label map) with `φ(x) = x` for every
/// label in `fixed`, or `None`.
pub fn rooted_iso_fixing(t1: &LabeledTree, t2: &LabeledTree, fixed: &[usize]) -> Option<BTreeMap<usize, usize>> {
    let mut pinned = Vec::with_capacity(fixed.len());
    for &x in fixed {
        pinned.push((t1.local(x)?, t2.local(x)?));
    }
    let map = find_isomorphism(&t1.graph, &t2.graph, &pinned)?;
    Some(
        map.iter()
            .enumerate()
            .map(|(i, &j)| (t1.labels[i], t2.labels[j]))
            .collect(),
    )
}

/// Bag indices in breadth-first order from `root`, visiting the children of
/// each bag in ascending index order (or descending when `reverse`), with
/// the parent of every non-root bag.
pub fn bag_order(d: &TreeDecomposition, root: usize, reverse: bool) -> Vec<(usize, Option<usize>)> {
    let t = d.bag_tree();
    let mut seen = vec![false; t.n()];
    seen[root] = true;
    let mut order = vec![(root, None)];
    let mut head = 0;
    while head < order.len() {
        let u = order[head].0;
        head += 1;
        let mut children: Vec<usize> = t.neighbors(u).iter().copied().filter(|&w| !seen[w]).collect();
        if reverse {
            children.reverse();
        }
        for w in children {
            seen[w] = true;
            order.push((w, Some(u)));
        }
    }
    order
}

/// `Σ |E(H[X])| = |E(H)|` and `Σ |X| − Σ_{XY ∈ E(T)} |X ∩ Y| = |V(H)|`.
pub fn counting_identities(h: &Graph, d: &TreeDecomposition) -> (bool, bool) {
    let edges: usize = d.bags.iter().map(|b| h.induced_edge_count(b)).sum();
    let sizes: usize = d.bags.iter().map(Vec::len).sum();
    let overlaps: usize = d.tree_edges.iter().map(|&(a, b)| d.intersection(a, b).len()).sum();
    (edges == h.num_edges(), sizes == h.n() + overlaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, is_bipartite, NamedGraph};

    fn c4() -> Graph {
        build_named_graph(&NamedGraph::Cycle(4)).unwrap()
    }

    fn c4_paths() -> TreeDecomposition {
        TreeDecomposition::new(vec![vec![0, 1, 2], vec![2, 3, 0]], vec![(0, 1)]).unwrap()
    }

    #[test]
    fn malformed_structures_are_rejected() {
        assert!(TreeDecomposition::new(vec![], vec![]).is_err());
        assert!(TreeDecomposition::new(vec![vec![0], vec![]], vec![(0, 1)]).is_err());
        assert!(TreeDecomposition::new(vec![vec![0], vec![1]], vec![]).is_err());
        assert!(TreeDecomposition::new(vec![vec![0], vec![1], vec![2]], vec![(0, 1), (1, 0)]).is_err());
        let d = TreeDecomposition::new(vec![vec![0, 7]], vec![]).unwrap();
        assert!(validate_decomposition(&c4(), &d).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = c4_paths();
        let text = d.to_json();
        assert_eq!(text, r#"{"bags":[[0,1,2],[0,2,3]],"tree_edges":[[0,1]]}"#);
        assert_eq!(TreeDecomposition::from_json(&text).unwrap(), d);
        assert!(TreeDecomposition::from_json("{\"bags\": 3}").is_err());
    }

    #[test]
    fn axioms_on_examples() {
        let path = build_named_graph(&NamedGraph::Path(5)).unwrap();
        let diag = validate_strong(&path, &TreeDecomposition::single_bag(&path)).unwrap();
        assert!(diag.is_valid());

        let diag = validate_decomposition(&c4(), &c4_paths()).unwrap();
        assert!(diag.is_valid());

        let k2 = build_named_graph(&NamedGraph::Complete(2)).unwrap();
        let d = TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 1)]).unwrap();
        let diag = validate_decomposition(&k2, &d).unwrap();
        assert!(!diag.is_valid());
        assert_eq!(diag.axiom_cover_edges.witness, Some(Witness::UncoveredEdge { edge: (0, 1) }));
        assert!(validate_strong(&k2, &d).is_err());
    }

    #[test]
    fn path_connectivity_witness() {
        // path 0-1-2-3 with bags {0,1},{2,3},{1,2}, tree 0-1-2: vertex 1 skips the middle bag
        let p = build_named_graph(&NamedGraph::Path(4)).unwrap();
        let d = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3], vec![1, 2]], vec![(0, 1), (1, 2)]).unwrap();
        let diag = validate_decomposition(&p, &d).unwrap();
        assert_eq!(
            diag.axiom_path_connectivity.witness,
            Some(Witness::PathViolation { x: 0, y: 2, z: 1, vertex: 1 })
        );
    }

    #[test]
    fn strong_conditions() {
        let diag = validate_strong(&c4(), &c4_paths()).unwrap();
        assert!(diag.is_valid());
        assert!(diag.empty_intersections.is_empty());

        let diag = validate_strong(&c4(), &TreeDecomposition::single_bag(&c4())).unwrap();
        assert!(!diag.is_valid());
        assert_eq!(
            diag.strong_edge_disjoint_trees.unwrap().witness,
            Some(Witness::BagNotTree { bag: 0 })
        );
    }

    #[test]
    fn iso_condition_can_fail() {
        // {0,2} is joined by a 2-path in one bag and a 3-path in the other
        let h = Graph::new(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2)]).unwrap();
        let d = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3, 4]], vec![(0, 1)]).unwrap();
        let diag = validate_strong(&h, &d).unwrap();
        assert!(diag.strong_edge_disjoint_trees.as_ref().unwrap().holds);
        assert_eq!(
            diag.strong_iso_condition.unwrap().witness,
            Some(Witness::NoFixingIsomorphism { bags: (0, 1) })
        );
    }

    #[test]
    fn empty_intersections_are_flagged() {
        let h = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let d = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]).unwrap();
        let diag = validate_strong(&h, &d).unwrap();
        assert!(diag.is_valid());
        assert_eq!(diag.empty_intersections, vec![(0, 1)]);
    }

    #[test]
    fn minimal_subtrees() {
        let p = build_named_graph(&NamedGraph::Path(3)).unwrap();
        assert_eq!(minimal_subtree(&p, &[0, 2]).unwrap(), vec![0, 1, 2]);
        assert_eq!(minimal_subtree(&p, &[1]).unwrap(), vec![1]);
        assert_eq!(minimal_subtree(&p, &[]).unwrap(), vec![0]);
        let star = build_named_graph(&NamedGraph::Star(3)).unwrap();
        assert_eq!(minimal_subtree(&star, &[1, 2]).unwrap(), vec![0, 1, 2]);
        assert!(minimal_subtree(&c4(), &[0]).is_err());
    }

    #[test]
    fn fixing_isomorphisms() {
        let (a, b, c, d) = (10, 11, 12, 13);
        let t1 = LabeledTree::from_labeled_edges(&[(a, b), (b, c)]).unwrap();
        let t2 = LabeledTree::from_labeled_edges(&[(a, d), (d, c)]).unwrap();
        let phi = rooted_iso_fixing(&t1, &t2, &[a, c]).unwrap();
        assert_eq!(phi[&b], d);
        assert_eq!(phi[&a], a);

        let id = rooted_iso_fixing(&t1, &t1, &[a, b, c]).unwrap();
        assert!(id.iter().all(|(x, y)| x == y));

        let star = LabeledTree::from_labeled_edges(&[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(rooted_iso_fixing(&t1, &star, &[]).is_none());
    }

    #[test]
    fn strong_implies_bipartite_and_counting() {
        let d = c4_paths();
        assert!(validate_strong(&c4(), &d).unwrap().is_valid());
        assert!(is_bipartite(&c4()).is_some());
        assert_eq!(counting_identities(&c4(), &d), (true, true));
    }

    #[test]
    fn bag_orders() {
        let d = TreeDecomposition::new(
            vec![vec![0], vec![0], vec![0], vec![0]],
            vec![(0, 1), (0, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(
            bag_order(&d, 0, false),
            vec![(0, None), (1, Some(0)), (2, Some(0)), (3, Some(2))]
        );
        assert_eq!(
            bag_order(&d, 0, true),
            vec![(0, None), (2, Some(0)), (1, Some(0)), (3, Some(2))]
        );
    }
}
