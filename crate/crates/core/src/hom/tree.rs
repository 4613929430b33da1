use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::HomCount;
use crate::error::Result;
use crate::graph::Graph;

/// `|Hom(T, G)|` for a tree `T` by dynamic programming: rooting `T` at `0`,
/// the number of homomorphisms of the subtree at `v` with `v ↦ x` is the
/// product over children `c` of `Σ_{y ~ x}` (count for `c` with `c ↦ y`).
///
/// Runs in `O(|V(T)| · |E(G)|)` big-integer operations.
pub fn count_tree_homomorphisms(t: &Graph, g: &Graph) -> Result<HomCount> {
    t.require_tree()?;
    let n = g.n();
    // BFS order from the root; parents precede children.
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; t.n()];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut counts: Vec<Vec<BigUint>> = vec![vec![BigUint::one(); n]; t.n()];
    for &v in order.iter().skip(1).rev() {
        let lifted: Vec<BigUint> = (0..n)
            .map(|x| {
                g.neighbors(x)
                    .iter()
                    .fold(BigUint::zero(), |acc, &y| acc + &counts[v][y])
            })
            .collect();
        let p = parent[v];
        for (c, l) in counts[p].iter_mut().zip(lifted) {
            *c *= l;
        }
    }
    Ok(counts[0].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, NamedGraph};
    use crate::hom::count_homomorphisms;

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn examples() {
        let k3 = named(NamedGraph::Complete(3));
        let k2 = named(NamedGraph::Complete(2));
        assert_eq!(count_tree_homomorphisms(&k2, &k3).unwrap(), BigUint::from(6u32));
        assert_eq!(
            count_tree_homomorphisms(&named(NamedGraph::Path(3)), &k3).unwrap(),
            BigUint::from(12u32)
        );
        assert_eq!(
            count_tree_homomorphisms(&named(NamedGraph::Star(3)), &k2).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn rejects_non_trees() {
        let c4 = named(NamedGraph::Cycle(4));
        assert!(count_tree_homomorphisms(&c4, &c4).is_err());
        assert!(count_tree_homomorphisms(&Graph::empty(2), &c4).is_err());
    }

    #[test]
    fn agrees_with_backtracking() {
        for t in crate::graph::catalog::trees_up_to(6) {
            for g in crate::graph::catalog::graphs_up_to(1, 4) {
                assert_eq!(count_tree_homomorphisms(&t, &g).unwrap(), count_homomorphisms(&t, &g));
            }
        }
    }
}
