//! The composite random homomorphism of a strongly tree-decomposable graph.
//!
//! Bags are explored in breadth-first order from a root bag `R`. The root
//! bag gets an `H[R]`-BRW; every later bag `X_i` gets an `H[X_i]`-BRW
//! started from the current map restricted to `X_i ∩ Z_{i-1}`, where
//! `Z_{i-1}` is the union of the bags explored so far, and only its new
//! vertices are kept.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::partial::PartialLaw;
use super::{require_edges, ExactDistribution};
use crate::decomp::{bag_order, validate_strong, LabeledTree, TreeDecomposition};
use crate::error::{LabError, Result};
use crate::graph::{check_homomorphism, Graph, Homomorphism};
use crate::hom::enumerate_homomorphisms;
use crate::rng::sample_stream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmbedOrder {
    pub root: usize,
    /// Visit the children of each bag in descending index order.
    pub reverse_children: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedTrace {
    pub seed: u64,
    pub root_bag: usize,
    pub bag_order: Vec<usize>,
    /// Vertices of `H` in the order they received their image.
    pub vertex_order: Vec<usize>,
    pub homomorphism: Homomorphism,
}

struct Step {
    tree: LabeledTree,
    /// Local indices (in `tree`) of `X_i ∩ Z_{i-1}`.
    domain: Vec<usize>,
    law: PartialLaw,
}

fn plan(h: &Graph, d: &TreeDecomposition, g: &Graph, order: &EmbedOrder) -> Result<(Vec<usize>, Vec<Step>)> {
    require_edges(g)?;
    if order.root >= d.num_bags() {
        return Err(LabError::InvalidParameter(format!(
            "root bag {} out of range for {} bags",
            order.root,
            d.num_bags()
        )));
    }
    let diag = validate_strong(h, d)?;
    if !diag.is_valid() {
        return Err(LabError::InvalidDecomposition(format!(
            "not a strong decomposition: {:?}",
            diag.first_witness()
        )));
    }
    let bags: Vec<usize> = bag_order(d, order.root, order.reverse_children)
        .into_iter()
        .map(|(b, _)| b)
        .collect();
    let mut explored = vec![false; h.n()];
    let mut steps = Vec::with_capacity(bags.len());
    for &b in &bags {
        let tree = LabeledTree::induced(h, &d.bags[b]);
        let domain: Vec<usize> = (0..tree.labels.len())
            .filter(|&i| explored[tree.labels[i]])
            .collect();
        let law = PartialLaw::new(&tree.graph, &domain)?;
        for &v in &d.bags[b] {
            explored[v] = true;
        }
        steps.push(Step { tree, domain, law });
    }
    Ok((bags, steps))
}

/// One draw of the composite embedding from the stream `(seed, 0)`.
pub fn std_embed_sample(
    h: &Graph,
    d: &TreeDecomposition,
    g: &Graph,
    order: &EmbedOrder,
    seed: u64,
    max: usize,
) -> Result<EmbedTrace> {
    let (bags, steps) = plan(h, d, g, order)?;
    let mut rng = sample_stream(seed, 0);
    let mut w: Vec<Option<usize>> = vec![None; h.n()];
    let mut vertex_order = Vec::with_capacity(h.n());
    for step in &steps {
        let anchor: Vec<usize> = step
            .domain
            .iter()
            .map(|&i| w[step.tree.labels[i]].expect("anchor already embedded"))
            .collect();
        let x = step.law.sample(&mut rng, g, &anchor, max)?;
        for &i in step.law.order() {
            let v = step.tree.labels[i];
            if w[v].is_none() {
                w[v] = Some(x[i]);
                vertex_order.push(v);
            }
        }
    }
    let image: Vec<usize> = w.into_iter().map(|x| x.expect("bags cover V(H)")).collect();
    check_homomorphism(h, g, &image)?;
    Ok(EmbedTrace {
        seed,
        root_bag: order.root,
        bag_order: bags,
        vertex_order,
        homomorphism: Homomorphism(image),
    })
}

/// The exact law of the composite embedding: the product over explored
/// bags of the started-walk probabilities, evaluated on every element of
/// `Hom(H, G)`.
pub fn std_embed_distribution(
    h: &Graph,
    d: &TreeDecomposition,
    g: &Graph,
    order: &EmbedOrder,
    max: usize,
) -> Result<ExactDistribution> {
    let (_, steps) = plan(h, d, g, order)?;
    let mut caches: Vec<HashMap<Vec<usize>, BigRational>> = vec![HashMap::new(); steps.len()];
    let mut entries = Vec::new();
    for x in enumerate_homomorphisms(h, g, max)? {
        let mut p = BigRational::one();
        for (step, cache) in steps.iter().zip(caches.iter_mut()) {
            let local: Vec<usize> = step.tree.labels.iter().map(|&v| x[v]).collect();
            let anchor: Vec<usize> = step.domain.iter().map(|&i| local[i]).collect();
            let z = match cache.get(&anchor) {
                Some(z) => z.clone(),
                None => {
                    let z = step.law.normalizer(g, &anchor, max)?;
                    cache.insert(anchor, z.clone());
                    z
                }
            };
            p *= step.law.prob(g, &local, &z);
        }
        entries.push((x, p));
    }
    ExactDistribution::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brw::brw_distribution;
    use crate::graph::construct::{build_named_graph, NamedGraph};
    use crate::rational::ratio;

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    fn c4_paths() -> TreeDecomposition {
        TreeDecomposition::new(vec![vec![0, 1, 2], vec![2, 3, 0]], vec![(0, 1)]).unwrap()
    }

    #[test]
    fn single_bag_is_the_tree_walk() {
        let t = named(NamedGraph::Star(3));
        let g = named(NamedGraph::Path(4));
        let d = TreeDecomposition::single_bag(&t);
        assert_eq!(
            std_embed_distribution(&t, &d, &g, &EmbedOrder::default(), 10_000).unwrap(),
            brw_distribution(&t, &g, 10_000).unwrap()
        );
    }

    #[test]
    fn c4_marginal_and_root_swap() {
        let c4 = named(NamedGraph::Cycle(4));
        let k3 = named(NamedGraph::Complete(3));
        let d = c4_paths();
        let a = std_embed_distribution(&c4, &d, &k3, &EmbedOrder::default(), 1000).unwrap();
        let b = std_embed_distribution(
            &c4,
            &d,
            &k3,
            &EmbedOrder {
                root: 1,
                reverse_children: false,
            },
            1000,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 18);
        // marginal on the bag {0,1,2}
        let mut marginal: HashMap<Vec<usize>, BigRational> = HashMap::new();
        for (x, p) in a.iter() {
            *marginal.entry(x[..3].to_vec()).or_default() += p;
        }
        assert_eq!(marginal.len(), 12);
        assert!(marginal.values().all(|p| *p == ratio(1, 12)));
    }

    #[test]
    fn samples_are_homomorphisms() {
        let c4 = named(NamedGraph::Cycle(4));
        let k2 = named(NamedGraph::Complete(2));
        for seed in 0..30 {
            let tr = std_embed_sample(&c4, &c4_paths(), &k2, &EmbedOrder::default(), seed, 1000).unwrap();
            let w = tr.homomorphism.0;
            assert!(w[0] == w[2] && w[1] == w[3] && w[0] != w[1]);
            assert_eq!(tr.bag_order, vec![0, 1]);
            assert_eq!(tr.vertex_order.len(), 4);
        }
        let tr = std_embed_sample(&c4, &c4_paths(), &named(NamedGraph::Complete(3)), &EmbedOrder::default(), 5, 1000)
            .unwrap();
        assert_eq!(
            tr,
            std_embed_sample(&c4, &c4_paths(), &named(NamedGraph::Complete(3)), &EmbedOrder::default(), 5, 1000)
                .unwrap()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let c4 = named(NamedGraph::Cycle(4));
        let k3 = named(NamedGraph::Complete(3));
        let one = TreeDecomposition::single_bag(&c4);
        assert!(matches!(
            std_embed_distribution(&c4, &one, &k3, &EmbedOrder::default(), 1000),
            Err(LabError::InvalidDecomposition(_))
        ));
        assert_eq!(
            std_embed_sample(&c4, &c4_paths(), &Graph::empty(3), &EmbedOrder::default(), 0, 1000),
            Err(LabError::EdgelessTarget)
        );
        let bad_root = EmbedOrder {
            root: 2,
            reverse_children: false,
        };
        assert!(std_embed_distribution(&c4, &c4_paths(), &k3, &bad_root, 1000).is_err());
    }
}
