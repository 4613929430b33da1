//! T-BRW started from a partial embedding `h: X → V(G)`.
//!
//! With `S` the minimal subtree of `T` containing `X` (the vertex 0 when
//! `X` is empty), the walk first draws its restriction to `S` from `p_S`
//! renormalized to `G_h(S) = {g ∈ Hom(S,G) : g|_X = h}` and then continues
//! as the ordinary walk.

use num_rational::BigRational;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{bfs_from, require_edges, tree_law, walk_rest, ExactDistribution};
use crate::decomp::minimal_subtree;
use crate::error::{LabError, Result};
use crate::graph::{Graph, Homomorphism};
use crate::hom::enumerate_extensions;
use crate::rational::ratio;
use crate::rng::{exact_index, sample_stream};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialEmbedding {
    /// Distinct vertices of `T`, ascending.
    pub domain: Vec<usize>,
    /// `image[i]` is the image of `domain[i]`.
    pub image: Vec<usize>,
}

impl PartialEmbedding {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(LabError::InvalidParameter("vertex mapped twice".into()));
        }
        let (domain, image) = pairs.into_iter().unzip();
        Ok(PartialEmbedding { domain, image })
    }

    pub fn empty() -> Self {
        PartialEmbedding {
            domain: Vec::new(),
            image: Vec::new(),
        }
    }

    fn check(&self, t: &Graph, g: &Graph) -> Result<()> {
        if self.domain.len() != self.image.len() {
            return Err(LabError::InvalidParameter("domain and image lengths differ".into()));
        }
        if self.domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::InvalidParameter("domain must be strictly ascending".into()));
        }
        if let Some(&v) = self.domain.iter().find(|&&v| v >= t.n()) {
            return Err(LabError::VertexOutOfRange { vertex: v, n: t.n() });
        }
        if let Some(&x) = self.image.iter().find(|&&x| x >= g.n()) {
            return Err(LabError::VertexOutOfRange { vertex: x, n: g.n() });
        }
        Ok(())
    }
}

/// The pieces of the partial-start law for one tree and one domain.
pub(crate) struct PartialLaw {
    /// Vertices of `S`, ascending.
    s: Vec<usize>,
    s_tree: Graph,
    order: Vec<usize>,
    parent: Vec<usize>,
    /// Position in `s` of each domain vertex.
    domain_in_s: Vec<usize>,
    n: usize,
}

impl PartialLaw {
    pub(crate) fn new(t: &Graph, domain: &[usize]) -> Result<Self> {
        let s = minimal_subtree(t, domain)?;
        let (s_tree, _) = t.induced(&s);
        let (order, parent) = bfs_from(t, &s);
        let domain_in_s = domain
            .iter()
            .map(|v| s.binary_search(v).expect("domain lies in its minimal subtree"))
            .collect();
        Ok(PartialLaw {
            s,
            s_tree,
            order,
            parent,
            domain_in_s,
            n: t.n(),
        })
    }

    /// `G_h(S)` with the `p_S` weight of each element.
    pub(crate) fn start_set(&self, g: &Graph, image: &[usize], max: usize) -> Result<Vec<(Vec<usize>, BigRational)>> {
        let mut fixed = vec![None; self.s.len()];
        for (&i, &x) in self.domain_in_s.iter().zip(image) {
            fixed[i] = Some(x);
        }
        Ok(enumerate_extensions(&self.s_tree, g, &fixed, max)?
            .into_iter()
            .map(|y| {
                let p = tree_law(&self.s_tree, g, &y);
                (y, p)
            })
            .collect())
    }

    pub(crate) fn normalizer(&self, g: &Graph, image: &[usize], max: usize) -> Result<BigRational> {
        let start = self.start_set(g, image, max)?;
        if start.is_empty() {
            return Err(LabError::NoExtension);
        }
        Ok(start.into_iter().map(|(_, p)| p).sum())
    }

    /// Probability of the full map `x` (on all of `T`) given the start
    /// normalizer `z`. `x` must agree with the start on the domain.
    pub(crate) fn prob(&self, g: &Graph, x: &[usize], z: &BigRational) -> BigRational {
        let on_s: Vec<usize> = self.s.iter().map(|&v| x[v]).collect();
        let mut p = tree_law(&self.s_tree, g, &on_s) / z;
        for &u in &self.order[self.s.len()..] {
            p *= ratio(1, g.degree(x[self.parent[u]]) as u64);
        }
        p
    }

    /// Draws a full map on `T` agreeing with `image` on the domain.
    pub(crate) fn sample<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        g: &Graph,
        image: &[usize],
        max: usize,
    ) -> Result<Vec<usize>> {
        let start = self.start_set(g, image, max)?;
        if start.is_empty() {
            return Err(LabError::NoExtension);
        }
        let z: BigRational = start.iter().map(|(_, p)| p).sum();
        let probs: Vec<BigRational> = start.iter().map(|(_, p)| p / &z).collect();
        let pick = &start[exact_index(rng, &probs)].0;
        let mut x = vec![0; self.n];
        for (&v, &y) in self.s.iter().zip(pick) {
            x[v] = y;
        }
        walk_rest(rng, g, &self.order, &self.parent, self.s.len(), &mut x);
        Ok(x)
    }

    /// Vertices of `T` in the order the walk assigns them.
    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Exact law of the T-BRW started from `h`. Fails with
/// [`LabError::NoExtension`] if `G_h(S)` is empty.
pub fn partial_brw_distribution(
    t: &Graph,
    g: &Graph,
    h: &PartialEmbedding,
    max: usize,
) -> Result<ExactDistribution> {
    t.require_tree()?;
    require_edges(g)?;
    h.check(t, g)?;
    let law = PartialLaw::new(t, &h.domain)?;
    let z = law.normalizer(g, &h.image, max)?;
    let mut fixed = vec![None; t.n()];
    for (&v, &x) in h.domain.iter().zip(&h.image) {
        fixed[v] = Some(x);
    }
    let entries = enumerate_extensions(t, g, &fixed, max)?
        .into_iter()
        .map(|x| {
            let p = law.prob(g, &x, &z);
            (x, p)
        })
        .collect();
    ExactDistribution::new(entries)
}

/// One draw of the T-BRW started from `h`, from the stream `(seed, 0)`.
pub fn partial_brw_sample(t: &Graph, g: &Graph, h: &PartialEmbedding, seed: u64, max: usize) -> Result<Homomorphism> {
    t.require_tree()?;
    require_edges(g)?;
    h.check(t, g)?;
    let law = PartialLaw::new(t, &h.domain)?;
    let x = law.sample(&mut sample_stream(seed, 0), g, &h.image, max)?;
    Ok(Homomorphism(x))
}

/// `count` draws of the T-BRW started from `h`; draw `i` uses the stream
/// `(seed, i)`, so draw 0 matches [`partial_brw_sample`].
pub fn partial_brw_samples(
    t: &Graph,
    g: &Graph,
    h: &PartialEmbedding,
    seed: u64,
    count: usize,
    max: usize,
) -> Result<Vec<Homomorphism>> {
    t.require_tree()?;
    require_edges(g)?;
    h.check(t, g)?;
    let law = PartialLaw::new(t, &h.domain)?;
    (0..count as u64)
        .map(|i| law.sample(&mut sample_stream(seed, i), g, &h.image, max).map(Homomorphism))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brw::brw_distribution;
    use crate::graph::construct::{build_named_graph, NamedGraph};
    use crate::rational::int;

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn anchored_ends_of_a_path() {
        let k3 = named(NamedGraph::Complete(3));
        let p3 = named(NamedGraph::Path(3));
        let h = PartialEmbedding::new([(0, 0), (2, 1)]).unwrap();
        let d = partial_brw_distribution(&p3, &k3, &h, 100).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.prob_of(&[0, 2, 1]), int(1));

        let h = PartialEmbedding::new([(0, 0), (2, 0)]).unwrap();
        let d = partial_brw_distribution(&p3, &k3, &h, 100).unwrap();
        assert_eq!(d.prob_of(&[0, 1, 0]), ratio(1, 2));
        assert_eq!(d.prob_of(&[0, 2, 0]), ratio(1, 2));
        for seed in 0..20 {
            let x = partial_brw_sample(&p3, &k3, &h, seed, 100).unwrap();
            assert_eq!((x.0[0], x.0[2]), (0, 0));
        }
        let batch = partial_brw_samples(&p3, &k3, &h, 7, 5, 100).unwrap();
        assert_eq!(batch[0], partial_brw_sample(&p3, &k3, &h, 7, 100).unwrap());
    }

    #[test]
    fn empty_anchor_is_the_plain_walk() {
        let star = named(NamedGraph::Star(3));
        let p4 = named(NamedGraph::Path(4));
        assert_eq!(
            partial_brw_distribution(&p4, &star, &PartialEmbedding::empty(), 10_000).unwrap(),
            brw_distribution(&p4, &star, 10_000).unwrap()
        );
    }

    #[test]
    fn impossible_anchors() {
        let k3 = named(NamedGraph::Complete(3));
        let p3 = named(NamedGraph::Path(3));
        let adjacent_same = PartialEmbedding::new([(0, 1), (1, 1)]).unwrap();
        assert_eq!(
            partial_brw_distribution(&p3, &k3, &adjacent_same, 100),
            Err(LabError::NoExtension)
        );
        assert!(PartialEmbedding::new([(0, 1), (0, 2)]).is_err());
        let out = PartialEmbedding::new([(0, 5)]).unwrap();
        assert!(partial_brw_distribution(&p3, &k3, &out, 100).is_err());
    }
}
