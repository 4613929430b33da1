//! Tree-indexed branching random walks (T-BRW).
//!
//! The root of `T` (vertex 0) is placed according to the stationary
//! distribution `deg(v) / 2|E(G)|`, and every other vertex, visited in
//! breadth-first order, is placed uniformly among the neighbours of its
//! parent's image. The law has the closed form
//! `p_T(h) = 1/(2|E(G)|) · Π_v deg_G(h(v))^{-(deg_T(v) - 1)}`, which is what
//! the exact routines use.

mod embed;
mod partial;

pub use embed::{std_embed_distribution, std_embed_sample, EmbedOrder, EmbedTrace};
pub use partial::{partial_brw_distribution, partial_brw_sample, partial_brw_samples, PartialEmbedding};

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::graph::{check_homomorphism, Graph, Homomorphism};
use crate::hom::{enumerate_extensions, enumerate_homomorphisms};
use crate::rational::{self, int, ratio};
use crate::rng::{sample_stream, uniform_index, weighted_index};

/// A probability law on maps `V(H) → V(G)` with exact rational masses.
/// The support is kept in lexicographic order, so two laws are equal iff
/// they are equal element-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    support: Vec<Homomorphism>,
    prob: Vec<BigRational>,
}

impl ExactDistribution {
    /// Drops zero-mass entries, sorts, and checks that the masses are
    /// positive and sum to exactly one.
    pub fn new(entries: Vec<(Vec<usize>, BigRational)>) -> Result<Self> {
        let mut entries: Vec<(Vec<usize>, BigRational)> =
            entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if let Some((_, p)) = entries.iter().find(|(_, p)| p.is_negative()) {
            return Err(LabError::Unnormalized(format!("negative mass {}", rational::format(p))));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(LabError::InvalidParameter("repeated support element".into()));
        }
        let total: BigRational = entries.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(LabError::Unnormalized(rational::format(&total)));
        }
        let (support, prob) = entries
            .into_iter()
            .map(|(h, p)| (Homomorphism(h), p))
            .unzip();
        Ok(ExactDistribution { support, prob })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[Homomorphism] {
        &self.support
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.prob
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &BigRational)> {
        self.support.iter().map(|h| h.image()).zip(&self.prob)
    }

    /// Mass of `h` (zero off the support).
    pub fn prob_of(&self, h: &[usize]) -> BigRational {
        match self.support.binary_search_by(|s| s.image().cmp(h)) {
            Ok(i) => self.prob[i].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn rows(&self) -> Vec<DistributionRow> {
        self.iter()
            .map(|(h, p)| DistributionRow {
                map: h.to_vec(),
                prob: rational::format(p),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistributionRow {
    pub map: Vec<usize>,
    pub prob: String,
}

pub(crate) fn require_edges(g: &Graph) -> Result<()> {
    if g.num_edges() == 0 {
        Err(LabError::EdgelessTarget)
    } else {
        Ok(())
    }
}

/// The closed form of `p_T(h)`, without validation.
pub(crate) fn tree_law(t: &Graph, g: &Graph, h: &[usize]) -> BigRational {
    let mut num = BigRational::one();
    for v in 0..t.n() {
        let d = g.degree(h[v]) as u64;
        num *= rational::pow(&int(d), 1 - t.degree(v) as i64);
    }
    num * ratio(1, 2 * g.num_edges() as u64)
}

/// `p_T(h)` for `h ∈ Hom(T, G)`.
pub fn brw_prob(t: &Graph, g: &Graph, h: &[usize]) -> Result<BigRational> {
    t.require_tree()?;
    require_edges(g)?;
    check_homomorphism(t, g, h)?;
    Ok(tree_law(t, g, h))
}

/// The full law of the T-BRW on `Hom(T, G)`; fails once `Hom(T, G)` has
/// more than `max` elements.
pub fn brw_distribution(t: &Graph, g: &Graph, max: usize) -> Result<ExactDistribution> {
    t.require_tree()?;
    require_edges(g)?;
    let entries = enumerate_homomorphisms(t, g, max)?
        .into_iter()
        .map(|h| {
            let p = tree_law(t, g, &h);
            (h, p)
        })
        .collect();
    ExactDistribution::new(entries)
}

/// Breadth-first order of a tree from `sources` (in the given order),
/// children by ascending index, with the parent of every non-source vertex.
pub(crate) fn bfs_from(t: &Graph, sources: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut parent = vec![usize::MAX; t.n()];
    let mut seen = vec![false; t.n()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in sources {
        seen[s] = true;
        queue.push_back(s);
    }
    let mut order = Vec::with_capacity(t.n());
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    (order, parent)
}

/// Extends `image` (already set on the first `from` vertices of `order`)
/// by uniform neighbour steps.
pub(crate) fn walk_rest<R: Rng + ?Sized>(
    rng: &mut R,
    g: &Graph,
    order: &[usize],
    parent: &[usize],
    from: usize,
    image: &mut [usize],
) {
    for &u in &order[from..] {
        let nb = g.neighbors(image[parent[u]]);
        image[u] = nb[uniform_index(rng, nb.len())];
    }
}

fn sample_with<R: Rng + ?Sized>(rng: &mut R, t: &Graph, g: &Graph) -> Vec<usize> {
    let degrees: Vec<u64> = (0..g.n()).map(|v| g.degree(v) as u64).collect();
    let (order, parent) = bfs_from(t, &[0]);
    let mut image = vec![0; t.n()];
    image[0] = weighted_index(rng, &degrees);
    walk_rest(rng, g, &order, &parent, 1, &mut image);
    image
}

/// One T-BRW draw from the stream `(seed, 0)`.
pub fn brw_sample(t: &Graph, g: &Graph, seed: u64) -> Result<Homomorphism> {
    t.require_tree()?;
    require_edges(g)?;
    if t.n() == 0 {
        return Err(LabError::NotATree("no vertices".into()));
    }
    Ok(Homomorphism(sample_with(&mut sample_stream(seed, 0), t, g)))
}

/// `count` independent draws; draw `i` uses the stream `(seed, i)`, so the
/// result does not depend on thread scheduling.
pub fn brw_samples(t: &Graph, g: &Graph, seed: u64, count: usize) -> Result<Vec<Homomorphism>> {
    t.require_tree()?;
    require_edges(g)?;
    if t.n() == 0 {
        return Err(LabError::NotATree("no vertices".into()));
    }
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| Homomorphism(sample_with(&mut sample_stream(seed, i), t, g)))
        .collect())
}

/// Checks that `s` (sorted or not) spans a subtree of `t`; returns it sorted.
pub(crate) fn require_subtree(t: &Graph, s: &[usize]) -> Result<Vec<usize>> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(LabError::InvalidParameter("empty vertex set is not a subtree".into()));
    }
    if let Some(&v) = s.iter().find(|&&v| v >= t.n()) {
        return Err(LabError::VertexOutOfRange { vertex: v, n: t.n() });
    }
    if !t.induced(&s).0.is_connected() {
        return Err(LabError::InvalidParameter(format!("{s:?} does not span a subtree")));
    }
    Ok(s)
}

/// `Σ_{g ∈ Hom(T,G), g|_S = h} p_T(g)`, where `h[i]` is the image of the
/// `i`-th smallest vertex of `S`.
pub fn marginal_prob(t: &Graph, g: &Graph, s: &[usize], h: &[usize], max: usize) -> Result<BigRational> {
    t.require_tree()?;
    require_edges(g)?;
    let s = require_subtree(t, s)?;
    if h.len() != s.len() {
        return Err(LabError::InvalidParameter(format!(
            "{} images for {} subtree vertices",
            h.len(),
            s.len()
        )));
    }
    let (sub, _) = t.induced(&s);
    check_homomorphism(&sub, g, h)?;
    let mut fixed = vec![None; t.n()];
    for (&v, &x) in s.iter().zip(h) {
        fixed[v] = Some(x);
    }
    Ok(enumerate_extensions(t, g, &fixed, max)?
        .iter()
        .map(|f| tree_law(t, g, f))
        .sum())
}
