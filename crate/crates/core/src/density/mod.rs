//! Density toolkit: local density, minimum-degree extraction, codegree
//! bounds, and the audits built on codegree sums and on `ψ_{C_{2k}}(G)`.

mod audit;
mod cartesian;

pub use audit::{holder_triangle_check, replacement_convexity_check, subdivision_identity_check, triangle_replacement};
pub use cartesian::{cartesian_cycle_audit, lemma_psi_identity, CartesianAudit, CartesianContext};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::graph::{Graph, WeightedGraph};
use crate::rational::{self, int, ratio};
use crate::rng::{sample_stream, uniform_index};

/// `(ρ, d)`: every `U` with `|U| ≥ ρ|V(G)|` must have density at least `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityParams {
    #[serde(serialize_with = "rational::ser_rational")]
    pub rho: BigRational,
    #[serde(serialize_with = "rational::ser_rational")]
    pub d: BigRational,
}

impl DensityParams {
    pub fn new(rho: BigRational, d: BigRational) -> Result<Self> {
        for (name, x) in [("rho", &rho), ("d", &d)] {
            if *x <= BigRational::zero() || *x > BigRational::one() {
                return Err(LabError::InvalidParameter(format!(
                    "{name} must lie in (0,1], got {}",
                    rational::format(x)
                )));
            }
        }
        Ok(DensityParams { rho, d })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Every subset, in Gray-code order; refuses graphs above `max_n`.
    Exhaustive { max_n: usize },
    /// `subsets` random admissible subsets from the stream `(seed, i)`.
    Sampled { subsets: u64, seed: u64 },
}

impl Default for DensityMode {
    fn default() -> Self {
        DensityMode::Exhaustive { max_n: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityWitness {
    pub subset: Vec<usize>,
    pub edges: usize,
    #[serde(serialize_with = "rational::ser_rational")]
    pub density: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDensity {
    pub dense: bool,
    /// False when the verdict comes from sampling.
    pub exhaustive: bool,
    pub subsets_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DensityWitness>,
}

/// Subsets with fewer than two vertices carry no density and are skipped.
fn admissible(size: usize, n: usize, rho: &BigRational) -> bool {
    size >= 2 && int(size as u64) >= rho * int(n as u64)
}

fn sparse(edges: usize, size: usize, d: &BigRational) -> bool {
    ratio(edges as u64, (size * (size - 1) / 2) as u64) < *d
}

fn witness(g: &Graph, subset: Vec<usize>) -> DensityWitness {
    let edges = g.induced_edge_count(&subset);
    let pairs = subset.len() * (subset.len() - 1) / 2;
    DensityWitness {
        subset,
        edges,
        density: ratio(edges as u64, pairs as u64),
    }
}

/// Whether `G` is `(ρ, d)`-dense. The exhaustive mode returns the first
/// violating subset in Gray-code order.
pub fn is_locally_dense(g: &Graph, params: &DensityParams, mode: DensityMode) -> Result<LocalDensity> {
    let n = g.n();
    match mode {
        DensityMode::Exhaustive { max_n } => {
            if n > max_n || n > 63 {
                return Err(LabError::BudgetExceeded(format!(
                    "exhaustive density check on {n} vertices (limit {max_n})"
                )));
            }
            let masks: Vec<u64> = (0..n)
                .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
                .collect();
            let (mut set, mut edges, mut checked) = (0u64, 0usize, 0u64);
            for i in 1u64..1 << n {
                let v = i.trailing_zeros() as usize;
                let bit = 1u64 << v;
                let touching = (masks[v] & set).count_ones() as usize;
                if set & bit == 0 {
                    set |= bit;
                    edges += touching;
                } else {
                    set &= !bit;
                    edges -= touching;
                }
                let size = set.count_ones() as usize;
                if !admissible(size, n, &params.rho) {
                    continue;
                }
                checked += 1;
                if sparse(edges, size, &params.d) {
                    let subset = (0..n).filter(|&u| set >> u & 1 == 1).collect();
                    return Ok(LocalDensity {
                        dense: false,
                        exhaustive: true,
                        subsets_checked: checked,
                        witness: Some(witness(g, subset)),
                    });
                }
            }
            Ok(LocalDensity {
                dense: true,
                exhaustive: true,
                subsets_checked: checked,
                witness: None,
            })
        }
        DensityMode::Sampled { subsets, seed } => {
            let sizes: Vec<usize> = (2..=n).filter(|&s| admissible(s, n, &params.rho)).collect();
            if sizes.is_empty() {
                return Ok(LocalDensity {
                    dense: true,
                    exhaustive: false,
                    subsets_checked: 0,
                    witness: None,
                });
            }
            for i in 0..subsets {
                let mut rng = sample_stream(seed, i);
                let size = sizes[uniform_index(&mut rng, sizes.len())];
                let mut subset = sample(&mut rng, n, size).into_vec();
                subset.sort_unstable();
                let edges = g.induced_edge_count(&subset);
                if sparse(edges, size, &params.d) {
                    return Ok(LocalDensity {
                        dense: false,
                        exhaustive: false,
                        subsets_checked: i + 1,
                        witness: Some(witness(g, subset)),
                    });
                }
            }
            Ok(LocalDensity {
                dense: true,
                exhaustive: false,
                subsets_checked: subsets,
                witness: None,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDegreeSubgraph {
    /// Kept vertices of `G`, ascending.
    pub vertices: Vec<usize>,
    /// Removed vertices in removal order.
    pub removed: Vec<usize>,
    pub min_degree: usize,
    #[serde(serialize_with = "rational::ser_rational")]
    pub average_degree: BigRational,
    #[serde(skip)]
    pub graph: Graph,
}

impl MinDegreeSubgraph {
    /// `min_degree ≥ d/4`.
    pub fn degree_guarantee(&self) -> bool {
        !self.vertices.is_empty() && int(4 * self.min_degree as u64) >= self.average_degree
    }

    /// `|V(G')| ≥ 2^{-6} |V(G)|`.
    pub fn size_guarantee(&self, n: usize) -> bool {
        64 * self.vertices.len() >= n
    }
}

/// Removes a vertex of lowest current degree (lowest index on ties) while
/// some vertex has degree below a quarter of the average degree `d` of `G`.
/// Requires `d > 0` and maximum degree at most `2d`.
pub fn extract_min_degree_subgraph(g: &Graph) -> Result<MinDegreeSubgraph> {
    let (n, m) = (g.n(), g.num_edges());
    if m == 0 {
        return Err(LabError::Precondition("average degree must be positive".into()));
    }
    if g.max_degree() * n > 4 * m {
        return Err(LabError::Precondition(format!(
            "maximum degree {} exceeds twice the average degree {}",
            g.max_degree(),
            rational::format(&ratio(2 * m as u64, n as u64))
        )));
    }
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut removed = Vec::new();
    // 4 deg < 2m/n
    while let Some(v) = (0..n)
        .filter(|&v| alive[v])
        .min_by_key(|&v| (degree[v], v))
        .filter(|&v| 4 * degree[v] * n < 2 * m)
    {
        alive[v] = false;
        removed.push(v);
        for &u in g.neighbors(v) {
            if alive[u] {
                degree[u] -= 1;
            }
        }
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let min_degree = vertices.iter().map(|&v| degree[v]).min().unwrap_or(0);
    let (graph, _) = g.induced(&vertices);
    Ok(MinDegreeSubgraph {
        vertices,
        removed,
        min_degree,
        average_degree: ratio(2 * m as u64, n as u64),
        graph,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodegreeReport {
    /// Sum of codegrees over unordered pairs of distinct vertices of `U`.
    #[serde(serialize_with = "rational::ser_biguint")]
    pub lhs: BigUint,
    /// `δ² / (4n) · C(|U|, 2)`.
    #[serde(serialize_with = "rational::ser_rational")]
    pub rhs: BigRational,
    pub delta: usize,
    pub holds: bool,
}

/// Compares `Σ_{u,u'} d(u,u')` over unordered pairs in `U` with
/// `δ²/(4n) C(|U|,2)`; requires `δ|U| ≥ 2n`.
pub fn codegree_bound_check(g: &Graph, u: &[usize]) -> Result<CodegreeReport> {
    let n = g.n();
    let mut set = u.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() != u.len() {
        return Err(LabError::InvalidParameter("U has repeated vertices".into()));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(LabError::VertexOutOfRange { vertex: v, n });
    }
    let delta = g.min_degree();
    if delta * set.len() < 2 * n {
        return Err(LabError::Precondition(format!(
            "δ|U| = {} is below 2n = {}",
            delta * set.len(),
            2 * n
        )));
    }
    let mut sum = 0u64;
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            sum += g.codegree(a, b) as u64;
        }
    }
    let k = set.len() as u64;
    let rhs = ratio((delta * delta) as u64, 4 * n as u64) * int(k * k.saturating_sub(1) / 2);
    let lhs = BigUint::from(sum);
    Ok(CodegreeReport {
        holds: rational::from_biguint(&lhs) >= rhs,
        lhs,
        rhs,
        delta,
    })
}

/// `W(u,v) = d(u,v) / |V(G)|`, with `W(x,x) = deg(x) / |V(G)|`.
pub fn codegree_weight_matrix(g: &Graph) -> Result<WeightedGraph> {
    let n = g.n();
    if n == 0 {
        return Err(LabError::EmptyTarget);
    }
    let weight = g
        .codegree_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|c| ratio(c as u64, n as u64)).collect())
        .collect();
    WeightedGraph::new(n, weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, NamedGraph};

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    fn params(rho: (u64, u64), d: (u64, u64)) -> DensityParams {
        DensityParams::new(ratio(rho.0, rho.1), ratio(d.0, d.1)).unwrap()
    }

    #[test]
    fn local_density_examples() {
        let r = is_locally_dense(&named(NamedGraph::Complete(5)), &params((1, 5), (1, 1)), DensityMode::default())
            .unwrap();
        assert!(r.dense && r.exhaustive);
        assert_eq!(r.subsets_checked, 26);

        let r = is_locally_dense(&Graph::empty(5), &params((1, 2), (1, 2)), DensityMode::default()).unwrap();
        assert!(!r.dense);
        assert_eq!(r.witness.unwrap().subset.len(), 3);

        let r = is_locally_dense(&named(NamedGraph::Cycle(5)), &params((1, 2), (1, 2)), DensityMode::default())
            .unwrap();
        let w = r.witness.unwrap();
        assert!(!r.dense);
        assert_eq!((w.subset.len(), w.edges, w.density), (3, 1, ratio(1, 3)));

        let sampled = DensityMode::Sampled { subsets: 200, seed: 1 };
        let r = is_locally_dense(&named(NamedGraph::Cycle(5)), &params((1, 2), (1, 2)), sampled).unwrap();
        assert!(!r.dense && !r.exhaustive);
        assert!(is_locally_dense(&Graph::empty(21), &params((1, 2), (1, 2)), DensityMode::default()).is_err());
        assert!(DensityParams::new(ratio(0, 1), ratio(1, 2)).is_err());
    }

    #[test]
    fn min_degree_examples() {
        let k4 = named(NamedGraph::Complete(4));
        let r = extract_min_degree_subgraph(&k4).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        assert!(r.degree_guarantee() && r.size_guarantee(4));
        let r = extract_min_degree_subgraph(&named(NamedGraph::Cycle(8))).unwrap();
        assert_eq!(r.vertices.len(), 8);
        // a star has maximum degree far above twice its average degree
        assert!(matches!(
            extract_min_degree_subgraph(&named(NamedGraph::Star(6))),
            Err(LabError::Precondition(_))
        ));
        // K4 plus an isolated vertex: only the isolated vertex goes
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = extract_min_degree_subgraph(&g).unwrap();
        assert_eq!(r.removed, vec![4]);
        assert!(r.degree_guarantee());
    }

    #[test]
    fn codegree_examples() {
        let k4 = named(NamedGraph::Complete(4));
        let r = codegree_bound_check(&k4, &[0, 1, 2, 3]).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (BigUint::from(12u32), ratio(27, 8), true));
        let c6 = named(NamedGraph::Cycle(6));
        let r = codegree_bound_check(&c6, &[0, 1, 2, 3, 4, 5]).unwrap();
        // six pairs at distance two share one neighbour; nothing else is shared
        assert_eq!((r.lhs, r.rhs, r.holds), (BigUint::from(6u32), ratio(5, 2), true));
        assert!(matches!(codegree_bound_check(&c6, &[0, 1]), Err(LabError::Precondition(_))));
    }

    #[test]
    fn weight_matrices() {
        let w = codegree_weight_matrix(&named(NamedGraph::Complete(3))).unwrap();
        assert_eq!((w.weight(0, 0), w.weight(0, 1)), (&ratio(2, 3), &ratio(1, 3)));
        let w = codegree_weight_matrix(&named(NamedGraph::Complete(2))).unwrap();
        assert_eq!((w.weight(0, 0), w.weight(0, 1)), (&ratio(1, 2), &ratio(0, 1)));
        let w = codegree_weight_matrix(&named(NamedGraph::Cycle(4))).unwrap();
        assert_eq!(
            (w.weight(0, 0), w.weight(0, 1), w.weight(0, 2)),
            (&ratio(1, 2), &ratio(0, 1), &ratio(1, 2))
        );
    }
}
