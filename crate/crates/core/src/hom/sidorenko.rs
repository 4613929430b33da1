use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{count_homomorphisms, HomCount};
use crate::error::{LabError, Result};
use crate::graph::Graph;
use crate::rational::{self, from_biguint, int, ratio};

/// Outcome of comparing `|Hom(H,G)|` against the random-map count
/// `|V(G)|^{|V(H)|} (2|E(G)| / |V(G)|^2)^{|E(H)|}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SidorenkoReport {
    #[serde(serialize_with = "rational::ser_biguint")]
    pub lhs: HomCount,
    #[serde(serialize_with = "rational::ser_rational")]
    pub rhs: BigRational,
    pub holds: bool,
    /// `lhs / rhs`, absent when `rhs = 0`.
    #[serde(serialize_with = "rational::ser_opt_rational")]
    pub ratio: Option<BigRational>,
}

/// `|V(G)|^{|V(H)|} (2|E(G)| / |V(G)|^2)^{|E(H)|}`; requires `|V(G)| >= 1`.
pub fn sidorenko_rhs(h_vertices: usize, h_edges: usize, g: &Graph) -> Result<BigRational> {
    if g.n() == 0 {
        return Err(LabError::EmptyTarget);
    }
    let n = g.n() as u64;
    let density = ratio(2 * g.num_edges() as u64, n * n);
    Ok(rational::pow(&int(n), h_vertices as i64) * rational::pow(&density, h_edges as i64))
}

/// Exact comparison; never touches floating point.
pub fn sidorenko_check(h: &Graph, g: &Graph) -> Result<SidorenkoReport> {
    let rhs = sidorenko_rhs(h.n(), h.num_edges(), g)?;
    let lhs = count_homomorphisms(h, g);
    Ok(report(lhs, rhs))
}

pub(crate) fn report(lhs: BigUint, rhs: BigRational) -> SidorenkoReport {
    let l = from_biguint(&lhs);
    let holds = l >= rhs;
    let ratio = (!rhs.is_zero()).then(|| l / &rhs);
    SidorenkoReport {
        lhs,
        rhs,
        holds,
        ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, NamedGraph};

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn c4_into_triangle() {
        let r = sidorenko_check(&named(NamedGraph::Cycle(4)), &named(NamedGraph::Complete(3))).unwrap();
        assert_eq!(r.lhs, BigUint::from(18u32));
        assert_eq!(r.rhs, int(16));
        assert!(r.holds);
        assert_eq!(r.ratio, Some(ratio(9, 8)));
    }

    #[test]
    fn single_edge_is_tight() {
        let k2 = named(NamedGraph::Complete(2));
        for g in crate::graph::catalog::graphs_up_to(2, 5) {
            if g.num_edges() == 0 {
                continue;
            }
            let r = sidorenko_check(&k2, &g).unwrap();
            assert_eq!(from_biguint(&r.lhs), r.rhs);
            assert!(r.holds);
        }
    }

    #[test]
    fn edgeless_target_gives_zero_rhs() {
        let r = sidorenko_check(&named(NamedGraph::Cycle(4)), &Graph::empty(3)).unwrap();
        assert!(r.rhs.is_zero() && r.holds && r.ratio.is_none());
        assert_eq!(
            sidorenko_check(&named(NamedGraph::Cycle(4)), &Graph::empty(0)),
            Err(LabError::EmptyTarget)
        );
    }

    #[test]
    fn triangle_fails_on_bipartite_target() {
        let r = sidorenko_check(&named(NamedGraph::Complete(3)), &named(NamedGraph::Cycle(4))).unwrap();
        assert!(!r.holds);
    }
}
