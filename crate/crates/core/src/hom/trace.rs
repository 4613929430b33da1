use num_bigint::BigUint;
use num_traits::Zero;

use super::HomCount;
use crate::error::{LabError, Result};
use crate::graph::Graph;

/// `trace(A^k)` for the adjacency matrix `A` of `G`, by exact integer matrix
/// powering. This is the number of closed walks of length `k`, i.e.
/// `|Hom(C_k, G)|`.
pub fn cycle_hom_trace(k: usize, g: &Graph) -> Result<HomCount> {
    if k < 3 {
        return Err(LabError::InvalidParameter(format!(
            "cycle length must be at least 3, got {k}"
        )));
    }
    let n = g.n();
    let a: Vec<Vec<BigUint>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| BigUint::from(u8::from(g.has_edge(u, v))))
                .collect()
        })
        .collect();
    let mut power = a.clone();
    for _ in 1..k {
        power = multiply(&power, &a);
    }
    Ok((0..n).map(|i| power[i][i].clone()).sum())
}

fn multiply(x: &[Vec<BigUint>], y: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = x.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[k][j].is_zero() {
                    out[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, NamedGraph};

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(cycle_hom_trace(4, &named(NamedGraph::Complete(3))).unwrap(), BigUint::from(18u32));
        assert_eq!(cycle_hom_trace(4, &named(NamedGraph::Complete(2))).unwrap(), BigUint::from(2u32));
        assert_eq!(cycle_hom_trace(3, &named(NamedGraph::Cycle(4))).unwrap(), BigUint::zero());
        // eigenvalues of C_4 are 2, 0, 0, -2
        assert_eq!(cycle_hom_trace(4, &named(NamedGraph::Cycle(4))).unwrap(), BigUint::from(32u32));
        assert!(cycle_hom_trace(2, &named(NamedGraph::Complete(3))).is_err());
    }
}
