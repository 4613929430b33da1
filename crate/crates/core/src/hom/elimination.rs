//! Homomorphism counting by variable elimination.
//!
//! Each pattern edge is a 0/1 factor over its two endpoints; vertices are
//! summed out one at a time in greedy min-degree order. Table sizes are
//! `|V(G)|^(scope + 1)`, so this is the right tool for large sparse patterns
//! (products with cycles, replacements) into small targets.

use num_bigint::BigUint;
use num_traits::One;

use super::HomCount;
use crate::error::{LabError, Result};
use crate::graph::Graph;

struct Factor {
    /// Pattern vertices, most significant digit first.
    scope: Vec<usize>,
    data: Vec<u128>,
}

/// `|Hom(H, G)|` by variable elimination. Fails with
/// [`LabError::BudgetExceeded`] if an intermediate table would exceed
/// `max_table` entries, or if `|V(G)|^|V(H)|` does not fit in 128 bits.
pub fn count_homomorphisms_elimination(h: &Graph, g: &Graph, max_table: usize) -> Result<HomCount> {
    let n = g.n();
    if n == 0 {
        return Ok(if h.n() == 0 { BigUint::one() } else { BigUint::ZERO });
    }
    if (h.n() as f64) * (n as f64).log2() >= 127.0 {
        return Err(LabError::BudgetExceeded(format!(
            "{n}^{} overflows the 128-bit elimination tables",
            h.n()
        )));
    }

    let adjacency: Vec<u128> = (0..n * n)
        .map(|k| u128::from(g.has_edge(k / n, k % n)))
        .collect();
    let mut factors: Vec<Factor> = h
        .edges()
        .iter()
        .map(|&(u, v)| Factor {
            scope: vec![u, v],
            data: adjacency.clone(),
        })
        .collect();

    let mut eliminated = vec![false; h.n()];
    let mut result: u128 = 1;
    for _ in 0..h.n() {
        // interaction neighborhoods of the remaining vertices
        let mut best: Option<(usize, usize)> = None;
        for v in (0..h.n()).filter(|&v| !eliminated[v]) {
            let mut nb: Vec<usize> = factors
                .iter()
                .filter(|f| f.scope.contains(&v))
                .flat_map(|f| f.scope.iter().copied())
                .filter(|&w| w != v)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            if best.is_none_or(|(_, d)| nb.len() < d) {
                best = Some((v, nb.len()));
            }
        }
        let (v, width) = best.expect("a vertex remains");
        eliminated[v] = true;

        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope.contains(&v));
        factors = rest;
        if touching.is_empty() {
            result = result
                .checked_mul(n as u128)
                .ok_or_else(|| LabError::BudgetExceeded("count overflow".into()))?;
            continue;
        }
        let size = n
            .checked_pow(width as u32 + 1)
            .filter(|&s| s <= max_table)
            .ok_or_else(|| {
                LabError::BudgetExceeded(format!(
                    "elimination table of {n}^{} entries exceeds {max_table}",
                    width + 1
                ))
            })?;
        let mut scope: Vec<usize> = touching
            .iter()
            .flat_map(|f| f.scope.iter().copied())
            .filter(|&w| w != v)
            .collect();
        scope.sort_unstable();
        scope.dedup();
        let new = sum_out(&touching, &scope, v, n, size);
        if new.scope.is_empty() {
            result = result
                .checked_mul(new.data[0])
                .ok_or_else(|| LabError::BudgetExceeded("count overflow".into()))?;
        } else {
            factors.push(new);
        }
    }
    debug_assert!(factors.is_empty());
    Ok(BigUint::from(result))
}

/// Multiplies `factors` and sums out `v`; `scope` is the union of their
/// scopes without `v`.
fn sum_out(factors: &[Factor], scope: &[usize], v: usize, n: usize, size: usize) -> Factor {
    // full assignment = scope digits followed by v's digit
    let full: Vec<usize> = scope.iter().copied().chain(std::iter::once(v)).collect();
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            // stride in the factor's own table for each position of `full`
            full.iter()
                .map(|w| match f.scope.iter().position(|x| x == w) {
                    Some(p) => n.pow((f.scope.len() - 1 - p) as u32),
                    None => 0,
                })
                .collect()
        })
        .collect();
    let out_len = size / n;
    let mut data = vec![0u128; out_len];
    let mut digits = vec![0usize; full.len()];
    let mut idx = vec![0usize; factors.len()];
    for out in data.iter_mut() {
        // digits[..scope.len()] fixed; iterate v's digit
        let mut sum = 0u128;
        for x in 0..n {
            digits[full.len() - 1] = x;
            let mut prod = 1u128;
            for (fi, f) in factors.iter().enumerate() {
                let i: usize = idx[fi] + strides[fi][full.len() - 1] * x;
                prod *= f.data[i];
                if prod == 0 {
                    break;
                }
            }
            sum += prod;
        }
        *out = sum;
        // advance scope digits (odometer) and factor base indices
        for pos in (0..scope.len()).rev() {
            digits[pos] += 1;
            for (fi, s) in strides.iter().enumerate() {
                idx[fi] += s[pos];
            }
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
            for (fi, s) in strides.iter().enumerate() {
                idx[fi] -= s[pos] * n;
            }
        }
    }
    Factor {
        scope: scope.to_vec(),
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog::graphs_up_to;
    use crate::graph::construct::{build_named_graph, cartesian_product, NamedGraph};
    use crate::hom::{count_homomorphisms, cycle_hom_trace};

    #[test]
    fn agrees_with_backtracking_on_small_pairs() {
        let patterns = graphs_up_to(1, 5);
        let targets = graphs_up_to(1, 4);
        for h in &patterns {
            for g in &targets {
                assert_eq!(
                    count_homomorphisms_elimination(h, g, 1 << 20).unwrap(),
                    count_homomorphisms(h, g)
                );
            }
        }
    }

    #[test]
    fn product_with_cycle() {
        let k2 = build_named_graph(&NamedGraph::Complete(2)).unwrap();
        let c6 = build_named_graph(&NamedGraph::Cycle(6)).unwrap();
        let k4 = build_named_graph(&NamedGraph::Complete(4)).unwrap();
        let prism = cartesian_product(&k2, &c6);
        assert_eq!(
            count_homomorphisms_elimination(&prism, &k4, 1 << 22).unwrap(),
            count_homomorphisms(&prism, &k4)
        );
        assert_eq!(
            count_homomorphisms_elimination(&c6, &k4, 1 << 22).unwrap(),
            cycle_hom_trace(6, &k4).unwrap()
        );
    }

    #[test]
    fn table_budget_is_enforced() {
        let k5 = build_named_graph(&NamedGraph::Complete(5)).unwrap();
        assert!(matches!(
            count_homomorphisms_elimination(&k5, &k5, 100),
            Err(LabError::BudgetExceeded(_))
        ));
    }
}
