//! Codegree sums against homomorphism counts of subdivisions and
//! `K_{2,t}`-replacements, and the triangle Hölder check.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{LabError, Result};
use crate::graph::construct::{k2t_replacement, subdivision};
use crate::graph::Graph;
use crate::hom::{count_homomorphisms, count_homomorphisms_elimination, integer_weighted_sum};
use crate::rational::{self, from_biguint, int};
use crate::report::{AuditReport, Relation};

/// Largest elimination table used for replacement counts.
const MAX_TABLE: usize = 1 << 24;

fn require_terms(g: &Graph, h: usize, max_terms: u64) -> Result<()> {
    let terms = (g.n() as f64).powi(h as i32);
    if terms > max_terms as f64 {
        return Err(LabError::BudgetExceeded(format!(
            "{}^{h} codegree terms (limit {max_terms})",
            g.n()
        )));
    }
    if g.n() == 0 {
        return Err(LabError::EmptyTarget);
    }
    Ok(())
}

fn inputs(h: &Graph, g: &Graph) -> String {
    format!("H: n={} m={}; G: n={} m={}", h.n(), h.num_edges(), g.n(), g.num_edges())
}

/// `Σ_x ∏_{ij ∈ E(H)} d(x_i, x_j) = |Hom(H_1, G)|` with `H_1` the
/// subdivision of `H`. The sum has `|V(G)|^{|V(H)|}` terms.
pub fn subdivision_identity_check(h: &Graph, g: &Graph, max_terms: u64) -> Result<AuditReport> {
    require_terms(g, h.n(), max_terms)?;
    let lhs = integer_weighted_sum(h, &g.codegree_matrix(), 1);
    let rhs = count_homomorphisms(&subdivision(h), g);
    Ok(AuditReport::compare(
        "subdivision_identity",
        inputs(h, g),
        &from_biguint(&lhs),
        Relation::Eq,
        &from_biguint(&rhs),
    ))
}

/// Two rows: the identity `Σ_x H_1(x)^t = |Hom(K_{2,t}-replacement, G)|`
/// and the convexity step `Σ_x H_1(x)^t ≥ n^h (Σ_x H_1(x) / n^h)^t`.
pub fn replacement_convexity_check(h: &Graph, g: &Graph, t: u32, max_terms: u64) -> Result<Vec<AuditReport>> {
    if t == 0 {
        return Err(LabError::InvalidParameter("t must be at least 1".into()));
    }
    require_terms(g, h.n(), max_terms)?;
    let codegrees = g.codegree_matrix();
    let powered = integer_weighted_sum(h, &codegrees, t);
    let replaced = k2t_replacement(h, t as usize)?;
    let count = count_homomorphisms_elimination(&replaced, g, MAX_TABLE)?;
    let what = format!("{}; t={t}", inputs(h, g));
    let first = from_biguint(&integer_weighted_sum(h, &codegrees, 1));
    let nh = rational::pow(&int(g.n() as u64), h.n() as i64);
    let convex = &nh * rational::pow(&(first / &nh), i64::from(t));
    Ok(vec![
        AuditReport::compare(
            "replacement_identity",
            &what,
            &from_biguint(&powered),
            Relation::Eq,
            &from_biguint(&count),
        ),
        AuditReport::compare("replacement_convexity", &what, &from_biguint(&powered), Relation::Ge, &convex),
    ])
}

/// The triangle with its three edges replaced by `K_{2,r}`, `K_{2,s}` and
/// `K_{2,t}`. Vertices `0, 1, 2` are the triangle; the middle vertices
/// follow in the order `01`, `12`, `20`.
pub fn triangle_replacement(r: usize, s: usize, t: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * (r + s + t));
    let mut next = 3;
    for (a, b, k) in [(0, 1, r), (1, 2, s), (2, 0, t)] {
        for _ in 0..k {
            edges.push((a, next));
            edges.push((b, next));
            next += 1;
        }
    }
    Graph::new(next, edges).expect("replacement of a triangle is simple")
}

/// `Σ_{x,y,z} d(x,y)^a d(y,z)^b d(z,x)^c`.
fn triangle_sum(d: &[Vec<usize>], a: u32, b: u32, c: u32) -> BigUint {
    let n = d.len();
    let pow = |e: u32| -> Vec<Vec<BigUint>> {
        d.iter()
            .map(|row| row.iter().map(|&x| BigUint::from(x).pow(e)).collect())
            .collect()
    };
    let (pa, pb, pc) = (pow(a), pow(b), pow(c));
    let mut total = BigUint::ZERO;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                total += &pa[x][y] * &pb[y][z] * &pc[z][x];
            }
        }
    }
    total
}

/// With `X = E[d(x,y)^r d(y,z)^s d(z,x)^t]`, `E = E[d(x,y)d(y,z)d(z,x)]`
/// and `m = r + s + t`, the rows are:
///
/// * `count`: `n³ X = |Hom(triangle_replacement(r,s,t), G)|`;
/// * `symmetry`: `X³` equals the product of the three rotated expectations;
/// * `holder_step` (only when `3 | m`): `X ≥ E[(d d d)^{m/3}]`;
/// * `holder`: `X³ ≥ E^m`.
pub fn holder_triangle_check(g: &Graph, r: u32, s: u32, t: u32) -> Result<Vec<AuditReport>> {
    if r == 0 || s == 0 || t == 0 {
        return Err(LabError::InvalidParameter("exponents must be positive".into()));
    }
    if g.n() == 0 {
        return Err(LabError::EmptyTarget);
    }
    let d = g.codegree_matrix();
    let n3 = rational::pow(&int(g.n() as u64), 3);
    let expect = |a, b, c| from_biguint(&triangle_sum(&d, a, b, c)) / &n3;
    let x = expect(r, s, t);
    let e = expect(1, 1, 1);
    let m = r + s + t;
    let what = format!("G: n={} m={}; r={r} s={s} t={t}", g.n(), g.num_edges());

    let replaced = triangle_replacement(r as usize, s as usize, t as usize);
    let count = count_homomorphisms_elimination(&replaced, g, MAX_TABLE)?;
    let mut rows = vec![AuditReport::compare(
        "count",
        &what,
        &(&x * &n3),
        Relation::Eq,
        &from_biguint(&count),
    )];
    let cube = rational::pow(&x, 3);
    let rotated = &x * expect(s, t, r) * expect(t, r, s);
    rows.push(AuditReport::compare("symmetry", &what, &cube, Relation::Eq, &rotated));
    if m % 3 == 0 {
        let q = m / 3;
        rows.push(AuditReport::compare("holder_step", &what, &x, Relation::Ge, &expect(q, q, q)));
    }
    let rhs = rational::pow(&e, i64::from(m));
    let mut last = AuditReport::compare("holder", &what, &cube, Relation::Ge, &rhs);
    if e.is_zero() {
        last = last.with_witness("E[ddd] = 0");
    }
    rows.push(last);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct::{build_named_graph, NamedGraph};

    fn named(spec: NamedGraph) -> Graph {
        build_named_graph(&spec).unwrap()
    }

    #[test]
    fn subdivision_values() {
        let k2 = named(NamedGraph::Complete(2));
        let k3 = named(NamedGraph::Complete(3));
        let r = subdivision_identity_check(&k2, &k3, 1000).unwrap();
        assert!(r.holds() && r.lhs == "12");
        let r = subdivision_identity_check(&k2, &k2, 1000).unwrap();
        assert!(r.holds() && r.lhs == "2");
        let r = subdivision_identity_check(&k3, &named(NamedGraph::Complete(4)), 1000).unwrap();
        assert!(r.holds());
        assert!(subdivision_identity_check(&k3, &k3, 10).is_err());
    }

    #[test]
    fn replacement_values() {
        let k2 = named(NamedGraph::Complete(2));
        let k3 = named(NamedGraph::Complete(3));
        let rows = replacement_convexity_check(&k2, &k3, 2, 1000).unwrap();
        assert!(rows.iter().all(AuditReport::holds));
        assert_eq!((rows[0].lhs.as_str(), rows[1].rhs.as_str()), ("18", "16"));
        let rows = replacement_convexity_check(&k2, &k3, 1, 1000).unwrap();
        assert_eq!(rows[0].lhs, "12");
        assert_eq!(rows[1].rhs, "12");
    }

    #[test]
    fn holder_values() {
        let k3 = named(NamedGraph::Complete(3));
        let rows = holder_triangle_check(&k3, 1, 1, 1).unwrap();
        assert!(rows.iter().all(AuditReport::holds));
        let last = rows.last().unwrap();
        assert_eq!(last.lhs, last.rhs);
        let rows = holder_triangle_check(&k3, 2, 1, 1).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(AuditReport::holds));
        // X for K3: (d(x,y)^2 d(y,z) d(z,x)) summed, with d = 2 on the diagonal
        let d = k3.codegree_matrix();
        let mut sum = 0u64;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    sum += (d[x][y] * d[x][y] * d[y][z] * d[z][x]) as u64;
                }
            }
        }
        assert_eq!(rows[0].lhs, sum.to_string());
        let k2 = named(NamedGraph::Complete(2));
        for (r, s, t) in [(1, 2, 3), (3, 3, 3), (2, 2, 1)] {
            assert!(holder_triangle_check(&k2, r, s, t).unwrap().iter().all(AuditReport::holds));
        }
        assert_eq!(triangle_replacement(1, 2, 3).num_edges(), 12);
    }
}
