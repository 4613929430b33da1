//! Exact homomorphism counting and enumeration.
//!
//! The general counter is a bitset backtracking search. Pattern vertices are
//! grouped by connected component (counts multiply across components, and an
//! isolated vertex contributes a factor `|V(G)|`). Within a component the
//! search order starts from a maximum-degree vertex and always extends along
//! already-placed neighbors, preferring high degree. The order ends with an
//! independent "tail" of vertices whose neighbors are all placed earlier;
//! once the prefix is assigned, the tail contributes the product of its
//! candidate-set sizes.

mod elimination;
mod sidorenko;
mod trace;
mod tree;

pub use elimination::count_homomorphisms_elimination;
pub use sidorenko::{sidorenko_check, sidorenko_rhs, SidorenkoReport};
pub use trace::cycle_hom_trace;
pub use tree::count_tree_homomorphisms;

use std::ops::AddAssign;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::graph::{Graph, WeightedGraph};

/// `|Hom(H, G)|` for the pair given to [`count_homomorphisms`].
pub type HomCount = BigUint;

pub fn count_homomorphisms(h: &Graph, g: &Graph) -> HomCount {
    let n = g.n();
    let mut total = BigUint::one();
    let rows = g.bit_rows();
    for comp in h.components() {
        if comp.len() == 1 {
            total *= BigUint::from(n);
            continue;
        }
        if n == 0 {
            return BigUint::zero();
        }
        let plan = SearchPlan::new(h, &comp);
        // u128 is safe whenever n^|comp| fits.
        let fits = (comp.len() as f64) * (n as f64).log2() < 127.0;
        let c = if fits {
            BigUint::from(plan.count::<u128>(&rows, n))
        } else {
            plan.count::<BigUint>(&rows, n)
        };
        if c.is_zero() {
            return c;
        }
        total *= c;
    }
    total
}

/// `|Hom(H, G)|` for connected `H`, given a partition of `V(G)` into
/// classes on which the number of maps sending a fixed vertex of `H` to `x`
/// is constant (for instance the orbits of a group of automorphisms of
/// `G`). Only one representative per class is searched.
pub fn count_homomorphisms_by_orbits(h: &Graph, g: &Graph, orbits: &[Vec<usize>]) -> Result<HomCount> {
    if h.n() == 0 || !h.is_connected() {
        return Err(LabError::InvalidParameter("the pattern must be connected".into()));
    }
    let n = g.n();
    let mut seen = vec![false; n];
    for &x in orbits.iter().flatten() {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(LabError::InvalidParameter("orbits must partition the target".into()));
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(LabError::InvalidParameter("orbits must partition the target".into()));
    }
    if h.n() == 1 {
        return Ok(BigUint::from(n));
    }
    let comp: Vec<usize> = (0..h.n()).collect();
    let plan = SearchPlan::new(h, &comp);
    let roots: Vec<(usize, u64)> = orbits
        .iter()
        .filter(|o| !o.is_empty())
        .map(|o| (o[0], o.len() as u64))
        .collect();
    let rows = g.bit_rows();
    let fits = (h.n() as f64) * (n as f64).log2() < 127.0;
    Ok(if fits {
        BigUint::from(plan.count_from::<u128>(&rows, n, &roots))
    } else {
        plan.count_from::<BigUint>(&rows, n, &roots)
    })
}

trait Tally: Clone + Send + Zero + AddAssign + for<'a> AddAssign<&'a Self> {
    fn from_u64(x: u64) -> Self;
    fn mul_u64(&self, x: u64) -> Self;
}

impl Tally for u128 {
    fn from_u64(x: u64) -> Self {
        u128::from(x)
    }
    fn mul_u64(&self, x: u64) -> Self {
        self * u128::from(x)
    }
}

impl Tally for BigUint {
    fn from_u64(x: u64) -> Self {
        BigUint::from(x)
    }
    fn mul_u64(&self, x: u64) -> Self {
        self * x
    }
}

struct SearchPlan {
    /// Prefix vertices (pattern labels) in search order.
    prefix: Vec<usize>,
    /// For each prefix position, the positions of its earlier neighbors.
    prefix_back: Vec<Vec<usize>>,
    /// For each tail vertex, the prefix positions of its neighbors.
    tail_back: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(h: &Graph, comp: &[usize]) -> Self {
        let mut order = Vec::with_capacity(comp.len());
        let mut placed = vec![false; h.n()];
        let mut links = vec![0usize; h.n()];
        let first = *comp
            .iter()
            .max_by_key(|&&v| (h.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        let mut next = Some(first);
        while let Some(v) = next {
            placed[v] = true;
            order.push(v);
            for &w in h.neighbors(v) {
                links[w] += 1;
            }
            next = comp
                .iter()
                .copied()
                .filter(|&w| !placed[w])
                .max_by_key(|&w| (links[w], h.degree(w), std::cmp::Reverse(w)));
        }

        // independent tail, scanned from the end of the order
        let mut in_tail = vec![false; h.n()];
        for &v in order.iter().rev() {
            if h.neighbors(v).iter().all(|&w| !in_tail[w]) {
                in_tail[v] = true;
            }
        }
        // keep at least one vertex in the prefix
        if order.iter().all(|&v| in_tail[v]) {
            in_tail[order[0]] = false;
        }
        let prefix: Vec<usize> = order.iter().copied().filter(|&v| !in_tail[v]).collect();
        let tail: Vec<usize> = order.iter().copied().filter(|&v| in_tail[v]).collect();
        let mut pos = vec![usize::MAX; h.n()];
        for (i, &v) in prefix.iter().enumerate() {
            pos[v] = i;
        }
        let prefix_back = prefix
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                h.neighbors(v)
                    .iter()
                    .map(|&w| pos[w])
                    .filter(|&p| p < i)
                    .collect()
            })
            .collect();
        let tail_back = tail
            .iter()
            .map(|&v| h.neighbors(v).iter().map(|&w| pos[w]).collect())
            .collect();
        SearchPlan {
            prefix,
            prefix_back,
            tail_back,
        }
    }

    fn count<T: Tally>(&self, rows: &[Vec<u64>], n: usize) -> T {
        let roots: Vec<(usize, u64)> = (0..n).map(|x| (x, 1)).collect();
        self.count_from(rows, n, &roots)
    }

    /// `Σ w · #{maps with the first prefix vertex on x}` over `(x, w)`.
    fn count_from<T: Tally>(&self, rows: &[Vec<u64>], n: usize, roots: &[(usize, u64)]) -> T {
        let words = n.div_ceil(64);
        roots
            .par_iter()
            .map(|&(x, w)| {
                let mut state = SearchState {
                    image: vec![0; self.prefix.len()],
                    buffers: vec![vec![0u64; words]; self.prefix.len() + 1],
                    acc: T::zero(),
                };
                state.image[0] = x;
                self.descend(rows, n, 1, &mut state);
                state.acc.mul_u64(w)
            })
            .reduce(T::zero, |mut a, b| {
                a += b;
                a
            })
    }

    fn candidates(rows: &[Vec<u64>], n: usize, back: &[usize], image: &[usize], out: &mut [u64]) {
        if back.is_empty() {
            out.fill(u64::MAX);
            if n % 64 != 0 {
                *out.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
            }
            return;
        }
        out.copy_from_slice(&rows[image[back[0]]]);
        for &p in &back[1..] {
            for (o, r) in out.iter_mut().zip(&rows[image[p]]) {
                *o &= r;
            }
        }
    }

    fn descend<T: Tally>(&self, rows: &[Vec<u64>], n: usize, depth: usize, st: &mut SearchState<T>) {
        if depth == self.prefix.len() {
            let mut product = T::from_u64(1);
            let buf = &mut st.buffers[depth];
            for back in &self.tail_back {
                Self::candidates(rows, n, back, &st.image, buf);
                let c: u64 = buf.iter().map(|w| u64::from(w.count_ones())).sum();
                if c == 0 {
                    return;
                }
                product = product.mul_u64(c);
            }
            st.acc += &product;
            return;
        }
        let mut buf = std::mem::take(&mut st.buffers[depth]);
        Self::candidates(rows, n, &self.prefix_back[depth], &st.image, &mut buf);
        for (wi, &word) in buf.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                st.image[depth] = wi * 64 + b;
                self.descend(rows, n, depth + 1, st);
            }
        }
        st.buffers[depth] = buf;
    }
}

struct SearchState<T> {
    image: Vec<usize>,
    buffers: Vec<Vec<u64>>,
    acc: T,
}

/// All of `Hom(H, G)` in lexicographic order of image arrays. Fails with
/// [`LabError::BudgetExceeded`] once more than `max` maps are found.
pub fn enumerate_homomorphisms(h: &Graph, g: &Graph, max: usize) -> Result<Vec<Vec<usize>>> {
    enumerate_extensions(h, g, &vec![None; h.n()], max)
}

/// All homomorphisms `H → G` that agree with `fixed` wherever it is `Some`,
/// in lexicographic order. An inconsistent `fixed` yields an empty list.
pub fn enumerate_extensions(
    h: &Graph,
    g: &Graph,
    fixed: &[Option<usize>],
    max: usize,
) -> Result<Vec<Vec<usize>>> {
    assert_eq!(fixed.len(), h.n());
    if let Some(&bad) = fixed.iter().flatten().find(|&&x| x >= g.n()) {
        return Err(LabError::VertexOutOfRange {
            vertex: bad,
            n: g.n(),
        });
    }
    let mut out = Vec::new();
    let mut image = vec![0usize; h.n()];
    extend_lex(h, g, fixed, 0, &mut image, &mut out, max)?;
    Ok(out)
}

fn extend_lex(
    h: &Graph,
    g: &Graph,
    fixed: &[Option<usize>],
    v: usize,
    image: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    max: usize,
) -> Result<()> {
    if v == h.n() {
        if out.len() == max {
            return Err(LabError::BudgetExceeded(format!(
                "more than {max} homomorphisms"
            )));
        }
        out.push(image.clone());
        return Ok(());
    }
    let earlier: Vec<usize> = h.neighbors(v).iter().copied().filter(|&w| w < v).collect();
    let ok = |x: usize, image: &[usize]| earlier.iter().all(|&w| g.has_edge(image[w], x));
    let candidates: Box<dyn Iterator<Item = usize>> = match (fixed[v], earlier.first()) {
        (Some(x), _) => Box::new(std::iter::once(x)),
        (None, Some(&w)) => Box::new(g.neighbors(image[w]).to_vec().into_iter()),
        (None, None) => Box::new(0..g.n()),
    };
    for x in candidates {
        if ok(x, image) {
            image[v] = x;
            extend_lex(h, g, fixed, v + 1, image, out, max)?;
        }
    }
    Ok(())
}

/// `Σ_{x_1..x_h ∈ V(W)} Π_{{i,j} ∈ E(H)} W(x_i, x_j)` over all (not
/// necessarily distinct) assignments.
pub fn weighted_hom_count(h: &Graph, w: &WeightedGraph) -> BigRational {
    fn go(
        h: &Graph,
        w: &WeightedGraph,
        v: usize,
        image: &mut [usize],
        partial: &BigRational,
        acc: &mut BigRational,
    ) {
        if v == h.n() {
            *acc += partial;
            return;
        }
        for x in 0..w.n() {
            let mut p = partial.clone();
            for &u in h.neighbors(v).iter().filter(|&&u| u < v) {
                p *= w.weight(image[u], x);
                if p.is_zero() {
                    break;
                }
            }
            if p.is_zero() {
                continue;
            }
            image[v] = x;
            go(h, w, v + 1, image, &p, acc);
        }
    }
    let mut acc = BigRational::zero();
    let mut image = vec![0; h.n()];
    go(h, w, 0, &mut image, &BigRational::one(), &mut acc);
    acc
}

/// `Σ_{x ∈ V(G)^{V(H)}} Π_{{i,j} ∈ E(H)} M[x_i][x_j]^t` for a nonnegative
/// integer matrix `M`.
pub fn integer_weighted_sum(h: &Graph, m: &[Vec<usize>], t: u32) -> BigUint {
    let n = m.len();
    let powered: Vec<Vec<BigUint>> = m
        .iter()
        .map(|row| row.iter().map(|&x| num_traits::pow(BigUint::from(x), t as usize)).collect())
        .collect();
    fn go(
        h: &Graph,
        p: &[Vec<BigUint>],
        v: usize,
        image: &mut [usize],
        partial: &BigUint,
        acc: &mut BigUint,
    ) {
        if v == h.n() {
            *acc += partial;
            return;
        }
        for x in 0..p.len() {
            let mut prod = partial.clone();
            for &u in h.neighbors(v).iter().filter(|&&u| u < v) {
                prod *= &p[image[u]][x];
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            image[v] = x;
            go(h, p, v + 1, image, &prod, acc);
        }
    }
    if n == 0 {
        return if h.n() == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let mut acc = BigUint::zero();
    let mut image = vec![0; h.n()];
    go(h, &powered, 0, &mut image, &BigUint::one(), &mut acc);
    acc
}
