//! Brute-force isomorphism and exhaustive catalogs of small graphs.
//!
//! Everything here is meant for desk-scale instances (at most a dozen
//! vertices for isomorphism tests, at most 7 vertices for the graph catalog).

use std::collections::BTreeSet;

use super::Graph;

/// Isomorphism test by backtracking over degree-compatible assignments.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b, &[]).is_some()
}

/// A bijection `φ` with `φ(x) = y` for every pinned `(x, y)` such that
/// `{u,v} ∈ E(a) ⇔ {φ(u),φ(v)} ∈ E(b)`; `result[u] = φ(u)`.
pub fn find_isomorphism(a: &Graph, b: &Graph, pinned: &[(usize, usize)]) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.num_edges() != b.num_edges() {
        return None;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    let (orig_da, orig_db) = (da.clone(), db.clone());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let n = a.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(x, y) in pinned {
        if x >= n || y >= n || orig_da[x] != orig_db[y] {
            return None;
        }
        if map[x] != usize::MAX && map[x] != y {
            return None;
        }
        if map[x] == usize::MAX && used[y] {
            return None;
        }
        map[x] = y;
        used[y] = true;
    }
    for &(x, _) in pinned {
        for &(x2, _) in pinned {
            if a.has_edge(x, x2) != b.has_edge(map[x], map[x2]) {
                return None;
            }
        }
    }
    // BFS-ish order: pinned first, then by decreasing degree
    let mut order: Vec<usize> = (0..n).filter(|&v| map[v] == usize::MAX).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(orig_da[v]));
    let ok = extend(a, b, &orig_da, &orig_db, &order, 0, &mut map, &mut used);
    ok.then_some(map)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Graph,
    b: &Graph,
    da: &[usize],
    db: &[usize],
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(pos) else {
        return true;
    };
    for y in 0..b.n() {
        if used[y] || db[y] != da[u] {
            continue;
        }
        let consistent = (0..a.n())
            .filter(|&x| map[x] != usize::MAX)
            .all(|x| a.has_edge(u, x) == b.has_edge(y, map[x]));
        if !consistent {
            continue;
        }
        map[u] = y;
        used[y] = true;
        if extend(a, b, da, db, order, pos + 1, map, used) {
            return true;
        }
        map[u] = usize::MAX;
        used[y] = false;
    }
    false
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![0; n]; n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            idx[u][v] = k;
            idx[v][u] = k;
            k += 1;
        }
    }
    idx
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All graphs on exactly `n` vertices up to isomorphism (`n <= 7`), each
/// represented by the labeled graph whose edge bitmask is smallest among its
/// relabelings. Ordered by edge count, then bitmask.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "graph catalog is limited to 7 vertices");
    if n == 0 {
        return vec![Graph::empty(0)];
    }
    let idx = pair_index(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    // For every permutation, where each pair bit is sent.
    let moved: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| idx[p[u]][p[v]]).collect())
        .collect();
    let total = 1u64 << pairs.len();
    let mut canon = BTreeSet::new();
    for mask in 0..total {
        let mut best = mask;
        for m in &moved {
            let mut img = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                img |= 1 << m[b];
                bits &= bits - 1;
            }
            if img < best {
                best = img;
                break;
            }
        }
        if best == mask {
            canon.insert((mask.count_ones(), mask));
        }
    }
    canon
        .into_iter()
        .map(|(_, mask)| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e);
            Graph::new(n, edges).expect("catalog graph is simple")
        })
        .collect()
}

/// All automorphisms of `g` (as vertex maps), stopping after `max`.
pub fn automorphisms(g: &Graph, max: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>, max: usize) {
        if out.len() >= max {
            return;
        }
        let u = map.len();
        if u == g.n() {
            out.push(map.clone());
            return;
        }
        for y in 0..g.n() {
            if used[y] || g.degree(y) != g.degree(u) {
                continue;
            }
            if (0..u).any(|w| g.has_edge(u, w) != g.has_edge(y, map[w])) {
                continue;
            }
            used[y] = true;
            map.push(y);
            extend(g, map, used, out, max);
            map.pop();
            used[y] = false;
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()], &mut out, max);
    out
}

/// All graphs with between `min_n` and `max_n` vertices, up to isomorphism.
pub fn graphs_up_to(min_n: usize, max_n: usize) -> Vec<Graph> {
    (min_n..=max_n).flat_map(all_graphs).collect()
}

/// Connected graphs with `1..=max_n` vertices, up to isomorphism.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    graphs_up_to(1, max_n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}

/// All trees on `n >= 1` vertices up to isomorphism, generated from Prüfer
/// sequences and deduplicated by a center-rooted canonical encoding.
pub fn all_trees(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    if n <= 2 {
        return vec![Graph::new(n, (1..n).map(|v| (0, v))).unwrap()];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        let t = prufer_tree(n, &seq);
        if seen.insert(tree_canonical_code(&t)) {
            out.push(t);
        }
        // next sequence in lexicographic order
        let mut i = seq.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
        }
    }
}

pub fn trees_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(all_trees).collect()
}

fn prufer_tree(n: usize, seq: &[usize]) -> Graph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).unwrap()
}

/// Canonical string of a tree up to isomorphism (AHU encoding rooted at the
/// center, minimized over the two centers of a bicentral tree).
pub fn tree_canonical_code(t: &Graph) -> String {
    fn encode(t: &Graph, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| encode(t, w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    tree_centers(t)
        .into_iter()
        .map(|c| encode(t, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn tree_centers(t: &Graph) -> Vec<usize> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &l in &leaves {
            degree[l] = 0;
            for &w in t.neighbors(l) {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(automorphisms(&c5, usize::MAX).len(), 10);
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(automorphisms(&k4, usize::MAX).len(), 24);
        assert_eq!(automorphisms(&k4, 5).len(), 5);
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(automorphisms(&p3, usize::MAX), vec![vec![0, 1, 2], vec![2, 1, 0]]);
    }

    #[test]
    fn catalog_sizes_match_known_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| all_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
        let connected: Vec<usize> = (1..=5)
            .map(|n| all_graphs(n).iter().filter(|g| g.is_connected()).count())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn tree_counts_match_known_values() {
        let counts: Vec<usize> = (1..=8).map(|n| all_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
        assert!(trees_up_to(8).iter().all(Graph::is_tree));
    }

    #[test]
    fn isomorphism_respects_pins() {
        let p = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let q = Graph::new(3, [(0, 2), (2, 1)]).unwrap();
        assert!(are_isomorphic(&p, &q));
        assert_eq!(find_isomorphism(&p, &q, &[(1, 2)]).unwrap()[1], 2);
        assert!(find_isomorphism(&p, &q, &[(1, 0)]).is_none());
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!are_isomorphic(&star, &path));
    }
}
