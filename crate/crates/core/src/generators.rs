//! Instance generators: random valid decompositions, the scaling families and
//! the small connected-graph corpus.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decomposition::{PathDecomposition, UnionFind};
use crate::graph::{Graph, Vertex};

/// The decomposition induced by a vertex order: bag `i` holds the `i`-th
/// vertex and every earlier vertex with a neighbor at position `i` or later.
/// Its width is the vertex separation of the order.
pub fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> PathDecomposition {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // Vertex v stays in every bag from its own position to its last neighbor's.
    let last: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&w| pos[w]).fold(pos[v], usize::max))
        .collect();
    let mut bags = vec![Vec::new(); order.len()];
    for v in 0..n {
        for bag in &mut bags[pos[v]..=last[v]] {
            bag.push(v);
        }
    }
    PathDecomposition::new(bags)
}

/// A random valid decomposition of `g`: the decomposition of a random vertex
/// order, with up to `widen` random vertex intervals stretched by one bag.
/// Stretching an interval keeps it contiguous, so the result stays valid.
pub fn random_decomposition<R: Rng>(g: &Graph, rng: &mut R, widen: usize) -> PathDecomposition {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.shuffle(rng);
    let base = decomposition_from_order(g, &order);
    let mut bags = base.into_bags();
    let d = bags.len();
    if d < 2 || g.n() == 0 {
        return PathDecomposition::new(bags);
    }
    for _ in 0..rng.gen_range(0..=widen) {
        let v = rng.gen_range(0..g.n());
        let first = bags.iter().position(|b| b.contains(&v)).unwrap();
        let last = bags.iter().rposition(|b| b.contains(&v)).unwrap();
        if rng.gen_bool(0.5) && first > 0 {
            bags[first - 1].push(v);
        } else if last + 1 < d {
            bags[last + 1].push(v);
        }
    }
    PathDecomposition::new(bags)
}

/// A caterpillar with `spine` spine vertices, one leaf each, and a
/// decomposition of width `k` (`k >= 2`) whose bags are windows of `k`
/// consecutive spine vertices plus the leaf of the first one.
pub fn caterpillar(spine: usize, k: usize) -> (Graph, PathDecomposition) {
    assert!(k >= 2 && spine >= k);
    let leaf = |i: usize| spine + i;
    let mut edges = Vec::with_capacity(2 * spine);
    for i in 0..spine {
        if i + 1 < spine {
            edges.push((i, i + 1));
        }
        edges.push((i, leaf(i)));
    }
    let g = Graph::from_edges(2 * spine, &edges).expect("caterpillar edges are simple");
    let mut bags = Vec::with_capacity(spine);
    for i in 0..spine {
        let hi = (i + k).min(spine);
        let lo = hi.saturating_sub(k).min(i);
        let mut b: Vec<Vertex> = (lo..hi).collect();
        b.push(leaf(i));
        bags.push(b);
    }
    (g, PathDecomposition::new(bags))
}

/// A `rows x cols` grid with each edge outside a random spanning tree dropped
/// with probability one half, together with the column-major sliding window
/// decomposition of width `rows`. Dropping edges leaves the windows valid but
/// makes many bags and prefixes disconnected.
pub fn sparse_grid<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> (Graph, PathDecomposition) {
    assert!(rows >= 1 && cols >= 1);
    let id = |r: usize, c: usize| c * rows + r;
    let n = rows * cols;
    let mut all = Vec::with_capacity(2 * n);
    for c in 0..cols {
        for r in 0..rows {
            if r + 1 < rows {
                all.push((id(r, c), id(r + 1, c)));
            }
            if c + 1 < cols {
                all.push((id(r, c), id(r, c + 1)));
            }
        }
    }
    all.shuffle(rng);
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(all.len());
    for (u, v) in all {
        if uf.union(u, v) || rng.gen_bool(0.5) {
            edges.push((u, v));
        }
    }
    let g = Graph::from_edges(n, &edges).expect("grid edges are simple");
    let bags = (0..n).map(|v| (v..(v + rows + 1).min(n)).collect()).collect();
    (g, PathDecomposition::new(bags))
}

/// All connected graphs on `n` vertices, one per isomorphism class (`n <= 7`).
///
/// Classes on `n` vertices are obtained by attaching a new vertex to every
/// class on `n - 1` vertices in every possible way, then deduplicated by a
/// canonical form minimized over all vertex permutations.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "isomorphism classes are only enumerated up to 7 vertices");
    if n == 0 {
        return Vec::new();
    }
    // Classes of all (not necessarily connected) graphs, as canonical masks.
    let mut classes: Vec<u32> = vec![0];
    for k in 2..=n {
        let perms = permutations(k);
        let mut next: HashSet<u32> = HashSet::new();
        for &mask in &classes {
            for nbrs in 0u32..(1 << (k - 1)) {
                let mut m = mask;
                for u in 0..k - 1 {
                    if nbrs >> u & 1 == 1 {
                        m |= 1 << pair_index(u, k - 1);
                    }
                }
                next.insert(canonical(m, k, &perms));
            }
        }
        classes = next.into_iter().collect();
        classes.sort_unstable();
    }
    classes
        .into_iter()
        .map(|m| graph_from_mask(m, n))
        .filter(Graph::is_connected)
        .collect()
}

/// All connected labelled graphs on `n` vertices (`n <= 7`), in mask order.
pub fn connected_graphs_labelled(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 7, "labelled enumeration is limited to 7 vertices");
    let pairs = n * n.saturating_sub(1) / 2;
    (0u32..(1 << pairs))
        .filter(move |&m| n > 0 && mask_connected(m, n))
        .map(move |m| graph_from_mask(m, n))
}

/// Index of the pair `u < v` in the colexicographic pair order.
fn pair_index(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

fn graph_from_mask(mask: u32, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if mask >> pair_index(u, v) & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("mask graphs are simple")
}

fn mask_connected(mask: u32, n: usize) -> bool {
    let mut uf = UnionFind::new(n);
    let mut parts = n;
    for v in 1..n {
        for u in 0..v {
            if mask >> pair_index(u, v) & 1 == 1 && uf.union(u, v) {
                parts -= 1;
            }
        }
    }
    parts == 1
}

fn canonical(mask: u32, n: usize, perms: &[Vec<usize>]) -> u32 {
    let edges: Vec<(usize, usize)> = (1..n)
        .flat_map(|v| (0..v).map(move |u| (u, v)))
        .filter(|&(u, v)| mask >> pair_index(u, v) & 1 == 1)
        .collect();
    perms
        .iter()
        .map(|p| {
            edges.iter().fold(0u32, |acc, &(u, v)| {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                acc | 1 << pair_index(a, b)
            })
        })
        .min()
        .unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, p, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn class_counts() {
        // Connected unlabelled graphs on 1..=6 vertices.
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn labelled_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs_labelled(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
    }

    #[test]
    fn random_decompositions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in connected_graphs_up_to_iso(5) {
            for _ in 0..5 {
                let p = random_decomposition(&g, &mut rng, 3);
                assert!(p.validate(&g).is_valid());
            }
        }
    }

    #[test]
    fn families_are_valid_with_the_requested_width() {
        let (g, p) = caterpillar(20, 4);
        assert!(g.is_connected());
        assert!(p.validate(&g).is_valid());
        assert_eq!(p.width(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, p) = sparse_grid(5, 30, &mut rng);
        assert!(g.is_connected());
        assert!(p.validate(&g).is_valid());
        assert_eq!(p.width(), 5);
    }

    #[test]
    fn order_decomposition_of_a_path() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = decomposition_from_order(&g, &[0, 1, 2, 3]);
        assert_eq!(p.bags(), &[vec![0], vec![0, 1], vec![1, 2], vec![2, 3]]);
        let p = decomposition_from_order(&g, &[0, 3, 1, 2]);
        assert_eq!(p.width(), 2);
        assert!(p.validate(&g).is_valid());
    }
}
