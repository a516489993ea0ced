//! The node-weighted layer graph derived from a graph and a path decomposition.
//!
//! Layer `i` (1-based) holds one vertex per connected component of `G[X_i]`,
//! weighted by the component size. Two vertices in consecutive layers are
//! adjacent iff their components share an original vertex. Derived vertex ids
//! are global and contiguous per layer, ordered by layer and then by smallest
//! original vertex of the component, so a sorted set of derived ids is also
//! sorted by layer.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Range;

use crate::decomposition::PathDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Which border a set plays the role of. Determines the extremity sentinel of
/// the empty set and the direction of branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivedGraph {
    d: usize,
    width: usize,
    /// `layer_start[i]..layer_start[i + 1]` are the ids of layer `i`, `1 <= i <= d`.
    layer_start: Vec<usize>,
    layer_of: Vec<usize>,
    weight: Vec<usize>,
    component: Vec<Vec<Vertex>>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

impl DerivedGraph {
    /// Builds the derived graph. `p` must be a valid decomposition of `g`.
    pub fn build(g: &Graph, p: &PathDecomposition) -> DerivedGraph {
        let n = g.n();
        let bags = p.bags();
        let d = bags.len();
        const NONE: usize = usize::MAX;

        let mut local = vec![NONE; n];
        let mut owner_prev = vec![NONE; n];
        let mut layer_start = vec![0, 0];
        let mut layer_of = Vec::new();
        let mut component: Vec<Vec<Vertex>> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = Vec::new();
        let mut stack = Vec::new();
        let mut owner_cur: Vec<usize> = Vec::new();

        for (bi, bag) in bags.iter().enumerate() {
            for (pos, &u) in bag.iter().enumerate() {
                local[u] = pos;
            }
            seen.clear();
            seen.resize(bag.len(), false);
            owner_cur.clear();
            owner_cur.resize(bag.len(), NONE);
            for root in 0..bag.len() {
                if seen[root] {
                    continue;
                }
                let id = component.len();
                seen[root] = true;
                stack.push(root);
                let mut comp = Vec::new();
                while let Some(q) = stack.pop() {
                    let u = bag[q];
                    comp.push(u);
                    owner_cur[q] = id;
                    // Scan whichever is shorter: the adjacency list or the bag.
                    if g.degree(u) <= bag.len() {
                        for &w in g.neighbors(u) {
                            let pw = local[w];
                            if pw != NONE && !seen[pw] {
                                seen[pw] = true;
                                stack.push(pw);
                            }
                        }
                    } else {
                        for (pw, &w) in bag.iter().enumerate() {
                            if !seen[pw] && g.has_edge(u, w) {
                                seen[pw] = true;
                                stack.push(pw);
                            }
                        }
                    }
                }
                comp.sort_unstable();
                component.push(comp);
                layer_of.push(bi + 1);
            }
            layer_start.push(component.len());

            if bi > 0 {
                let first = edges.len();
                for (q, &u) in bag.iter().enumerate() {
                    if owner_prev[u] != NONE {
                        edges.push((owner_prev[u], owner_cur[q]));
                    }
                }
                edges[first..].sort_unstable();
                let mut kept = first;
                for e in first..edges.len() {
                    if kept == first || edges[kept - 1] != edges[e] {
                        edges[kept] = edges[e];
                        kept += 1;
                    }
                }
                edges.truncate(kept);
                for &u in &bags[bi - 1] {
                    owner_prev[u] = NONE;
                }
            }
            for (q, &u) in bag.iter().enumerate() {
                owner_prev[u] = owner_cur[q];
                local[u] = NONE;
            }
        }

        let weight = component.iter().map(Vec::len).collect();
        let width = bags.iter().map(Vec::len).max().unwrap_or(0);
        DerivedGraph::assemble(d, width, layer_start, layer_of, weight, component, &edges)
    }

    /// Builds a derived graph directly from layer weights and edges, without an
    /// underlying graph. Vertex ids are assigned layer by layer in the given
    /// order; `edges` refer to those ids. Components are left empty, so bag
    /// extraction yields empty bags; the width is the largest layer weight.
    pub fn from_layers(weights: &[Vec<usize>], edges: &[(usize, usize)]) -> Result<DerivedGraph> {
        let d = weights.len();
        let mut layer_start = vec![0, 0];
        let mut layer_of = Vec::new();
        let mut weight = Vec::new();
        for (i, layer) in weights.iter().enumerate() {
            for &w in layer {
                if w == 0 {
                    return Err(Error::InvalidDecomposition("derived vertex of weight 0".into()));
                }
                weight.push(w);
                layer_of.push(i + 1);
            }
            layer_start.push(weight.len());
        }
        let total = weight.len();
        let mut oriented = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= total {
                return Err(Error::UnknownVertex(a));
            }
            if b >= total {
                return Err(Error::UnknownVertex(b));
            }
            let (a, b) = if layer_of[a] <= layer_of[b] { (a, b) } else { (b, a) };
            if layer_of[a] + 1 != layer_of[b] {
                return Err(Error::InvalidDecomposition(format!(
                    "edge {a}-{b} does not join consecutive layers"
                )));
            }
            oriented.push((a, b));
        }
        oriented.sort_unstable();
        oriented.dedup();
        let width = weights.iter().map(|l| l.iter().sum::<usize>()).max().unwrap_or(0);
        let component = vec![Vec::new(); total];
        Ok(DerivedGraph::assemble(d, width, layer_start, layer_of, weight, component, &oriented))
    }

    fn assemble(
        d: usize,
        width: usize,
        layer_start: Vec<usize>,
        layer_of: Vec<usize>,
        weight: Vec<usize>,
        component: Vec<Vec<Vertex>>,
        edges: &[(usize, usize)],
    ) -> DerivedGraph {
        let total = weight.len();
        let mut left = vec![Vec::new(); total];
        let mut right = vec![Vec::new(); total];
        // `edges` is sorted, so both adjacency directions come out sorted.
        for &(a, b) in edges {
            right[a].push(b);
        }
        let mut by_target: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (b, a)).collect();
        by_target.sort_unstable();
        for (b, a) in by_target {
            left[b].push(a);
        }
        DerivedGraph {
            d,
            width,
            layer_start,
            layer_of,
            weight,
            component,
            left,
            right,
        }
    }

    /// Number of layers.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Width of the input decomposition plus one, i.e. the largest layer weight.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of derived vertices.
    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    /// Ids of layer `i`; empty for `i == 0` or `i > d`.
    pub fn layer(&self, i: usize) -> Range<usize> {
        if i == 0 || i > self.d {
            let end = self.len();
            return end..end;
        }
        self.layer_start[i]..self.layer_start[i + 1]
    }

    pub fn layer_of(&self, v: usize) -> usize {
        self.layer_of[v]
    }

    pub fn weight(&self, v: usize) -> usize {
        self.weight[v]
    }

    pub fn component(&self, v: usize) -> &[Vertex] {
        &self.component[v]
    }

    /// Neighbors in the previous layer, sorted.
    pub fn left_neighbors(&self, v: usize) -> &[usize] {
        &self.left[v]
    }

    /// Neighbors in the next layer, sorted.
    pub fn right_neighbors(&self, v: usize) -> &[usize] {
        &self.right[v]
    }

    /// Neighbors on the far side of `side`: left neighbors for `Left`.
    pub fn neighbors_toward(&self, v: usize, side: Side) -> &[usize] {
        match side {
            Side::Left => &self.left[v],
            Side::Right => &self.right[v],
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.left[v].iter().chain(self.right[v].iter()).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.left[v].len() + self.right[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.right.iter().map(Vec::len).sum()
    }

    /// Total weight of a set of derived vertices.
    pub fn weight_of<I: IntoIterator<Item = usize>>(&self, set: I) -> usize {
        set.into_iter().map(|v| self.weight[v]).sum()
    }

    /// `(l, r)`: smallest and largest layer met by `set`. The empty set yields
    /// `(0, 0)` as a left border and `(d + 1, d + 1)` as a right border.
    pub fn extremities(&self, set: &BTreeSet<usize>, side: Side) -> (usize, usize) {
        match (set.first(), set.last()) {
            (Some(&a), Some(&b)) => (self.layer_of[a], self.layer_of[b]),
            _ => match side {
                Side::Left => (0, 0),
                Side::Right => (self.d + 1, self.d + 1),
            },
        }
    }

    /// One line per vertex `v <layer> <weight> {labels}` followed by one line
    /// per edge `e <a> <b>`, where `a`, `b` index the `v` lines from 0.
    pub fn dump(&self, g: Option<&Graph>) -> String {
        let mut s = String::new();
        for v in 0..self.len() {
            let labels: Vec<String> = self.component[v]
                .iter()
                .map(|&u| match g {
                    Some(g) => g.label(u).to_string(),
                    None => u.to_string(),
                })
                .collect();
            let _ = writeln!(s, "v {} {} {{{}}}", self.layer_of[v], self.weight[v], labels.join(","));
        }
        for a in 0..self.len() {
            for &b in &self.right[a] {
                let _ = writeln!(s, "e {a} {b}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn path_abc() -> Graph {
        parse_graph("p 3 2\ne a b\ne b c").unwrap()
    }

    #[test]
    fn two_overlapping_bags() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        let dg = DerivedGraph::build(&g, &p);
        assert_eq!(dg.len(), 2);
        assert_eq!((dg.weight(0), dg.weight(1)), (2, 2));
        assert_eq!(dg.right_neighbors(0), &[1]);
        assert_eq!(dg.left_neighbors(1), &[0]);
        assert_eq!(dg.width(), 2);
    }

    #[test]
    fn disconnected_first_bag() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 2], vec![0, 1, 2]]);
        let dg = DerivedGraph::build(&g, &p);
        assert_eq!(dg.layer(1), 0..2);
        assert_eq!(dg.component(0), &[0]);
        assert_eq!(dg.component(1), &[2]);
        assert_eq!(dg.weight(2), 3);
        assert_eq!(dg.right_neighbors(0), &[2]);
        assert_eq!(dg.right_neighbors(1), &[2]);
        assert_eq!(dg.left_neighbors(2), &[0, 1]);
        assert_eq!(dg.edge_count(), 2);
    }

    #[test]
    fn extremities_and_sentinels() {
        let dg = DerivedGraph::from_layers(&[vec![1], vec![1], vec![1], vec![1], vec![1]], &[]).unwrap();
        let s: BTreeSet<usize> = [1, 2, 4].into_iter().collect();
        assert_eq!(dg.extremities(&s, Side::Left), (2, 5));
        let e = BTreeSet::new();
        assert_eq!(dg.extremities(&e, Side::Left), (0, 0));
        assert_eq!(dg.extremities(&e, Side::Right), (6, 6));
    }

    #[test]
    fn weights() {
        let dg = DerivedGraph::from_layers(&[vec![3, 2]], &[]).unwrap();
        assert_eq!(dg.weight_of([]), 0);
        assert_eq!(dg.weight_of([0]), 3);
        assert_eq!(dg.weight_of(dg.layer(1)), 5);
        assert!(dg.layer(0).is_empty());
        assert!(dg.layer(2).is_empty());
    }

    #[test]
    fn fixture_rejects_long_edges() {
        assert!(DerivedGraph::from_layers(&[vec![1], vec![1], vec![1]], &[(0, 2)]).is_err());
        assert!(DerivedGraph::from_layers(&[vec![1], vec![1]], &[(0, 5)]).is_err());
        assert!(DerivedGraph::from_layers(&[vec![0]], &[]).is_err());
    }

    #[test]
    fn dump_format() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 2], vec![0, 1, 2]]);
        let dg = DerivedGraph::build(&g, &p);
        assert_eq!(dg.dump(Some(&g)), "v 1 1 {a}\nv 1 1 {c}\nv 2 3 {a,b,c}\ne 0 2\ne 1 2\n");
    }
}
