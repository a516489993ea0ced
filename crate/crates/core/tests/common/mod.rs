//! Slow reference implementations used as oracles by the integration tests.
//!
//! Branches are computed straight from their definition: border vertices plus
//! every vertex outside `C` reachable from a border vertex by a progressive
//! path, i.e. a walk moving one layer per edge away from the other border.
//! Cut weights, properness and maximality are evaluated by recomputing the
//! truncated branches for every target.

#![allow(dead_code)]

use std::collections::BTreeSet;

use conpath::derived::{DerivedGraph, Side};
use conpath::expansion::{border_of, ReferenceState};

pub type Set = BTreeSet<usize>;

fn layer_ok(side: Side, k: usize, from: usize, target: usize) -> bool {
    match side {
        Side::Left => target <= k && k < from,
        Side::Right => from < k && k <= target,
    }
}

/// Inner extremity of a border: `r` of the left one, `l` of the right one.
pub fn inner(dg: &DerivedGraph, border: &Set, side: Side) -> usize {
    match side {
        Side::Left => border.iter().map(|&v| dg.layer_of(v)).max().unwrap_or(0),
        Side::Right => border.iter().map(|&v| dg.layer_of(v)).min().unwrap_or(dg.d() + 1),
    }
}

/// Vertex set of the branch of `border` (on `side`) with target layer `t`.
pub fn branch(dg: &DerivedGraph, c: &Set, border: &Set, side: Side, t: usize) -> Set {
    let ext = inner(dg, border, side);
    let mut out = border.clone();
    for &x in border {
        // Progressive walks from x, away from the other border.
        let mut frontier = vec![x];
        while let Some(u) = frontier.pop() {
            for &w in dg.neighbors_toward(u, side) {
                let k = dg.layer_of(w);
                let beyond = match side {
                    Side::Left => k < t,
                    Side::Right => k > t,
                };
                if beyond {
                    continue;
                }
                if !c.contains(&w) && layer_ok(side, k, ext, t) {
                    out.insert(w);
                }
                frontier.push(w);
            }
        }
    }
    out
}

pub fn external(dg: &DerivedGraph, c: &Set, b: &Set) -> Set {
    b.iter()
        .copied()
        .filter(|&v| dg.neighbors(v).any(|w| !c.contains(&w) && !b.contains(&w)))
        .collect()
}

pub fn is_proper(dg: &DerivedGraph, c: &Set, border: &Set, side: Side, t: usize) -> bool {
    let b = branch(dg, c, border, side, t);
    external(dg, c, &b).iter().all(|&v| {
        let k = dg.layer_of(v);
        match side {
            Side::Left => k <= t,
            Side::Right => k >= t,
        }
    })
}

/// All targets for which the branch is maximal, nearest to the border first.
pub fn maximal_targets(dg: &DerivedGraph, c: &Set, border: &Set, side: Side) -> Vec<usize> {
    let ext = inner(dg, border, side);
    let targets: Vec<usize> = match side {
        Side::Left => (1..=ext).rev().collect(),
        Side::Right => (ext..=dg.d()).collect(),
    };
    targets
        .into_iter()
        .filter(|&t| {
            let b = branch(dg, c, border, side, t);
            if external(dg, c, &b).is_empty() {
                return true;
            }
            let next = match side {
                Side::Left => t.checked_sub(1).filter(|&s| s >= 1),
                Side::Right => Some(t + 1).filter(|&s| s <= dg.d()),
            };
            is_proper(dg, c, border, side, t) && next.is_none_or(|s| !is_proper(dg, c, border, side, s))
        })
        .collect()
}

pub fn cut_weight(dg: &DerivedGraph, c: &Set, border: &Set, side: Side, j: usize) -> usize {
    let b = branch(dg, c, border, side, j);
    dg.weight_of(external(dg, c, &b))
}

/// Cuts of the branch with target `t`: from `t` to the far extremity of the
/// branch vertex set, as `(layer, weight)`, nearest to the border first.
pub fn cuts(dg: &DerivedGraph, c: &Set, border: &Set, side: Side, t: usize) -> Vec<(usize, usize)> {
    let b = branch(dg, c, border, side, t);
    let layers: Vec<usize> = match side {
        Side::Left => {
            let r = b.iter().map(|&v| dg.layer_of(v)).max().unwrap();
            (t..=r).rev().collect()
        }
        Side::Right => {
            let l = b.iter().map(|&v| dg.layer_of(v)).min().unwrap();
            (l..=t).collect()
        }
    };
    layers.into_iter().map(|j| (j, cut_weight(dg, c, border, side, j))).collect()
}

/// Bottleneck nearest to the border.
pub fn bottleneck(dg: &DerivedGraph, c: &Set, border: &Set, side: Side, t: usize) -> (usize, usize) {
    let all = cuts(dg, c, border, side, t);
    let min = all.iter().map(|&(_, w)| w).min().unwrap();
    *all.iter().find(|&&(_, w)| w == min).unwrap()
}

/// Reference run: the recorded states (empty extensions are not recorded),
/// the state count after initialization and after every iteration.
pub struct NaiveRun {
    pub states: Vec<ReferenceState>,
    pub init_end: usize,
    pub iteration_ends: Vec<usize>,
}

struct Naive<'a> {
    dg: &'a DerivedGraph,
    states: Vec<ReferenceState>,
}

impl Naive<'_> {
    fn cur(&self) -> &ReferenceState {
        self.states.last().unwrap()
    }

    fn border(&self, side: Side) -> &Set {
        match side {
            Side::Left => &self.cur().left,
            Side::Right => &self.cur().right,
        }
    }

    fn extend(&mut self, dir: Side, i: usize) {
        let next = self.cur().step(self.dg, dir, i);
        if !next.added.is_empty() {
            self.states.push(next);
        }
    }

    fn process(&mut self, side: Side, t: usize) {
        for _ in 0..=self.dg.d() + 1 {
            let x = inner(self.dg, self.border(side), side);
            let pending = match side {
                Side::Left => x > t,
                Side::Right => x < t,
            };
            if !pending {
                return;
            }
            self.extend(side, x);
        }
        panic!("border does not reach the target");
    }

    fn maximal(&self, side: Side) -> usize {
        let c = &self.cur().c;
        maximal_targets(self.dg, c, self.border(side), side)[0]
    }

    fn bottleneck(&self, side: Side) -> usize {
        let t = self.maximal(side);
        bottleneck(self.dg, &self.cur().c, self.border(side), side, t).0
    }
}

pub fn naive_cp(dg: &DerivedGraph, initial: &[(usize, Side)]) -> NaiveRun {
    let mut run = Naive {
        dg,
        states: vec![ReferenceState::start(dg, initial)],
    };
    for side in [Side::Left, Side::Right] {
        if !run.border(side).is_empty() {
            let t = run.bottleneck(side);
            run.process(side, t);
        }
    }
    let init_end = run.states.len();
    let mut iteration_ends = Vec::new();
    while run.cur().c.len() < dg.len() {
        assert!(iteration_ends.len() <= dg.len(), "no progress");
        let wl = dg.weight_of(run.border(Side::Left).iter().copied());
        let wr = dg.weight_of(run.border(Side::Right).iter().copied());
        let heavy = if wl > wr { Side::Left } else { Side::Right };
        let t1 = run.maximal(heavy);
        run.process(heavy, t1);
        run.extend(heavy.opposite(), t1);
        let t2 = (!run.border(Side::Right).is_empty()).then(|| run.bottleneck(Side::Right));
        let t3 = (!run.border(Side::Left).is_empty()).then(|| run.bottleneck(Side::Left));
        if let Some(t) = t3 {
            run.process(Side::Left, t);
        }
        if let Some(t) = t2 {
            run.process(Side::Right, t);
        }
        iteration_ends.push(run.states.len());
    }
    NaiveRun {
        states: run.states,
        init_end,
        iteration_ends,
    }
}

pub fn delta(dg: &DerivedGraph, c: &Set) -> Set {
    border_of(dg, c)
}

/// Random connected graph: a random tree plus `extra` random edges.
pub fn random_connected_graph<R: rand::Rng>(n: usize, extra: usize, rng: &mut R) -> conpath::graph::Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v));
            }
        }
    }
    // Relabel so that vertex ids carry no trace of the tree order.
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    conpath::graph::Graph::from_edges(n, &edges).unwrap()
}

/// A worked run on a 7-layer weighted layer graph. The first vertex of the
/// first layer has weight 2; initialization stops at the third expansion and
/// the main loop takes four iterations, processing the right, left, right
/// and left border first.
pub fn worked_example() -> DerivedGraph {
    let weights = [
        vec![2, 1],
        vec![3, 1, 3],
        vec![1, 2],
        vec![1, 2, 3],
        vec![1, 1],
        vec![1, 1],
        vec![3],
    ];
    let edges = [
        (0, 4),
        (1, 2),
        (2, 5),
        (2, 6),
        (3, 5),
        (4, 5),
        (5, 7),
        (6, 9),
        (8, 10),
        (8, 11),
        (9, 10),
        (10, 12),
        (11, 12),
        (11, 13),
        (12, 14),
    ];
    DerivedGraph::from_layers(&weights, &edges).unwrap()
}

/// Expansion after initialization and after each iteration of the worked run.
pub fn worked_example_expansions() -> Vec<Set> {
    let init: Set = [0, 4, 5].into();
    let first: Set = init.iter().copied().chain([2, 3, 7]).collect();
    let second: Set = first.iter().copied().chain([1, 6, 9, 10]).collect();
    let third: Set = second.iter().copied().chain([8]).collect();
    let fourth: Set = (0..15).collect();
    vec![init, first, second, third, fourth]
}
