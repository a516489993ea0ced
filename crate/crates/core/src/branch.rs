//! Branches of an expansion.
//!
//! The left branch to layer `i` consists of the left border together with
//! every vertex `v ∈ V_k \ C`, `i <= k < r(border_L)`, joined to a border
//! vertex in a higher layer by a path using one vertex per layer. A branch
//! vertex is external if it has a neighbor outside `C` and outside the branch.
//! Cut `j` of a branch weighs the external vertices of the branch to `j`; a
//! bottleneck is a cut of minimum weight. Right branches are the mirror image.
//!
//! All quantities are computed by one sweep from the border extremity away
//! from the other border. Layers the sweep enters with no branch vertex and no
//! border vertex form stretches of equal cut weight; they are skipped in one
//! jump, so a sweep costs time proportional to the branch size plus the
//! number of border layers it passes.

use std::fmt::Write as _;

use crate::derived::Side;
use crate::error::{Error, Result};
use crate::expansion::Expansion;

/// Consecutive cuts of equal weight, listed from the border outwards:
/// `near` is the cut closest to the border extremity, `far` the farthest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutRun {
    pub near: usize,
    pub far: usize,
    pub weight: usize,
    /// `ω(V_j ∩ V(branch))` for every cut `j` of the run.
    pub layer_weight: usize,
    /// Weight of the border beyond every cut `j` of the run (layers `< j` for
    /// a left branch).
    pub border_beyond: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub side: Side,
    /// The inner extremity of the border the branch grows from.
    pub anchor: usize,
    /// The target layer.
    pub target: usize,
    /// Nonempty `V_k ∩ V(branch)` in sweep order, border vertices included.
    /// Border layers beyond the target follow the swept layers.
    pub layers: Vec<(usize, Vec<usize>)>,
    /// Cut runs covering `target..=anchor`, in sweep order.
    pub cuts: Vec<CutRun>,
    /// No external vertex lies strictly between the target and the anchor
    /// side.
    pub proper: bool,
}

impl Branch {
    /// The bottleneck closest to the border and its weight.
    pub fn bottleneck(&self) -> (usize, usize) {
        let mut best = self.cuts[0];
        for run in &self.cuts[1..] {
            if run.weight < best.weight {
                best = *run;
            }
        }
        (best.near, best.weight)
    }

    pub fn cut_weight(&self, j: usize) -> Option<usize> {
        self.cuts.iter().find(|r| within(j, r.near, r.far)).map(|r| r.weight)
    }

    /// All vertices of the branch not in `C`.
    pub fn new_vertices<'b>(&'b self, e: &'b Expansion<'_>) -> impl Iterator<Item = usize> + 'b {
        self.layers
            .iter()
            .flat_map(|(_, vs)| vs.iter().copied())
            .filter(move |&v| !e.contains(v))
    }

    /// Vertices outside `C` of the sub-branch truncated at cut `t`.
    pub fn new_vertices_to<'b>(&'b self, e: &'b Expansion<'_>, t: usize) -> impl Iterator<Item = usize> + 'b {
        let side = self.side;
        self.layers
            .iter()
            .filter(move |(k, _)| !beyond(side, *k, t))
            .flat_map(|(_, vs)| vs.iter().copied())
            .filter(move |&v| !e.contains(v))
    }

    /// `branch side=<L|R> t=<target> cuts=[(j,w)...] bottleneck=<j>`.
    pub fn render(&self) -> String {
        let mut cuts = String::new();
        for run in &self.cuts {
            let (a, b) = (run.near.min(run.far), run.near.max(run.far));
            for j in a..=b {
                if !cuts.is_empty() {
                    cuts.push(',');
                }
                let _ = write!(cuts, "({j},{})", run.weight);
            }
        }
        format!(
            "branch side={} t={} cuts=[{}] bottleneck={}",
            self.side.letter(),
            self.target,
            cuts,
            self.bottleneck().0
        )
    }
}

fn within(j: usize, near: usize, far: usize) -> bool {
    near.min(far) <= j && j <= near.max(far)
}

/// `k` lies strictly past `t` when moving away from the border.
fn beyond(side: Side, k: usize, t: usize) -> bool {
    match side {
        Side::Left => k < t,
        Side::Right => k > t,
    }
}

/// The layer one step away from the border, if it exists.
fn next_layer(side: Side, k: usize, d: usize) -> Option<usize> {
    match side {
        Side::Left => (k > 1).then(|| k - 1),
        Side::Right => (k < d).then(|| k + 1),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    /// Sweep down to this target regardless of properness.
    At(usize),
    /// Stop at the first layer where the branch is maximal.
    Maximal,
}

/// The branch of `e` on `side` with target layer `target`. The target must
/// lie between the far end of the layer range and the border's inner
/// extremity.
pub fn grow_branch(e: &Expansion<'_>, side: Side, target: usize) -> Result<Branch> {
    if e.border(side).is_empty() {
        return Err(Error::EmptyBorder);
    }
    let anchor = e.inner_extremity(side);
    let d = e.graph().d();
    if target == 0 || target > d || beyond(side.opposite(), target, anchor) {
        return Err(Error::invariant(format!(
            "branch target {target} outside the range of a {} branch anchored at {anchor}",
            side.letter()
        )));
    }
    Ok(sweep(e, side, Stop::At(target)))
}

/// The maximal branch of `e` on `side`; its target is `branch.target`.
pub fn find_maximal_branch(e: &Expansion<'_>, side: Side) -> Result<Branch> {
    if e.border(side).is_empty() {
        return Err(Error::EmptyBorder);
    }
    Ok(sweep(e, side, Stop::Maximal))
}

fn sweep(e: &Expansion<'_>, side: Side, stop: Stop) -> Branch {
    let dg = e.graph();
    let d = dg.d();
    let away = side;
    let back = side.opposite();
    let border = e.border(side);
    let anchor = e.inner_extremity(side);

    let border_at = |k: usize| -> Vec<usize> { border.range(dg.layer(k)).copied().collect() };
    // Weight of the border strictly beyond layer `k`.
    let border_beyond = |k: usize| -> usize {
        let r = dg.layer(k);
        match side {
            Side::Left => dg.weight_of(border.range(..r.start).copied()),
            Side::Right => dg.weight_of(border.range(r.end..).copied()),
        }
    };
    // Next layer beyond `k` holding border vertices.
    let next_border_layer = |k: usize| -> Option<usize> {
        let r = dg.layer(k);
        match side {
            Side::Left => border.range(..r.start).next_back().map(|&v| dg.layer_of(v)),
            Side::Right => border.range(r.end..).next().map(|&v| dg.layer_of(v)),
        }
    };
    let open_away = |v: usize| dg.neighbors_toward(v, away).iter().any(|&w| !e.contains(w));
    // `v` has a neighbor toward the border that is outside C and outside `prev`.
    let open_back = |v: usize, prev: &[usize]| {
        dg.neighbors_toward(v, back)
            .iter()
            .any(|&w| !e.contains(w) && prev.binary_search(&w).is_err())
    };

    let mut layers: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut cuts: Vec<CutRun> = Vec::new();
    let mut ext_above = 0usize;
    let mut prev: Vec<usize> = Vec::new();
    let mut k = anchor;
    let mut proper_here;
    let target;

    loop {
        // Branch vertices of layer k.
        let mut cur = border_at(k);
        if k != anchor {
            for &u in &prev {
                for &w in dg.neighbors_toward(u, away) {
                    if !e.contains(w) {
                        cur.push(w);
                    }
                }
            }
            cur.sort_unstable();
            cur.dedup();
        }

        if cur.is_empty() {
            // A stretch of equal cut weight until the layer after the next
            // border layer (or the end of the layer range).
            let far = match next_border_layer(k) {
                Some(b) => match side {
                    Side::Left => b + 1,
                    Side::Right => b - 1,
                },
                None => match side {
                    Side::Left => 1,
                    Side::Right => d,
                },
            };
            let weight = ext_above + border_beyond(k);
            proper_here = ext_above == 0;
            let stop_at = match stop {
                Stop::At(t) if !beyond(side, t, far) => Some(t),
                Stop::Maximal if proper_here && (weight == 0 || next_border_layer(k).is_none()) => Some(k),
                _ => None,
            };
            let end = stop_at.unwrap_or(far);
            cuts.push(CutRun {
                near: k,
                far: end,
                weight,
                layer_weight: 0,
                border_beyond: border_beyond(k),
            });
            if let Some(t) = stop_at {
                target = t;
                break;
            }
            prev.clear();
            k = match next_layer(side, far, d) {
                Some(n) => n,
                None => {
                    target = far;
                    break;
                }
            };
            continue;
        }

        let mut re = 0;
        let mut lo = 0;
        for &v in &cur {
            let w = dg.weight(v);
            if open_back(v, &prev) {
                re += w;
            } else if open_away(v) {
                lo += w;
            }
        }
        let next = next_layer(side, k, d);
        let mut edge_term = 0;
        if let Some(n) = next {
            for v in border_at(n) {
                if open_away(v) || open_back(v, &cur) {
                    edge_term += dg.weight(v);
                }
            }
        }
        let beyond_next = next.map_or(0, border_beyond);
        let weight = ext_above + re + lo + edge_term + beyond_next;
        let layer_weight = dg.weight_of(cur.iter().copied());
        proper_here = ext_above == 0;
        cuts.push(CutRun {
            near: k,
            far: k,
            weight,
            layer_weight,
            border_beyond: border_beyond(k),
        });
        layers.push((k, cur.clone()));

        let done = match stop {
            Stop::At(t) => t == k,
            Stop::Maximal => proper_here && (weight == 0 || next.is_none() || re > 0),
        };
        if done {
            target = k;
            break;
        }
        ext_above += re;
        prev = cur;
        match next {
            Some(n) => k = n,
            None => {
                target = k;
                break;
            }
        }
    }

    // Border vertices beyond the target are part of the branch as well.
    let mut tail: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut probe = target;
    while let Some(b) = next_border_layer(probe) {
        tail.push((b, border_at(b)));
        probe = b;
    }
    layers.extend(tail);

    Branch {
        side,
        anchor,
        target,
        layers,
        cuts,
        proper: proper_here,
    }
}
