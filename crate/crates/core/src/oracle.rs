//! Exact pathwidth and connected pathwidth of small graphs.
//!
//! Both equal a vertex separation number: the minimum over vertex orders of
//! the largest number of placed vertices that still have an unplaced
//! neighbor. For connected pathwidth the orders are restricted to those whose
//! every prefix induces a connected subgraph. The search runs over placed
//! sets, so it is exponential in `n` and capped.

use crate::decomposition::PathDecomposition;
use crate::error::{Error, Result};
use crate::generators::decomposition_from_order;
use crate::graph::{Graph, Vertex};

/// Largest graph the oracle accepts by default.
pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub width: usize,
    pub order: Vec<Vertex>,
    pub witness: PathDecomposition,
}

pub fn exact_pathwidth(g: &Graph) -> Result<Solution> {
    solve(g, false, None, DEFAULT_CAP).map(|s| s.expect("no budget given"))
}

pub fn exact_connected_pathwidth(g: &Graph) -> Result<Solution> {
    solve(g, true, None, DEFAULT_CAP).map(|s| s.expect("no budget given"))
}

/// Solves within a width budget: `Ok(None)` if the optimum exceeds `budget`.
/// Graphs with more than `cap` vertices are refused.
pub fn solve(g: &Graph, connected: bool, budget: Option<usize>, cap: usize) -> Result<Option<Solution>> {
    let n = g.n();
    if n > cap || n > 24 {
        return Err(Error::Oracle(format!("{n} vertices exceed the cap of {}", cap.min(24))));
    }
    if connected && !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 0 {
        return Ok(Some(Solution {
            width: 0,
            order: Vec::new(),
            witness: PathDecomposition::new(Vec::new()),
        }));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full: u32 = (1u32 << n) - 1;
    let boundary = |s: u32| -> usize { (0..n).filter(|&v| s >> v & 1 == 1 && adj[v] & !s & full != 0).count() };

    // best[s]: minimal largest boundary over orders placing exactly s first.
    // choice[s]: last vertex of such an order.
    let size = 1usize << n;
    let unreachable = usize::MAX;
    let mut best = vec![unreachable; size];
    let mut choice = vec![u8::MAX; size];
    best[0] = 0;
    let limit = budget.unwrap_or(n);
    for s in 0..size as u32 {
        let here = best[s as usize];
        if here == unreachable {
            continue;
        }
        let cut = boundary(s);
        if cut > limit {
            continue;
        }
        let cost = here.max(cut);
        for (v, &nbrs) in adj.iter().enumerate() {
            if s >> v & 1 == 1 || (connected && s != 0 && nbrs & s == 0) {
                continue;
            }
            let t = (s | 1 << v) as usize;
            if cost < best[t] {
                best[t] = cost;
                choice[t] = v as u8;
            }
        }
    }
    let width = best[full as usize];
    if width == unreachable || width > limit {
        return Ok(None);
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let witness = decomposition_from_order(g, &order);
    debug_assert_eq!(witness.width(), width);
    Ok(Some(Solution { width, order, witness }))
}
