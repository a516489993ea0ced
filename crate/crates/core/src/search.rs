//! Node and edge search strategies: conversion from path decompositions,
//! back to decompositions, and exact simulation.
//!
//! In the edge game an edge is cleared by sliding a searcher along it from
//! `u`, provided every other edge at `u` is clear or another searcher stays
//! on `u`. In the node game an edge is cleared once both ends are occupied.
//! In both games a clear edge is recontaminated as soon as it is joined to a
//! contaminated edge by a path whose inner vertices carry no searcher.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use crate::decomposition::PathDecomposition;
use crate::error::{Error, Result};
use crate::graph::{is_comment, Graph, Vertex};

pub type Searcher = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Place(Searcher, Vertex),
    Remove(Searcher, Vertex),
    Slide(Searcher, Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Node,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchStrategy {
    pub moves: Vec<Move>,
    pub searchers: usize,
}

impl SearchStrategy {
    /// Builds a strategy whose searcher count is one more than the largest
    /// searcher id used.
    pub fn new(moves: Vec<Move>) -> Self {
        let searchers = moves
            .iter()
            .map(|m| match *m {
                Move::Place(s, _) | Move::Remove(s, _) | Move::Slide(s, _, _) => s + 1,
            })
            .max()
            .unwrap_or(0);
        SearchStrategy { moves, searchers }
    }

    /// `place <s> <v>`, `remove <s> <v>` and `slide <s> <u> <v>` lines.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut s = String::new();
        for m in &self.moves {
            let _ = match *m {
                Move::Place(i, v) => writeln!(s, "place {i} {}", g.label(v)),
                Move::Remove(i, v) => writeln!(s, "remove {i} {}", g.label(v)),
                Move::Slide(i, u, v) => writeln!(s, "slide {i} {} {}", g.label(u), g.label(v)),
            };
        }
        s
    }
}

pub fn parse_strategy(text: &str, g: &Graph) -> Result<SearchStrategy> {
    let mut moves = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let searcher = |t: &str| -> Result<Searcher> {
            t.parse().map_err(|_| Error::parse(line_no, format!("bad searcher id `{t}`")))
        };
        let vertex = |t: &str| g.vertex(t).ok_or_else(|| Error::UnknownLabel(t.to_string()));
        let m = match tok.as_slice() {
            ["place", s, v] => Move::Place(searcher(s)?, vertex(v)?),
            ["remove", s, v] => Move::Remove(searcher(s)?, vertex(v)?),
            ["slide", s, u, v] => Move::Slide(searcher(s)?, vertex(u)?, vertex(v)?),
            _ => return Err(Error::parse(line_no, "expected `place|remove <s> <v>` or `slide <s> <u> <v>`")),
        };
        moves.push(m);
    }
    Ok(SearchStrategy::new(moves))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub cleared_all: bool,
    /// No clear edge was ever recontaminated.
    pub monotone: bool,
    /// After every move the clear edges form a connected subgraph.
    pub connected_throughout: bool,
    pub max_searchers_used: usize,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cleared_all={}", self.cleared_all)?;
        writeln!(f, "monotone={}", self.monotone)?;
        writeln!(f, "connected_throughout={}", self.connected_throughout)?;
        write!(f, "max_searchers_used={}", self.max_searchers_used)
    }
}

/// Game state: clear edges (indexed like [`Graph::edges`]) and searcher
/// positions.
#[derive(Debug, Clone)]
pub struct GameState<'g> {
    g: &'g Graph,
    edge_ids: Vec<Vec<usize>>,
    ends: Vec<(Vertex, Vertex)>,
    pub clear: Vec<bool>,
    pub position: Vec<Option<Vertex>>,
    guards: Vec<usize>,
    /// Number of recontaminated edges per move.
    pub recontaminated: Vec<usize>,
}

impl<'g> GameState<'g> {
    pub fn new(g: &'g Graph, searchers: usize) -> Self {
        let ends = g.edges();
        let mut edge_ids = vec![Vec::new(); g.n()];
        for (e, &(u, v)) in ends.iter().enumerate() {
            edge_ids[u].push(e);
            edge_ids[v].push(e);
        }
        GameState {
            g,
            edge_ids,
            clear: vec![false; ends.len()],
            ends,
            position: vec![None; searchers],
            guards: vec![0; g.n()],
            recontaminated: Vec::new(),
        }
    }

    pub fn occupied(&self) -> usize {
        self.position.iter().flatten().count()
    }

    pub fn is_guarded(&self, v: Vertex) -> bool {
        self.guards[v] > 0
    }

    fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edge_ids[u].iter().copied().find(|&e| {
            let (a, b) = self.ends[e];
            (a, b) == (u, v) || (a, b) == (v, u)
        })
    }

    /// Applies one move, then the clearing rule of `mode` and recontamination.
    pub fn apply(&mut self, index: usize, m: Move, mode: Mode) -> Result<()> {
        let bad = |msg: String| Error::IllFormedMove { index, msg };
        let check = |s: Searcher, len: usize| {
            if s >= len {
                Err(bad(format!("searcher {s} out of range")))
            } else {
                Ok(())
            }
        };
        match m {
            Move::Place(s, v) => {
                check(s, self.position.len())?;
                if v >= self.g.n() {
                    return Err(bad(format!("vertex {v} out of range")));
                }
                if let Some(at) = self.position[s] {
                    return Err(bad(format!("searcher {s} is already on `{}`", self.g.label(at))));
                }
                self.position[s] = Some(v);
                self.guards[v] += 1;
            }
            Move::Remove(s, v) => {
                check(s, self.position.len())?;
                if self.position[s] != Some(v) {
                    return Err(bad(format!("searcher {s} is not on vertex {v}")));
                }
                self.position[s] = None;
                self.guards[v] -= 1;
            }
            Move::Slide(s, u, v) => {
                check(s, self.position.len())?;
                if mode == Mode::Node {
                    return Err(bad("slides are not node search moves".to_string()));
                }
                if self.position[s] != Some(u) {
                    return Err(bad(format!("searcher {s} is not on vertex {u}")));
                }
                let Some(e) = self.edge_id(u, v) else {
                    return Err(bad(format!("no edge between vertices {u} and {v}")));
                };
                let others_clear = self.edge_ids[u].iter().all(|&f| f == e || self.clear[f]);
                if others_clear || self.guards[u] >= 2 {
                    self.clear[e] = true;
                }
                self.position[s] = Some(v);
                self.guards[u] -= 1;
                self.guards[v] += 1;
            }
        }
        if mode == Mode::Node {
            if let Move::Place(_, v) = m {
                for &e in &self.edge_ids[v] {
                    let (a, b) = self.ends[e];
                    if self.guards[a] > 0 && self.guards[b] > 0 {
                        self.clear[e] = true;
                    }
                }
            }
        }
        let spread = recontaminate(self.g, &self.ends, &self.edge_ids, &self.clear, &self.guards);
        let lost = self.clear.iter().zip(&spread).filter(|(a, b)| **a && !**b).count();
        self.clear = spread;
        self.recontaminated.push(lost);
        Ok(())
    }

    pub fn all_clear(&self) -> bool {
        self.clear.iter().all(|&c| c)
    }

    /// Whether the clear edges form a connected subgraph.
    pub fn clear_connected(&self) -> bool {
        let n = self.g.n();
        let mut seen = vec![false; n];
        let Some(start) = self.clear.iter().position(|&c| c) else {
            return true;
        };
        let mut queue = VecDeque::from([self.ends[start].0]);
        seen[self.ends[start].0] = true;
        while let Some(x) = queue.pop_front() {
            for &e in &self.edge_ids[x] {
                if !self.clear[e] {
                    continue;
                }
                let (a, b) = self.ends[e];
                let y = if a == x { b } else { a };
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.ends.iter().zip(&self.clear).all(|(&(a, _), &c)| !c || seen[a])
    }

    /// Recontamination closure of the current state.
    pub fn closure(&self) -> Vec<bool> {
        recontaminate(self.g, &self.ends, &self.edge_ids, &self.clear, &self.guards)
    }
}

/// Contamination spreads from every contaminated edge through unguarded
/// endpoints to all incident edges, until nothing changes.
fn recontaminate(
    g: &Graph,
    ends: &[(Vertex, Vertex)],
    edge_ids: &[Vec<usize>],
    clear: &[bool],
    guards: &[usize],
) -> Vec<bool> {
    let mut clear = clear.to_vec();
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    let mut reached = vec![false; g.n()];
    for (e, &(a, b)) in ends.iter().enumerate() {
        if clear[e] {
            continue;
        }
        for x in [a, b] {
            if guards[x] == 0 && !reached[x] {
                reached[x] = true;
                queue.push_back(x);
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        for &e in &edge_ids[x] {
            clear[e] = false;
            let (a, b) = ends[e];
            let y = if a == x { b } else { a };
            if guards[y] == 0 && !reached[y] {
                reached[y] = true;
                queue.push_back(y);
            }
        }
    }
    clear
}

/// Simulates `s` on `g` from the all-contaminated state with no searcher
/// placed.
pub fn simulate(g: &Graph, s: &SearchStrategy, mode: Mode) -> Result<Verdict> {
    let mut state = GameState::new(g, s.searchers);
    let mut monotone = true;
    let mut connected = true;
    let mut max_used = 0;
    for (i, &m) in s.moves.iter().enumerate() {
        state.apply(i, m, mode)?;
        monotone &= state.recontaminated[i] == 0;
        connected &= state.clear_connected();
        max_used = max_used.max(state.occupied());
    }
    Ok(Verdict {
        cleared_all: state.all_clear(),
        monotone,
        connected_throughout: connected,
        max_searchers_used: max_used,
    })
}

/// Lowest free searcher ids.
#[derive(Default)]
struct Pool {
    free: std::collections::BTreeSet<Searcher>,
    next: Searcher,
}

impl Pool {
    fn take(&mut self) -> Searcher {
        if let Some(s) = self.free.pop_first() {
            s
        } else {
            self.next += 1;
            self.next - 1
        }
    }

    fn give(&mut self, s: Searcher) {
        self.free.insert(s);
    }
}

/// Node strategy of a decomposition: occupy the first bag, then between
/// consecutive bags remove the vertices that leave and place those that
/// enter. Uses `width + 1` searchers.
pub fn decomposition_to_node_strategy(p: &PathDecomposition) -> SearchStrategy {
    let mut pool = Pool::default();
    let mut on: std::collections::HashMap<Vertex, Searcher> = Default::default();
    let mut moves = Vec::new();
    let empty = Vec::new();
    let mut prev: &Vec<Vertex> = &empty;
    for bag in p.bags() {
        for &v in prev {
            if bag.binary_search(&v).is_err() {
                let s = on.remove(&v).expect("vertex of the previous bag is occupied");
                moves.push(Move::Remove(s, v));
                pool.give(s);
            }
        }
        for &v in bag {
            if prev.binary_search(&v).is_err() {
                let s = pool.take();
                on.insert(v, s);
                moves.push(Move::Place(s, v));
            }
        }
        prev = bag;
    }
    SearchStrategy::new(moves)
}

/// Inverse of [`decomposition_to_node_strategy`]: the bags are the occupied
/// sets at each instant where a placement is followed by a removal, and at
/// the end. The strategy must be a monotone node strategy clearing `g`.
pub fn strategy_to_decomposition(s: &SearchStrategy, g: &Graph) -> Result<PathDecomposition> {
    let mut state = GameState::new(g, s.searchers);
    let mut bags = Vec::new();
    let mut placed_since_snapshot = false;
    let snapshot = |state: &GameState<'_>| -> Vec<Vertex> { state.position.iter().flatten().copied().collect() };
    for (i, &m) in s.moves.iter().enumerate() {
        if matches!(m, Move::Remove(..)) && placed_since_snapshot {
            bags.push(snapshot(&state));
            placed_since_snapshot = false;
        }
        state.apply(i, m, Mode::Node)?;
        if state.recontaminated[i] > 0 {
            return Err(Error::Strategy(format!("move {i} recontaminates, strategy is not monotone")));
        }
        placed_since_snapshot |= matches!(m, Move::Place(..));
    }
    if placed_since_snapshot {
        bags.push(snapshot(&state));
    }
    if !state.all_clear() {
        return Err(Error::Strategy("strategy does not clear the graph".to_string()));
    }
    let p = PathDecomposition::new(bags);
    let report = p.validate(g);
    if !report.is_valid() {
        return Err(Error::Strategy(format!("snapshots are not a decomposition: {}", report.render(g).trim())));
    }
    Ok(p)
}

/// Monotone connected edge strategy from a connected decomposition, with at
/// most `width + 2` searchers.
///
/// Every vertex gets a guard when it first enters a bag and loses it when it
/// leaves its last bag. A vertex entering a bag is reached by a second
/// searcher sliding from an already guarded neighbor, which becomes its
/// guard. Its edges to the other guarded vertices are then cleared by one
/// auxiliary searcher placed on it, slid across and removed. The guards
/// number at most `width + 1`, plus one auxiliary searcher. When `start` is
/// given it must lie in the first bag and is guarded first.
pub fn connected_decomposition_to_edge_strategy(
    g: &Graph,
    c: &PathDecomposition,
    start: Option<Vertex>,
) -> Result<SearchStrategy> {
    let report = c.validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.render(g).trim().to_string()));
    }
    if let Some(i) = c.first_disconnected_prefix(g) {
        return Err(Error::NotConnected(i));
    }
    let n = g.n();
    let mut pool = Pool::default();
    let mut guard: Vec<Option<Searcher>> = vec![None; n];
    let mut moves = Vec::new();
    let mut clear = std::collections::HashSet::new();
    let mut seen = vec![false; n];
    let empty = Vec::new();
    let mut prev: &Vec<Vertex> = &empty;
    for (i, bag) in c.bags().iter().enumerate() {
        for &v in prev {
            if bag.binary_search(&v).is_err() {
                let s = guard[v].take().expect("guarded vertex");
                moves.push(Move::Remove(s, v));
                pool.give(s);
            }
        }
        for v in entry_order(g, bag, &seen, if i == 0 { start } else { None })? {
            seen[v] = true;
            let from = g.neighbors(v).iter().copied().find(|&w| guard[w].is_some());
            let s = pool.take();
            match from {
                Some(w) => {
                    moves.push(Move::Place(s, w));
                    moves.push(Move::Slide(s, w, v));
                    clear.insert((w.min(v), w.max(v)));
                }
                None => moves.push(Move::Place(s, v)),
            }
            guard[v] = Some(s);
            for &y in g.neighbors(v) {
                if guard[y].is_none() || clear.contains(&(y.min(v), y.max(v))) {
                    continue;
                }
                let aux = pool.take();
                moves.extend([Move::Place(aux, v), Move::Slide(aux, v, y), Move::Remove(aux, y)]);
                pool.give(aux);
                clear.insert((y.min(v), y.max(v)));
            }
        }
        prev = bag;
    }
    Ok(SearchStrategy::new(moves))
}

/// New vertices of `bag`, ordered so that each one has a neighbor among the
/// vertices already seen or ordered before it. The very first vertex is
/// `start` if given, else the smallest one.
fn entry_order(g: &Graph, bag: &[Vertex], seen: &[bool], start: Option<Vertex>) -> Result<Vec<Vertex>> {
    let fresh: Vec<Vertex> = bag.iter().copied().filter(|&v| !seen[v]).collect();
    if fresh.is_empty() {
        return Ok(fresh);
    }
    let mut done = seen.to_vec();
    let mut order = Vec::with_capacity(fresh.len());
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    if !seen.iter().any(|&s| s) {
        let first = match start {
            Some(h) if bag.contains(&h) => h,
            Some(h) => return Err(Error::Strategy(format!("start vertex `{}` is not in the first bag", g.label(h)))),
            None => fresh[0],
        };
        done[first] = true;
        order.push(first);
        queue.push_back(first);
    } else {
        queue.extend(bag.iter().copied().filter(|&v| seen[v]));
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if !done[y] && bag.binary_search(&y).is_ok() {
                done[y] = true;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    if order.len() != fresh.len() {
        return Err(Error::invariant("new vertices of a bag are not reachable inside the bag"));
    }
    Ok(order)
}
