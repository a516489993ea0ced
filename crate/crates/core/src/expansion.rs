//! Expansions: growing connected vertex sets of the derived graph whose border
//! is split into a left and a right part, and the two primitive extension
//! steps. Also the simple conversion procedure built on them, with a pluggable
//! policy for choosing among the applicable extension moves.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::PathDecomposition;
use crate::derived::{DerivedGraph, Side};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// The part of an algorithm a step belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// The initial expansion.
    Start,
    /// A move of the simple conversion procedure.
    Simple,
    /// Absorbing a branch up to its bottleneck before the main loop.
    Init,
    /// Absorbing the maximal branch of the heavier border.
    Grow,
    /// The single extension crossing to the other side after `Grow`.
    Cross,
    /// Absorbing both branches up to their bottlenecks.
    Settle,
}

/// Provenance of a recorded expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tag {
    pub phase: Phase,
    /// Direction of the extension; `None` for the initial expansion.
    pub dir: Option<Side>,
}

impl Tag {
    pub const START: Tag = Tag {
        phase: Phase::Start,
        dir: None,
    };

    pub fn new(phase: Phase, dir: Side) -> Tag {
        Tag {
            phase,
            dir: Some(dir),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = match self.phase {
            Phase::Start => "start",
            Phase::Simple => "simple",
            Phase::Init => "init",
            Phase::Grow => "grow",
            Phase::Cross => "cross",
            Phase::Settle => "settle",
        };
        match self.dir {
            None => f.write_str(phase),
            Some(d) => write!(f, "{phase}:{}E", d.letter()),
        }
    }
}

/// One recorded expansion `C_j`: the vertices added to reach it and both
/// borders afterwards. The bag source is `left ∪ right ∪ added`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub tag: Tag,
    /// Layer argument of the extension; 0 for the initial expansion.
    pub layer: usize,
    pub added: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Step {
    /// Derived vertices whose components form the bag of this step, sorted.
    pub fn bag(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self
            .left
            .iter()
            .chain(&self.right)
            .chain(&self.added)
            .copied()
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }
}

/// The sequence of expansions computed by a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    /// Number of recorded expansions.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Original-vertex bags, one per recorded expansion, before collapsing
    /// consecutive duplicates.
    pub fn bags(&self, dg: &DerivedGraph) -> Vec<Vec<Vertex>> {
        self.steps
            .iter()
            .map(|s| {
                let mut z: Vec<Vertex> = s
                    .bag()
                    .into_iter()
                    .flat_map(|v| dg.component(v).iter().copied())
                    .collect();
                z.sort_unstable();
                z.dedup();
                z
            })
            .collect()
    }

    /// The emitted decomposition: bags with consecutive duplicates collapsed.
    pub fn decomposition(&self, dg: &DerivedGraph) -> PathDecomposition {
        PathDecomposition::new(self.bags(dg))
    }

    /// One line per expansion:
    /// `m=<j> step=<tag> A={..} bL={..} bR={..} |B|=<weight>`.
    pub fn render(&self, dg: &DerivedGraph) -> String {
        fn set(v: &[usize]) -> String {
            let parts: Vec<String> = v.iter().map(usize::to_string).collect();
            format!("{{{}}}", parts.join(","))
        }
        let mut out = String::new();
        for (j, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "m={} step={} A={} bL={} bR={} |B|={}",
                j + 1,
                s.tag,
                set(&s.added),
                set(&s.left),
                set(&s.right),
                dg.weight_of(s.bag())
            );
        }
        out
    }
}

/// Incrementally maintained expansion. Tracks membership, the number of
/// neighbors outside `C` of every member (a member is on the border iff that
/// count is positive), both borders with their weights, and `ω(V_i ∩ C)`.
#[derive(Debug, Clone)]
pub struct Expansion<'a> {
    dg: &'a DerivedGraph,
    in_c: Vec<bool>,
    outside: Vec<u32>,
    left: BTreeSet<usize>,
    right: BTreeSet<usize>,
    left_weight: usize,
    right_weight: usize,
    size: usize,
    layer_weight: Vec<usize>,
    steps: Vec<Step>,
}

impl<'a> Expansion<'a> {
    /// Starts from a set of derived vertices, each assigned to the border it
    /// joins if it has a neighbor outside the set. The initial set must induce
    /// a connected subgraph.
    pub fn new(dg: &'a DerivedGraph, initial: &[(usize, Side)], tag: Tag) -> Self {
        let mut e = Expansion {
            dg,
            in_c: vec![false; dg.len()],
            outside: vec![0; dg.len()],
            left: BTreeSet::new(),
            right: BTreeSet::new(),
            left_weight: 0,
            right_weight: 0,
            size: 0,
            layer_weight: vec![0; dg.d() + 2],
            steps: Vec::new(),
        };
        for &(v, _) in initial {
            if !e.in_c[v] {
                e.in_c[v] = true;
                e.size += 1;
                e.layer_weight[dg.layer_of(v)] += dg.weight(v);
            }
        }
        for &(v, side) in initial {
            e.outside[v] = dg.neighbors(v).filter(|&w| !e.in_c[w]).count() as u32;
            if e.outside[v] > 0 {
                e.insert_border(v, side);
            }
        }
        let mut added: Vec<usize> = initial.iter().map(|&(v, _)| v).collect();
        added.sort_unstable();
        added.dedup();
        e.record(tag, 0, added);
        e
    }

    pub fn graph(&self) -> &'a DerivedGraph {
        self.dg
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_c[v]
    }

    /// Number of members.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_complete(&self) -> bool {
        self.size == self.dg.len()
    }

    pub fn is_border(&self, v: usize) -> bool {
        self.in_c[v] && self.outside[v] > 0
    }

    pub fn border(&self, side: Side) -> &BTreeSet<usize> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn border_weight(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_weight,
            Side::Right => self.right_weight,
        }
    }

    /// The extremity of a border facing the other border: `r` of the left
    /// border (0 if empty), `l` of the right border (`d + 1` if empty).
    pub fn inner_extremity(&self, side: Side) -> usize {
        match side {
            Side::Left => self.dg.extremities(&self.left, Side::Left).1,
            Side::Right => self.dg.extremities(&self.right, Side::Right).0,
        }
    }

    /// `ω(V_i ∩ C)`; 0 outside `1..=d`.
    pub fn layer_weight(&self, i: usize) -> usize {
        self.layer_weight.get(i).copied().unwrap_or(0)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dg.len()).filter(|&v| self.in_c[v])
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn into_trace(self) -> Trace {
        Trace { steps: self.steps }
    }

    /// `V_{i∓1} ∩ N(δ(C) ∩ V_i) \ C`: the vertices an extension in direction
    /// `dir` at layer `i` would add. Sorted; empty when the target layer is
    /// out of range.
    pub fn candidates(&self, dir: Side, i: usize) -> Vec<usize> {
        let range = self.dg.layer(i);
        let mut out: Vec<usize> = self
            .left
            .range(range.clone())
            .chain(self.right.range(range))
            .flat_map(|&x| self.dg.neighbors_toward(x, dir).iter().copied())
            .filter(|&w| !self.in_c[w])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Extends `C` by the vertices of the neighboring layer in direction `dir`
    /// adjacent to the border at layer `i`. Added vertices that stay on the
    /// border join the border on side `dir`. Returns `false`, recording
    /// nothing, when no vertex would be added.
    pub fn extend(&mut self, dir: Side, i: usize, tag: Tag) -> bool {
        let added = self.candidates(dir, i);
        if added.is_empty() {
            return false;
        }
        let dg = self.dg;
        for &a in &added {
            self.in_c[a] = true;
            self.size += 1;
            self.layer_weight[dg.layer_of(a)] += dg.weight(a);
        }
        // Added vertices share a layer, so they are pairwise non-adjacent and
        // every member neighbor of an added vertex is an old member.
        for &a in &added {
            let mut out = 0;
            for w in dg.neighbors(a) {
                if self.in_c[w] {
                    self.outside[w] -= 1;
                    if self.outside[w] == 0 {
                        self.remove_border(w);
                    }
                } else {
                    out += 1;
                }
            }
            self.outside[a] = out;
            if out > 0 {
                self.insert_border(a, dir);
            }
        }
        self.record(Tag { dir: Some(dir), ..tag }, i, added);
        true
    }

    fn insert_border(&mut self, v: usize, side: Side) {
        let w = self.dg.weight(v);
        match side {
            Side::Left => {
                if self.left.insert(v) {
                    self.left_weight += w;
                }
            }
            Side::Right => {
                if self.right.insert(v) {
                    self.right_weight += w;
                }
            }
        }
    }

    fn remove_border(&mut self, v: usize) {
        let w = self.dg.weight(v);
        if self.left.remove(&v) {
            self.left_weight -= w;
        }
        if self.right.remove(&v) {
            self.right_weight -= w;
        }
    }

    fn record(&mut self, tag: Tag, layer: usize, added: Vec<usize>) {
        self.steps.push(Step {
            tag,
            layer,
            added,
            left: self.left.iter().copied().collect(),
            right: self.right.iter().copied().collect(),
        });
    }

    /// Recomputes the border from scratch.
    pub fn border_recomputed(&self) -> BTreeSet<usize> {
        let c: BTreeSet<usize> = self.members().collect();
        border_of(self.dg, &c)
    }
}

/// `δ(C)`: members of `c` with a neighbor outside `c`.
pub fn border_of(dg: &DerivedGraph, c: &BTreeSet<usize>) -> BTreeSet<usize> {
    c.iter()
        .copied()
        .filter(|&v| dg.neighbors(v).any(|w| !c.contains(&w)))
        .collect()
}

/// Expansion state kept as plain sets, updated by the literal set formulas.
/// Used as a reference for the incremental [`Expansion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceState {
    pub c: BTreeSet<usize>,
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub added: BTreeSet<usize>,
    pub bag: BTreeSet<usize>,
}

impl ReferenceState {
    pub fn start(dg: &DerivedGraph, initial: &[(usize, Side)]) -> Self {
        let c: BTreeSet<usize> = initial.iter().map(|&(v, _)| v).collect();
        let delta = border_of(dg, &c);
        let pick = |side| {
            initial
                .iter()
                .filter(|&&(v, s)| s == side && delta.contains(&v))
                .map(|&(v, _)| v)
                .collect::<BTreeSet<usize>>()
        };
        ReferenceState {
            left: pick(Side::Left),
            right: pick(Side::Right),
            bag: c.clone(),
            added: c.clone(),
            c,
        }
    }

    /// Applies one extension, without skipping empty ones.
    pub fn step(&self, dg: &DerivedGraph, dir: Side, i: usize) -> Self {
        let delta = border_of(dg, &self.c);
        let target = match dir {
            Side::Left => i.checked_sub(1),
            Side::Right => Some(i + 1),
        };
        let added: BTreeSet<usize> = match target {
            Some(t) if t >= 1 && t <= dg.d() && i >= 1 && i <= dg.d() => delta
                .iter()
                .filter(|&&x| dg.layer_of(x) == i)
                .flat_map(|&x| dg.neighbors(x))
                .filter(|&w| dg.layer_of(w) == t && !self.c.contains(&w))
                .collect(),
            _ => BTreeSet::new(),
        };
        let c: BTreeSet<usize> = self.c.union(&added).copied().collect();
        let new_delta = border_of(dg, &c);
        let (grown, kept) = match dir {
            Side::Left => (&self.left, &self.right),
            Side::Right => (&self.right, &self.left),
        };
        let grown: BTreeSet<usize> = grown.union(&added).filter(|v| new_delta.contains(v)).copied().collect();
        let kept: BTreeSet<usize> = kept.intersection(&new_delta).copied().collect();
        let (left, right) = match dir {
            Side::Left => (grown, kept),
            Side::Right => (kept, grown),
        };
        let bag = new_delta.union(&added).copied().collect();
        ReferenceState {
            c,
            left,
            right,
            added,
            bag,
        }
    }
}

/// One of the four moves of the simple procedure: an extension in direction
/// `dir` at the inner extremity of border `at`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimpleMove {
    pub dir: Side,
    pub at: Side,
}

/// The moves in their canonical order: extend the left border leftwards,
/// the right border rightwards, the left border rightwards, the right border
/// leftwards.
pub const SIMPLE_MOVES: [SimpleMove; 4] = [
    SimpleMove {
        dir: Side::Left,
        at: Side::Left,
    },
    SimpleMove {
        dir: Side::Right,
        at: Side::Right,
    },
    SimpleMove {
        dir: Side::Right,
        at: Side::Left,
    },
    SimpleMove {
        dir: Side::Left,
        at: Side::Right,
    },
];

/// Chooses among the moves that would grow the current expansion.
pub trait MoveChooser {
    /// `applicable` is nonempty and in canonical order; returns an index into it.
    fn choose(&mut self, applicable: &[SimpleMove]) -> usize;
}

/// Always picks the first applicable move in canonical order.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstApplicable;

impl MoveChooser for FirstApplicable {
    fn choose(&mut self, _: &[SimpleMove]) -> usize {
        0
    }
}

/// Picks uniformly at random from a seeded stream.
#[derive(Debug, Clone)]
pub struct SeededRandom(ChaCha8Rng);

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        SeededRandom(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl MoveChooser for SeededRandom {
    fn choose(&mut self, applicable: &[SimpleMove]) -> usize {
        self.0.gen_range(0..applicable.len())
    }
}

#[derive(Debug, Clone)]
pub struct SimpleRun {
    pub derived: DerivedGraph,
    pub trace: Trace,
    pub decomposition: PathDecomposition,
}

/// The simple conversion: starting from the smallest vertex of the first
/// layer, repeatedly applies a chosen growing move until the whole derived
/// graph is covered. The result is connected but its width is not bounded.
pub fn run_simple(g: &Graph, p: &PathDecomposition, chooser: &mut dyn MoveChooser) -> Result<SimpleRun> {
    let p = p.normalized();
    crate::cp::check_input(g, &p)?;
    let dg = DerivedGraph::build(g, &p);
    if dg.is_empty() || dg.degree(0) == 0 {
        let trace = if dg.is_empty() {
            Trace::default()
        } else {
            Expansion::new(&dg, &[(0, Side::Right)], Tag::START).into_trace()
        };
        return Ok(SimpleRun {
            derived: dg,
            trace,
            decomposition: p,
        });
    }
    let trace = simple_trace(&dg, chooser)?;
    let decomposition = trace.decomposition(&dg);
    Ok(SimpleRun {
        derived: dg,
        trace,
        decomposition,
    })
}

/// Runs the simple procedure on a derived graph.
pub fn simple_trace(dg: &DerivedGraph, chooser: &mut dyn MoveChooser) -> Result<Trace> {
    let mut e = Expansion::new(dg, &[(0, Side::Right)], Tag::START);
    let mut applicable = Vec::with_capacity(4);
    while !e.is_complete() {
        applicable.clear();
        for mv in SIMPLE_MOVES {
            if !e.candidates(mv.dir, e.inner_extremity(mv.at)).is_empty() {
                applicable.push(mv);
            }
        }
        if applicable.is_empty() {
            return Err(Error::invariant("no move grows an incomplete expansion"));
        }
        let mv = applicable[chooser.choose(&applicable)];
        let i = e.inner_extremity(mv.at);
        e.extend(mv.dir, i, Tag::new(Phase::Simple, mv.dir));
    }
    Ok(e.into_trace())
}
