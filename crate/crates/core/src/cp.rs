//! The width-bounded conversion and its homebase variant.
//!
//! Both start from a small expansion, absorb a branch up to its bottleneck,
//! and then iterate: absorb the maximal branch of the heavier border, extend
//! once across to the other side, and absorb both current maximal branches up
//! to their bottlenecks. Every bag has at most `2 (k + 1)` vertices for an
//! input of width `k`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::branch::{find_maximal_branch, grow_branch, Branch};
use crate::decomposition::PathDecomposition;
use crate::derived::{DerivedGraph, Side};
use crate::error::{Error, Result};
use crate::expansion::{Expansion, Phase, Tag, Trace};
use crate::graph::{Graph, Vertex};

/// How much runtime checking accompanies a run. Results never depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyLevel {
    /// Only the termination guards and the bag weight bound.
    Off,
    /// Also checks that the left border stays before the right border.
    #[default]
    Cheap,
    /// Also recomputes borders, connectivity, the nested conditions, the set
    /// equations of every branch absorption and the branch cut bounds.
    Full,
}

/// Expansion counts (number of recorded expansions so far) delimiting one
/// iteration of the main loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iteration {
    pub start: usize,
    pub after_grow: usize,
    pub after_cross: usize,
    pub end: usize,
    /// The heavier border, whose maximal branch was absorbed first.
    pub heavy: Side,
    /// Target of that maximal branch.
    pub grow_target: usize,
    /// `(target, bottleneck)` of the final left and right branches, if the
    /// border was nonempty.
    pub settle_left: Option<(usize, usize)>,
    pub settle_right: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct CpRun {
    pub derived: DerivedGraph,
    pub trace: Trace,
    /// Expansion count at the end of initialization.
    pub init_end: usize,
    pub iterations: Vec<Iteration>,
    /// Number of bags before collapsing consecutive duplicates.
    pub raw_bag_count: usize,
    /// The input was returned unchanged (a single-bag input).
    pub unchanged: bool,
    pub input_width: usize,
    pub input_bags: usize,
    pub decomposition: PathDecomposition,
}

impl CpRun {
    pub fn bound(&self) -> usize {
        2 * self.input_width + 1
    }

    /// `k_in=<k> width_out=<w> d=<d> m=<m> bound=<2k+1> ok=<bool>`.
    pub fn stats(&self, g: &Graph) -> String {
        let out = &self.decomposition;
        let ok = out.validate(g).is_valid() && out.is_connected(g) && out.width() <= self.bound();
        format!(
            "k_in={} width_out={} d={} m={} bound={} ok={}",
            self.input_width,
            out.width(),
            self.input_bags,
            self.raw_bag_count,
            self.bound(),
            ok
        )
    }
}

/// Checks the preconditions shared by all conversions: `g` connected and `p`
/// a valid decomposition of `g`.
pub fn check_input(g: &Graph, p: &PathDecomposition) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let report = p.validate(g);
    if !report.is_valid() {
        let text = report.render(g);
        let failed: Vec<&str> = text.lines().filter(|l| l.contains("=fail")).collect();
        return Err(Error::InvalidDecomposition(failed.join("; ")));
    }
    Ok(())
}

/// Converts `p` into a connected path decomposition of width at most
/// `2 width(p) + 1`.
pub fn run_cp(g: &Graph, p: &PathDecomposition, verify: VerifyLevel) -> Result<CpRun> {
    convert(g, p, None, verify)
}

/// Like [`run_cp`], with `homebase` in the first bag.
pub fn run_cph(g: &Graph, p: &PathDecomposition, homebase: Vertex, verify: VerifyLevel) -> Result<CpRun> {
    if homebase >= g.n() {
        return Err(Error::UnknownVertex(homebase));
    }
    convert(g, p, Some(homebase), verify)
}

fn convert(g: &Graph, p: &PathDecomposition, homebase: Option<Vertex>, verify: VerifyLevel) -> Result<CpRun> {
    let p = p.normalized();
    check_input(g, &p)?;
    let dg = DerivedGraph::build(g, &p);
    let start = if dg.is_empty() {
        None
    } else {
        match homebase {
            None => (dg.degree(0) > 0).then_some(Start::First),
            Some(h) => homebase_pair(&dg, h).map(|(x, y)| Start::Pair(x, y)),
        }
    };
    let input_width = p.width();
    let input_bags = p.d();
    let Some(start) = start else {
        let trace = if dg.is_empty() {
            Trace::default()
        } else {
            Expansion::new(&dg, &[(0, Side::Right)], Tag::START).into_trace()
        };
        return Ok(CpRun {
            derived: dg,
            trace,
            init_end: 1,
            iterations: Vec::new(),
            raw_bag_count: input_bags,
            unchanged: true,
            input_width,
            input_bags,
            decomposition: p,
        });
    };
    let out = run_on_derived(&dg, start, verify)?;
    let decomposition = out.trace.decomposition(&dg);
    Ok(CpRun {
        raw_bag_count: out.trace.len(),
        trace: out.trace,
        init_end: out.init_end,
        iterations: out.iterations,
        derived: dg,
        unchanged: false,
        input_width,
        input_bags,
        decomposition,
    })
}

/// How the first expansion is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// The smallest vertex of the first layer, as a right border.
    First,
    /// Two adjacent derived vertices in consecutive layers, the first one in
    /// the lower layer.
    Pair(usize, usize),
}

/// The initial pair for a homebase: the smallest derived vertex whose
/// component contains `h`, with its smallest right neighbor, or else its
/// smallest left neighbor. `None` if that vertex is isolated.
pub fn homebase_pair(dg: &DerivedGraph, h: Vertex) -> Option<(usize, usize)> {
    let v = (0..dg.len()).find(|&v| dg.component(v).binary_search(&h).is_ok())?;
    if let Some(&y) = dg.right_neighbors(v).first() {
        Some((v, y))
    } else {
        dg.left_neighbors(v).first().map(|&x| (x, v))
    }
}

#[derive(Debug, Clone)]
pub struct DerivedRun {
    pub trace: Trace,
    pub init_end: usize,
    pub iterations: Vec<Iteration>,
}

/// Runs the conversion directly on a derived graph. The first layer's
/// smallest vertex (for [`Start::First`]) must have a neighbor.
pub fn run_on_derived(dg: &DerivedGraph, start: Start, verify: VerifyLevel) -> Result<DerivedRun> {
    let initial: Vec<(usize, Side)> = match start {
        Start::First => vec![(0, Side::Right)],
        Start::Pair(x, y) => {
            if dg.layer_of(x) + 1 != dg.layer_of(y) || !dg.right_neighbors(x).contains(&y) {
                return Err(Error::invariant("initial pair is not an edge between consecutive layers"));
            }
            vec![(x, Side::Left), (y, Side::Right)]
        }
    };
    let mut run = Engine {
        e: Expansion::new(dg, &initial, Tag::START),
        verify,
        checked: 0,
    };
    run.checkpoint(None)?;

    let init_sides: &[Side] = match start {
        Start::First => &[Side::Right],
        Start::Pair(..) => &[Side::Left, Side::Right],
    };
    for &side in init_sides {
        if run.e.border(side).is_empty() {
            continue;
        }
        let b = find_maximal_branch(&run.e, side)?;
        run.absorb(&b, b.bottleneck().0, Phase::Init)?;
    }
    let init_end = run.e.steps().len();

    let mut iterations = Vec::new();
    // Each iteration grows C, so this bounds the loop with room to spare.
    let limit = dg.len() + 1;
    while !run.e.is_complete() {
        if iterations.len() > limit {
            return Err(Error::invariant("main loop does not terminate"));
        }
        if verify == VerifyLevel::Full {
            let report = check_nested(&run.e)?;
            if !report.is_nested() {
                return Err(Error::invariant(format!(
                    "expansion {} at an iteration start is not nested: {report}",
                    run.e.steps().len()
                )));
            }
        }
        iterations.push(run.iteration()?);
    }
    Ok(DerivedRun {
        trace: run.e.into_trace(),
        init_end,
        iterations,
    })
}

struct Engine<'a> {
    e: Expansion<'a>,
    verify: VerifyLevel,
    /// Number of expansions already checked.
    checked: usize,
}

impl Engine<'_> {
    fn iteration(&mut self) -> Result<Iteration> {
        let start = self.e.steps().len();
        let size_before = self.e.size();
        let heavy = if self.e.border_weight(Side::Left) > self.e.border_weight(Side::Right) {
            Side::Left
        } else {
            Side::Right
        };
        let b1 = find_maximal_branch(&self.e, heavy)?;
        let t1 = b1.target;
        self.absorb(&b1, t1, Phase::Grow)?;
        let after_grow = self.e.steps().len();
        if self.verify == VerifyLevel::Full && after_grow > start {
            let r = nested_i(&self.e);
            if !r {
                return Err(Error::invariant(format!(
                    "expansion {after_grow} after absorbing the heavier branch violates the layer weight condition"
                )));
            }
        }

        let cross = heavy.opposite();
        if self.e.extend(cross, t1, Tag::new(Phase::Cross, cross)) {
            self.checkpoint(None)?;
        }
        let after_cross = self.e.steps().len();

        let right = if self.e.border(Side::Right).is_empty() {
            None
        } else {
            Some(find_maximal_branch(&self.e, Side::Right)?)
        };
        let left = if self.e.border(Side::Left).is_empty() {
            None
        } else {
            Some(find_maximal_branch(&self.e, Side::Left)?)
        };
        let expected = if self.verify == VerifyLevel::Full {
            let mut c: BTreeSet<usize> = self.e.members().collect();
            for b in left.iter().chain(right.iter()) {
                self.check_branch(b)?;
                c.extend(b.new_vertices_to(&self.e, b.bottleneck().0));
            }
            Some(c)
        } else {
            None
        };
        if let Some(b) = &left {
            self.process(Side::Left, b.bottleneck().0, Phase::Settle)?;
        }
        if let Some(b) = &right {
            self.process(Side::Right, b.bottleneck().0, Phase::Settle)?;
        }
        if let Some(c) = expected {
            if c != self.e.members().collect::<BTreeSet<_>>() {
                return Err(Error::invariant("settling both branches did not add exactly their vertices"));
            }
        }
        let end = self.e.steps().len();
        if self.e.size() == size_before {
            return Err(Error::invariant(format!("iteration starting at expansion {start} added nothing")));
        }
        Ok(Iteration {
            start,
            after_grow,
            after_cross,
            end,
            heavy,
            grow_target: t1,
            settle_left: left.map(|b| (b.target, b.bottleneck().0)),
            settle_right: right.map(|b| (b.target, b.bottleneck().0)),
        })
    }

    /// Absorbs `b` up to cut `t`, checking the resulting set in full mode.
    fn absorb(&mut self, b: &Branch, t: usize, phase: Phase) -> Result<()> {
        let expected = if self.verify == VerifyLevel::Full {
            self.check_branch(b)?;
            let mut c: BTreeSet<usize> = self.e.members().collect();
            c.extend(b.new_vertices_to(&self.e, t));
            Some(c)
        } else {
            None
        };
        self.process(b.side, t, phase)?;
        if let Some(c) = expected {
            if c != self.e.members().collect::<BTreeSet<_>>() {
                return Err(Error::invariant(format!(
                    "absorbing the {} branch up to {t} did not add exactly its vertices",
                    b.side.letter()
                )));
            }
        }
        Ok(())
    }

    /// Extends on `side` at the border's inner extremity until that extremity
    /// reaches `t`. Every extension must move the border.
    fn process(&mut self, side: Side, t: usize, phase: Phase) -> Result<()> {
        loop {
            let x = self.e.inner_extremity(side);
            let pending = match side {
                Side::Left => x > t,
                Side::Right => x < t,
            };
            if !pending {
                return Ok(());
            }
            self.e.extend(side, x, Tag::new(phase, side));
            let y = self.e.inner_extremity(side);
            let moved = match side {
                Side::Left => y < x,
                Side::Right => y > x,
            };
            if !moved {
                return Err(Error::invariant(format!(
                    "extension at layer {x} did not move the {} border",
                    side.letter()
                )));
            }
            self.checkpoint(None)?;
        }
    }

    /// Checks the newest expansions according to the verify level.
    fn checkpoint(&mut self, _: Option<()>) -> Result<()> {
        let dg = self.e.graph();
        while self.checked < self.e.steps().len() {
            let j = self.checked;
            self.checked += 1;
            let step = &self.e.steps()[j];
            let w = dg.weight_of(step.bag());
            if w > 2 * dg.width() {
                return Err(Error::invariant(format!(
                    "bag {} has weight {w} above twice the width {}",
                    j + 1,
                    dg.width()
                )));
            }
            if self.verify == VerifyLevel::Off {
                continue;
            }
            let r = step.left.last().map_or(0, |&v| dg.layer_of(v));
            let l = step.right.first().map_or(dg.d() + 1, |&v| dg.layer_of(v));
            if r >= l {
                return Err(Error::invariant(format!(
                    "expansion {}: left border reaches layer {r}, right border starts at {l}",
                    j + 1
                )));
            }
        }
        if self.verify == VerifyLevel::Full {
            let delta = self.e.border_recomputed();
            let left = self.e.border(Side::Left);
            let right = self.e.border(Side::Right);
            if !left.is_disjoint(right) || delta != left.union(right).copied().collect() {
                return Err(Error::invariant("borders do not partition the recomputed border"));
            }
            if !induces_connected(dg, &self.e.members().collect()) {
                return Err(Error::invariant("expansion does not induce a connected subgraph"));
            }
            if !nested_ii(&self.e) {
                return Err(Error::invariant(format!(
                    "expansion {} violates the prefix border weight condition",
                    self.e.steps().len()
                )));
            }
        }
        Ok(())
    }

    /// Nesting of truncated branches and the per-cut weight bound.
    fn check_branch(&self, b: &Branch) -> Result<()> {
        if !b.proper {
            return Err(Error::invariant("maximal branch is not proper"));
        }
        for run in &b.cuts {
            if run.weight > run.border_beyond + run.layer_weight {
                return Err(Error::invariant(format!(
                    "cut {} of the {} branch weighs {} above its bound {}",
                    run.near,
                    b.side.letter(),
                    run.weight,
                    run.border_beyond + run.layer_weight
                )));
            }
            for j in [run.near, run.far] {
                let sub = grow_branch(&self.e, b.side, j)?;
                let agree = sub.layers.iter().all(|(k, vs)| {
                    let past = match b.side {
                        Side::Left => *k < j,
                        Side::Right => *k > j,
                    };
                    past || b.layers.iter().any(|(k2, vs2)| k2 == k && vs2 == vs)
                });
                if !agree || sub.cut_weight(j) != b.cut_weight(j) {
                    return Err(Error::invariant(format!(
                        "{} branch truncated at {j} disagrees with the maximal branch",
                        b.side.letter()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn induces_connected(dg: &DerivedGraph, set: &BTreeSet<usize>) -> bool {
    let Some(&first) = set.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(v) = queue.pop_front() {
        for w in dg.neighbors(v) {
            if set.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Outcome of the three nested conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedReport {
    /// Layers between the borders weigh at least the lighter border.
    pub layers_between: bool,
    /// Each layer inside a border weighs at least the border part up to it.
    pub prefix_borders: bool,
    /// Each border extremity is a bottleneck of every proper branch.
    pub bottlenecks: bool,
}

impl NestedReport {
    pub fn is_nested(&self) -> bool {
        self.layers_between && self.prefix_borders && self.bottlenecks
    }
}

impl std::fmt::Display for NestedReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "layers_between={} prefix_borders={} bottlenecks={}",
            self.layers_between, self.prefix_borders, self.bottlenecks
        )
    }
}

/// Evaluates the nested conditions for the current expansion. The bottleneck
/// condition is checked over the proper branches, i.e. the cuts of the
/// maximal branch.
pub fn check_nested(e: &Expansion<'_>) -> Result<NestedReport> {
    let mut bottlenecks = true;
    for side in [Side::Left, Side::Right] {
        if e.border(side).is_empty() {
            continue;
        }
        let b = find_maximal_branch(e, side)?;
        if b.bottleneck().1 < e.border_weight(side) {
            bottlenecks = false;
        }
    }
    Ok(NestedReport {
        layers_between: nested_i(e),
        prefix_borders: nested_ii(e),
        bottlenecks,
    })
}

fn nested_i(e: &Expansion<'_>) -> bool {
    let floor = e.border_weight(Side::Left).min(e.border_weight(Side::Right));
    let (r, l) = (e.inner_extremity(Side::Left), e.inner_extremity(Side::Right));
    (r..=l).all(|i| e.layer_weight(i) >= floor)
}

fn nested_ii(e: &Expansion<'_>) -> bool {
    let dg = e.graph();
    let d = dg.d();
    let r = e.inner_extremity(Side::Left);
    let mut acc = 0;
    for i in 1..=r {
        acc += dg.weight_of(e.border(Side::Left).range(dg.layer(i)).copied());
        if e.layer_weight(i) < acc {
            return false;
        }
    }
    let l = e.inner_extremity(Side::Right);
    let mut acc = 0;
    for i in (l..=d).rev() {
        acc += dg.weight_of(e.border(Side::Right).range(dg.layer(i)).copied());
        if e.layer_weight(i) < acc {
            return false;
        }
    }
    true
}

/// Human-readable summary of the iteration structure of a run.
pub fn render_iterations(run: &CpRun) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "init end={}", run.init_end);
    for (n, it) in run.iterations.iter().enumerate() {
        let _ = writeln!(
            s,
            "iteration {} heavy={} t1={} marks={},{},{},{}",
            n + 1,
            it.heavy.letter(),
            it.grow_target,
            it.start,
            it.after_grow,
            it.after_cross,
            it.end
        );
    }
    s
}
