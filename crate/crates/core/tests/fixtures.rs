//! Hand-built instances with known answers.

mod common;

use common::{naive_cp, worked_example, worked_example_expansions, Set};
use conpath::cp::{check_nested, run_cp, run_on_derived, Start, VerifyLevel};
use conpath::decomposition::PathDecomposition;
use conpath::derived::{DerivedGraph, Side};
use conpath::expansion::{Expansion, Tag};
use conpath::graph::parse_graph;

fn members_after(dg: &DerivedGraph, run: &conpath::cp::DerivedRun, count: usize) -> Set {
    let members: Set = run.trace.steps[..count].iter().flat_map(|s| s.added.iter().copied()).collect();
    assert!(members.iter().all(|&v| v < dg.len()));
    members
}

#[test]
fn worked_run_expansions() {
    let dg = worked_example();
    assert_eq!(dg.weight(0), 2);
    let run = run_on_derived(&dg, Start::First, VerifyLevel::Full).unwrap();
    assert_eq!(run.init_end, 3);
    let sides: Vec<Side> = run.iterations.iter().map(|it| it.heavy).collect();
    assert_eq!(sides, [Side::Right, Side::Left, Side::Right, Side::Left]);
    let mut marks = vec![run.init_end];
    marks.extend(run.iterations.iter().map(|it| it.end));
    let got: Vec<Set> = marks.iter().map(|&m| members_after(&dg, &run, m)).collect();
    assert_eq!(got, worked_example_expansions());

    let naive = naive_cp(&dg, &[(0, Side::Right)]);
    assert_eq!(naive.init_end, run.init_end);
    let naive_marks: Vec<usize> = naive.iteration_ends.clone();
    assert_eq!(naive_marks, marks[1..]);
}

#[test]
fn worked_run_trace() {
    let dg = worked_example();
    let run = run_on_derived(&dg, Start::First, VerifyLevel::Full).unwrap();
    let expected = "\
m=1 step=start A={0} bL={} bR={0} |B|=2
m=2 step=init:RE A={4} bL={} bR={4} |B|=3
m=3 step=init:RE A={5} bL={} bR={5} |B|=1
m=4 step=cross:LE A={2,3} bL={2} bR={5} |B|=5
m=5 step=settle:RE A={7} bL={2} bR={} |B|=4
m=6 step=cross:RE A={6} bL={2} bR={6} |B|=5
m=7 step=settle:LE A={1} bL={} bR={6} |B|=3
m=8 step=settle:RE A={9} bL={} bR={9} |B|=3
m=9 step=settle:RE A={10} bL={} bR={10} |B|=1
m=10 step=cross:LE A={8} bL={8} bR={10} |B|=3
m=11 step=cross:RE A={11} bL={} bR={10,11} |B|=2
m=12 step=settle:RE A={12,13} bL={} bR={12} |B|=2
m=13 step=settle:RE A={14} bL={} bR={} |B|=3
";
    assert_eq!(run.trace.render(&dg), expected);
}

/// A star whose leaves enter one bag at a time before the centre: the first
/// prefix is connected, the next three are not, the last is.
#[test]
fn prefixes_disconnected_in_the_middle() {
    let g = parse_graph("p 5 4\ne w a\ne w z\ne w y\ne w x").unwrap();
    let id = |l: &str| g.vertex(l).unwrap();
    let bags: Vec<Vec<usize>> = vec![
        vec![id("a")],
        vec![id("a"), id("z")],
        vec![id("a"), id("z"), id("y")],
        vec![id("a"), id("z"), id("y"), id("x")],
        vec![id("a"), id("z"), id("y"), id("x"), id("w")],
    ];
    let p = PathDecomposition::new(bags);
    assert!(p.validate(&g).is_valid());
    assert_eq!(p.first_disconnected_prefix(&g), Some(2));
    for i in 2..=4 {
        let prefix: Vec<usize> = p.bags()[..i].concat();
        let mut prefix = prefix;
        prefix.sort_unstable();
        prefix.dedup();
        assert!(g.connected_components(&prefix).len() > 1);
    }
    let run = run_cp(&g, &p, VerifyLevel::Full).unwrap();
    assert!(run.decomposition.is_connected(&g));
    assert!(run.decomposition.width() <= 9);
}

/// Left border x1, x2, x3 in the first layer and x4 in layer 5; right border
/// y1 in layer 8 and y2, y3, y4 in layer 10.
fn nested_instance() -> (DerivedGraph, Vec<(usize, Side)>) {
    let weights = [
        vec![1, 1, 1],
        vec![3, 1],
        vec![3],
        vec![3],
        vec![3, 1],
        vec![4, 1],
        vec![4],
        vec![3, 1, 1],
        vec![3, 4],
        vec![1, 1, 1],
    ];
    let edges = [
        (0, 3),
        (1, 3),
        (2, 3),
        (0, 4),
        (1, 4),
        (2, 4),
        (3, 5),
        (5, 6),
        (6, 7),
        (7, 9),
        (8, 9),
        (8, 10),
        (9, 11),
        (11, 12),
        (11, 13),
        (12, 15),
        (13, 16),
        (14, 16),
        (15, 17),
        (15, 18),
        (15, 19),
        (16, 17),
        (16, 18),
        (16, 19),
    ];
    let dg = DerivedGraph::from_layers(&weights, &edges).unwrap();
    let outside = [4, 10, 14, 16];
    let initial = (0..20)
        .filter(|v| !outside.contains(v))
        .map(|v| (v, if dg.layer_of(v) <= 5 { Side::Left } else { Side::Right }))
        .collect();
    (dg, initial)
}

#[test]
fn nested_expansion_example() {
    let (dg, initial) = nested_instance();
    let e = Expansion::new(&dg, &initial, Tag::START);
    let left: Vec<usize> = e.border(Side::Left).iter().copied().collect();
    let right: Vec<usize> = e.border(Side::Right).iter().copied().collect();
    assert_eq!(left, [0, 1, 2, 8]);
    assert_eq!(right, [13, 17, 18, 19]);
    assert_eq!((e.inner_extremity(Side::Left), e.inner_extremity(Side::Right)), (5, 8));
    let report = check_nested(&e).unwrap();
    assert!(report.is_nested(), "{report}");
    // The inequalities the nested conditions imply for this layout.
    for i in 1..=4 {
        assert!(e.layer_weight(i) >= 3);
    }
    assert!(e.layer_weight(5) >= 4);
    let floor = e.border_weight(Side::Left).min(e.border_weight(Side::Right));
    assert!(e.layer_weight(6) >= floor);
}

#[test]
fn nested_conditions_detect_a_light_layer() {
    let (dg, initial) = nested_instance();
    // Drop the spine vertex of layer 7 from the weights: rebuild with weight 1.
    let mut weights: Vec<Vec<usize>> = (1..=dg.d()).map(|i| dg.layer(i).map(|v| dg.weight(v)).collect()).collect();
    weights[6][0] = 1;
    let edges: Vec<(usize, usize)> = (0..dg.len())
        .flat_map(|u| dg.right_neighbors(u).iter().map(move |&v| (u, v)))
        .collect();
    let light = DerivedGraph::from_layers(&weights, &edges).unwrap();
    let e = Expansion::new(&light, &initial, Tag::START);
    let report = check_nested(&e).unwrap();
    assert!(!report.layers_between);
    assert!(report.prefix_borders);
}

#[test]
fn chain_to_the_first_layer_is_absorbed_in_two_steps() {
    // Three layers; the right end of a chain is the only left border vertex.
    let dg = DerivedGraph::from_layers(&[vec![1], vec![1], vec![1]], &[(0, 1), (1, 2)]).unwrap();
    let mut e = Expansion::new(&dg, &[(2, Side::Left)], Tag::START);
    assert_eq!(e.inner_extremity(Side::Left), 3);
    let mut steps = 0;
    while e.inner_extremity(Side::Left) > 1 {
        let x = e.inner_extremity(Side::Left);
        assert!(e.extend(Side::Left, x, Tag::START));
        steps += 1;
    }
    assert_eq!(steps, 2);
    assert!(e.contains(0) && e.contains(1));
}

#[test]
fn derived_graph_of_a_disconnected_first_bag() {
    let g = parse_graph("p 3 2\ne a b\ne b c").unwrap();
    let p = PathDecomposition::new(vec![vec![0, 2], vec![0, 1, 2]]);
    let dg = DerivedGraph::build(&g, &p);
    assert_eq!(dg.layer(1).map(|v| dg.weight(v)).collect::<Vec<_>>(), [1, 1]);
    assert_eq!(dg.layer(2).map(|v| dg.weight(v)).collect::<Vec<_>>(), [3]);
    assert_eq!(dg.edge_count(), 2);
}
