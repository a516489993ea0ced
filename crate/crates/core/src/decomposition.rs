//! Path decompositions, their text format and validation.
//!
//! ```text
//! c optional comment
//! pd <d> <width+1>
//! b <i> <label> <label> ...   (d lines, in bag order)
//! ```

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{is_comment, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathDecomposition {
    bags: Vec<Vec<Vertex>>,
}

impl PathDecomposition {
    /// Normalizing constructor: bags are sorted, empty bags dropped and
    /// consecutive duplicates collapsed.
    pub fn new(bags: Vec<Vec<Vertex>>) -> Self {
        PathDecomposition::from_raw(bags).normalized()
    }

    /// Keeps the bag sequence as given (bags are only sorted). Used where the
    /// exact sequence matters, e.g. when checking the axioms of arbitrary
    /// sequences or counting emitted bags.
    pub fn from_raw(bags: Vec<Vec<Vertex>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn normalized(&self) -> Self {
        let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(self.bags.len());
        for b in &self.bags {
            if b.is_empty() || bags.last() == Some(b) {
                continue;
            }
            bags.push(b.clone());
        }
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn into_bags(self) -> Vec<Vec<Vertex>> {
        self.bags
    }

    /// Number of bags.
    pub fn d(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Per-vertex sorted list of (0-based) bag indices containing it.
    fn occurrences(&self, n: usize) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); n];
        for (i, b) in self.bags.iter().enumerate() {
            for &v in b {
                if v < n {
                    occ[v].push(i);
                }
            }
        }
        occ
    }

    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let n = g.n();
        let stray = self.bags.iter().flatten().copied().find(|&v| v >= n);
        let occ = self.occurrences(n);

        let uncovered_vertex = (0..n).find(|&v| occ[v].is_empty());

        let uncovered_edge = g.edges().into_iter().find(|&(u, v)| {
            let (a, b) = (&occ[u], &occ[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        });

        let mut interpolation = None;
        'outer: for (v, list) in occ.iter().enumerate() {
            for w in list.windows(2) {
                if w[1] != w[0] + 1 {
                    interpolation = Some(InterpolationWitness {
                        i: w[0] + 1,
                        j: w[0] + 2,
                        k: w[1] + 1,
                        vertex: v,
                    });
                    break 'outer;
                }
            }
        }

        ValidationReport {
            stray_vertex: stray,
            uncovered_vertex,
            uncovered_edge,
            interpolation,
        }
    }

    /// Smallest 1-based `i` such that the union of the first `i` bags does
    /// not induce a connected subgraph, or `None` if every prefix does.
    pub fn first_disconnected_prefix(&self, g: &Graph) -> Option<usize> {
        let n = g.n();
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        let mut components = 0usize;
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                components += 1;
                for &w in g.neighbors(v) {
                    if seen[w] && uf.union(v, w) {
                        components -= 1;
                    }
                }
            }
            if components != 1 {
                return Some(i + 1);
            }
        }
        None
    }

    pub fn is_connected(&self, g: &Graph) -> bool {
        self.first_disconnected_prefix(g).is_none()
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "pd {} {}", self.d(), self.width() + 1);
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(s, "b {}", i + 1);
            for &v in bag {
                let _ = write!(s, " {}", g.label(v));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterpolationWitness {
    /// 1-based bag indices with `i < j < k`.
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub stray_vertex: Option<Vertex>,
    pub uncovered_vertex: Option<Vertex>,
    pub uncovered_edge: Option<(Vertex, Vertex)>,
    pub interpolation: Option<InterpolationWitness>,
}

impl ValidationReport {
    pub fn vertex_cover(&self) -> bool {
        self.uncovered_vertex.is_none() && self.stray_vertex.is_none()
    }

    pub fn edge_cover(&self) -> bool {
        self.uncovered_edge.is_none()
    }

    pub fn interpolation(&self) -> bool {
        self.interpolation.is_none()
    }

    pub fn is_valid(&self) -> bool {
        self.vertex_cover() && self.edge_cover() && self.interpolation()
    }

    pub fn render(&self, g: &Graph) -> String {
        let mut s = String::new();
        let verdict = |ok: bool| if ok { "pass" } else { "fail" };
        let _ = write!(s, "vertex_cover={}", verdict(self.vertex_cover()));
        if let Some(v) = self.uncovered_vertex {
            let _ = write!(s, " witness={}", g.label(v));
        } else if let Some(v) = self.stray_vertex {
            let _ = write!(s, " witness=#{v}");
        }
        s.push('\n');
        let _ = write!(s, "edge_cover={}", verdict(self.edge_cover()));
        if let Some((u, v)) = self.uncovered_edge {
            let _ = write!(s, " witness={}-{}", g.label(u), g.label(v));
        }
        s.push('\n');
        let _ = write!(s, "interpolation={}", verdict(self.interpolation()));
        if let Some(w) = self.interpolation {
            let _ = write!(s, " witness=i={},j={},k={},v={}", w.i, w.j, w.k, g.label(w.vertex));
        }
        s.push('\n');
        s
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertex_cover={} edge_cover={} interpolation={}",
            self.vertex_cover(),
            self.edge_cover(),
            self.interpolation()
        )
    }
}

/// Parses a decomposition file against the labels of `g`. The result is
/// normalized.
pub fn parse_decomposition(text: &str, g: &Graph) -> Result<PathDecomposition> {
    Ok(parse_decomposition_raw(text, g)?.normalized())
}

/// Like [`parse_decomposition`] but keeps empty and repeated bags.
pub fn parse_decomposition_raw(text: &str, g: &Graph) -> Result<PathDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("pd") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate header"));
                }
                let d = number(tok.next(), line_no, "bag count")?;
                let w = number(tok.next(), line_no, "bag size")?;
                if tok.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after header"));
                }
                header = Some((d, w));
            }
            Some("b") => {
                if header.is_none() {
                    return Err(Error::parse(line_no, "bag before header"));
                }
                let i = number(tok.next(), line_no, "bag index")?;
                if i != bags.len() + 1 {
                    return Err(Error::parse(
                        line_no,
                        format!("expected bag {}, found {i}", bags.len() + 1),
                    ));
                }
                let bag = tok
                    .map(|l| g.vertex(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                bags.push(bag);
            }
            Some(other) => {
                return Err(Error::parse(line_no, format!("unexpected token `{other}`")));
            }
            None => unreachable!(),
        }
    }
    let Some((d, w)) = header else {
        return Err(Error::parse(0, "missing `pd <d> <width+1>` header"));
    };
    if bags.len() != d {
        return Err(Error::parse(0, format!("header announces {d} bags, found {}", bags.len())));
    }
    let p = PathDecomposition::from_raw(bags);
    let actual = p.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != w {
        return Err(Error::parse(0, format!("header announces bag size {w}, largest bag has {actual}")));
    }
    Ok(p)
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what}")))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two sets were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
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
    fn path_bags_pass_all_axioms() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        let r = p.validate(&g);
        assert!(r.vertex_cover() && r.edge_cover() && r.interpolation());
        assert!(p.is_connected(&g));
    }

    #[test]
    fn interpolation_witness() {
        let g = parse_graph("p 2 0").unwrap();
        let p = PathDecomposition::from_raw(vec![vec![0], vec![1], vec![0]]);
        let r = p.validate(&g);
        assert!(r.vertex_cover() && r.edge_cover());
        assert_eq!(
            r.interpolation,
            Some(InterpolationWitness {
                i: 1,
                j: 2,
                k: 3,
                vertex: 0
            })
        );
    }

    #[test]
    fn wide_first_bag() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 2], vec![0, 1, 2]]);
        assert!(p.validate(&g).is_valid());
        assert_eq!(p.width(), 2);
        assert_eq!(p.first_disconnected_prefix(&g), Some(1));
    }

    #[test]
    fn edge_and_vertex_witnesses() {
        let g = path_abc();
        let p = PathDecomposition::new(vec![vec![0, 1], vec![2]]);
        let r = p.validate(&g);
        assert_eq!(r.uncovered_edge, Some((1, 2)));
        let q = PathDecomposition::new(vec![vec![0, 1]]);
        assert_eq!(q.validate(&g).uncovered_vertex, Some(2));
    }

    #[test]
    fn normalization() {
        let p = PathDecomposition::new(vec![vec![], vec![1, 0], vec![0, 1], vec![], vec![1]]);
        assert_eq!(p.bags(), &[vec![0, 1], vec![1]]);
        assert_eq!(p.d(), 2);
        assert_eq!(p.width(), 1);
    }

    #[test]
    fn parse_and_render() {
        let g = path_abc();
        let p = parse_decomposition("c x\npd 3 2\nb 1 a b\nb 2\nb 3 b c\n", &g).unwrap();
        assert_eq!(p.bags(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(p.to_text(&g), "pd 2 2\nb 1 a b\nb 2 b c\n");
    }

    #[test]
    fn parse_errors() {
        let g = path_abc();
        assert!(matches!(
            parse_decomposition("pd 1 1\nb 1 z", &g),
            Err(Error::UnknownLabel(_))
        ));
        assert!(parse_decomposition("", &g).is_err());
        assert!(parse_decomposition("pd 2 2\nb 1 a b", &g).is_err());
        assert!(parse_decomposition("pd 1 3\nb 1 a b", &g).is_err());
        assert!(matches!(
            parse_decomposition("pd 1 2\nb 2 a b", &g),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
