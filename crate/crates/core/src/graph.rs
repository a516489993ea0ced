//! Simple undirected graphs with dense vertex ids and string labels.
//!
//! Text format, line oriented:
//!
//! ```text
//! c optional comment
//! p <n> <m>
//! e <label> <label>      (m lines)
//! ```
//!
//! Ids are assigned in first-appearance order of labels. Vertices that never
//! appear on an edge line receive the smallest unused positive integer labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<Vertex>>,
    edges: HashSet<(Vertex, Vertex)>,
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `1..=n`.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Graph::with_labels(labels, edges)
    }

    /// Builds a graph from explicit labels. Duplicate edges are merged,
    /// self-loops rejected.
    pub fn with_labels(labels: Vec<String>, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::parse(0, format!("duplicate label `{l}`")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut set = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u].clone()));
            }
            if set.insert(key(u, v)) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            labels,
            index,
            adj,
            edges: set,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&key(u, v))
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<Vertex> {
        self.index.get(label).copied()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self.edges.iter().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let all: Vec<Vertex> = (0..self.n()).collect();
        self.connected_components(&all).len() == 1
    }

    /// Connected components of the subgraph induced by `subset`. Each
    /// component is sorted; components are ordered by smallest member.
    pub fn connected_components(&self, subset: &[Vertex]) -> Vec<Vec<Vertex>> {
        let mut inside: HashSet<Vertex> = subset.iter().copied().collect();
        let mut roots: Vec<Vertex> = inside.iter().copied().collect();
        roots.sort_unstable();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for r in roots {
            if !inside.remove(&r) {
                continue;
            }
            let mut comp = vec![r];
            queue.push_back(r);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if inside.remove(&w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p {} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {} {}", self.labels[u], self.labels[v]);
        }
        s
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, Vertex> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_lines = 0usize;

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate header"));
                }
                let n = parse_count(tok.next(), line_no, "vertex count")?;
                let m = parse_count(tok.next(), line_no, "edge count")?;
                if tok.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after header"));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(Error::parse(line_no, "edge before header"));
                };
                let (Some(a), Some(b), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(Error::parse(line_no, "expected `e <label> <label>`"));
                };
                if a == b {
                    return Err(Error::SelfLoop(a.to_string()));
                }
                let mut id = |l: &str| -> Result<Vertex> {
                    if let Some(&v) = index.get(l) {
                        return Ok(v);
                    }
                    if labels.len() == n {
                        return Err(Error::parse(line_no, format!("more than {n} distinct labels")));
                    }
                    index.insert(l.to_string(), labels.len());
                    labels.push(l.to_string());
                    Ok(labels.len() - 1)
                };
                let u = id(a)?;
                let v = id(b)?;
                edges.push((u, v));
                edge_lines += 1;
            }
            Some(other) => {
                return Err(Error::parse(line_no, format!("unexpected token `{other}`")));
            }
            None => unreachable!(),
        }
    }

    let Some((n, m)) = header else {
        return Err(Error::parse(0, "missing `p <n> <m>` header"));
    };
    if edge_lines != m {
        return Err(Error::parse(0, format!("header announces {m} edges, found {edge_lines}")));
    }
    let mut next = 1usize;
    while labels.len() < n {
        while index.contains_key(&next.to_string()) {
            next += 1;
        }
        index.insert(next.to_string(), labels.len());
        labels.push(next.to_string());
    }
    Graph::with_labels(labels, &edges)
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what}")))
}

pub(crate) fn is_comment(line: &str) -> bool {
    line.starts_with('c') && (line.len() == 1 || line.as_bytes()[1].is_ascii_whitespace())
}
