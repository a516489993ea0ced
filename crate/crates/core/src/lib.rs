//! Conversion of path decompositions into connected path decompositions.
//!
//! Given a connected graph and a path decomposition of width `k`, [`cp::run_cp`]
//! computes a connected path decomposition of width at most `2k + 1` in
//! `O(d k^2)` time, where `d` is the number of bags. [`cp::run_cph`] additionally
//! forces a chosen vertex into the first bag. The [`search`] module turns
//! decompositions into node and edge search strategies and simulates them;
//! [`oracle`] computes exact (connected) pathwidth of small graphs.
//!
//! ```
//! use conpath::{cp, graph::parse_graph, decomposition::PathDecomposition};
//!
//! let g = parse_graph("p 3 2\ne a b\ne b c").unwrap();
//! // {a, c} is not connected in G.
//! let p = PathDecomposition::new(vec![vec![0, 2], vec![0, 1, 2]]);
//! let run = cp::run_cp(&g, &p, cp::VerifyLevel::Full).unwrap();
//! assert!(run.decomposition.validate(&g).is_valid());
//! assert!(run.decomposition.is_connected(&g));
//! assert!(run.decomposition.width() <= 2 * p.width() + 1);
//! ```

pub mod branch;
pub mod cp;
pub mod decomposition;
pub mod derived;
pub mod error;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod search;

pub use error::{Error, Result};
