use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge-indexed graph. The order of `edges` fixes the edge numbering used
/// by every subset operation, so it is preserved exactly as loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    directed: bool,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Domain(format!(
                    "edge {i} ({u}, {v}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Domain(format!("edge {i} is a self-loop on vertex {u}")));
            }
        }
        Ok(Self { vertex_count, edges, directed })
    }

    /// Parses an edge list: one `u v` pair per line, 0-based indices,
    /// `#` starts a comment. The vertex count is one past the largest index.
    pub fn parse(text: &str, directed: bool) -> Result<Self> {
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found {} fields", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("`{s}` is not a vertex index"),
                })
            };
            let (u, v) = (parse(fields[0])?, parse(fields[1])?);
            if u == v {
                return Err(Error::Parse { line: line_no, message: format!("self-loop on vertex {u}") });
            }
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::Parse { line: 0, message: "edge list is empty".into() });
        }
        let vertex_count = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
        Self::new(vertex_count, edges, directed)
    }

    pub fn load(path: impl AsRef<Path>, directed: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, directed)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `N`, the degree of the reliability polynomial.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "# S=0 ... T=5\n0 1\n1 2\n2 5\n1 3\n3 5\n0 4\n4 5\n";

    #[test]
    fn parses_toy() {
        let g = Graph::parse(TOY, true).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 7);
        assert!(g.is_directed());
        assert_eq!(g.edges()[2], (2, 5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Graph::parse("", false), Err(Error::Parse { .. })));
        assert!(matches!(Graph::parse("# only a comment\n", false), Err(Error::Parse { .. })));
        match Graph::parse("0 1\n1 x\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match Graph::parse("0 1\n\n2 2\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Graph::parse("0 1 2\n", false).is_err());
        assert!(Graph::new(2, vec![(0, 2)], false).is_err());
    }

    #[test]
    fn trailing_comments_allowed() {
        let g = Graph::parse("0 1 # first\n1 2\n", false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.vertex_count(), 3);
    }
}
