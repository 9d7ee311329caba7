use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::relation::{AttributeSet, Relation};

/// A simple undirected graph over labelled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edges are unordered index pairs; self-loops and unknown indices are
    /// rejected, repeated edges collapse.
    pub fn new(nodes: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if !seen.insert(n) {
                return Err(Error::MalformedGraph(format!("duplicate node {n}")));
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= nodes.len() || v >= nodes.len() {
                return Err(Error::MalformedGraph(format!("edge ({u},{v}) references a missing node")));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("self-loop on {}", nodes[u])));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph { nodes, edges: set })
    }

    /// Builds a graph from labelled edges; nodes appear in first-use order
    /// after any listed in `nodes`.
    pub fn from_labels<S: AsRef<str>>(nodes: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let index = |name: &str, names: &mut Vec<String>| match names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        };
        let mut pairs = Vec::new();
        for (u, v) in edges {
            let a = index(u.as_ref(), &mut names);
            let b = index(v.as_ref(), &mut names);
            pairs.push((a, b));
        }
        Graph::new(names, pairs)
    }

    /// Text format: one edge `u v` per line, optionally a `nodes a b c`
    /// line fixing node order; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes: Vec<String> = Vec::new();
        let mut edges: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["nodes", rest @ ..] => {
                    for n in rest {
                        if !nodes.iter().any(|m| m == n) {
                            nodes.push(n.to_string());
                        }
                    }
                }
                [u, v] => edges.push((u.to_string(), v.to_string())),
                _ => return Err(Error::MalformedGraph(format!("line {}: expected `u v`", i + 1))),
            }
        }
        if nodes.is_empty() && edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Graph::from_labels(&nodes, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {}\n", self.nodes.join(" "));
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", self.nodes[u], self.nodes[v]));
        }
        out
    }

    /// The six-node example: A, B, C on one side, D, E, F on the other.
    pub fn example() -> Self {
        Graph::from_labels(
            &["A", "B", "C", "D", "E", "F"],
            &[("A", "D"), ("A", "E"), ("B", "D"), ("B", "E"), ("B", "F"), ("C", "F")],
        )
        .expect("well-formed")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Disjoint nonempty sides, every cross pair an edge, no edge inside a side.
    pub fn is_biclique(&self, v1: &AttributeSet, v2: &AttributeSet) -> bool {
        if v1.is_empty() || v2.is_empty() || !v1.is_disjoint(v2) {
            return false;
        }
        let cross = v1.iter().all(|a| v2.iter().all(|b| self.has_edge(a, b)));
        let inner = |s: &AttributeSet| {
            s.iter()
                .any(|a| s.iter().any(|b| a < b && self.has_edge(a, b)))
        };
        cross && !inner(v1) && !inner(v2)
    }
}

/// One 0/1 column per node; rows are the zero tuple, one tuple per node and
/// one tuple per edge, in that order.
pub fn graph_to_relation(g: &Graph) -> Result<Relation> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut rows: Vec<Vec<&str>> = Vec::with_capacity(1 + n + g.edge_count());
    rows.push(vec!["0"; n]);
    for v in 0..n {
        let mut row = vec!["0"; n];
        row[v] = "1";
        rows.push(row);
    }
    for (u, v) in g.edges() {
        let mut row = vec!["0"; n];
        row[u] = "1";
        row[v] = "1";
        rows.push(row);
    }
    Relation::from_strings(g.nodes(), &rows)
}
