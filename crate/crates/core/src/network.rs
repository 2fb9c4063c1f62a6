//! Physical radial network and its text format.
//!
//! ```text
//! # comment
//! node <id> <weight> [source]
//! edge <id> <u> <v> <intact|damaged> [<repair_time>]
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown node `{id}`")]
    UnknownNode { line: usize, id: String },
    #[error("line {line}: node `{id}` has a negative weight")]
    NegativeWeight { line: usize, id: String },
    #[error("line {line}: repair time of `{id}` must be positive")]
    NonpositiveRepairTime { line: usize, id: String },
    #[error("line {line}: `{id}` is a second source node")]
    MultipleSources { line: usize, id: String },
    #[error("line {line}: no source node declared")]
    MissingSource { line: usize },
    #[error("line {line}: edge `{id}` closes a cycle")]
    CycleDetected { line: usize, id: String },
    #[error("line {line}: node `{id}` is not connected to the source")]
    Disconnected { line: usize, id: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node<T> {
    pub id: String,
    pub weight: T,
    pub is_source: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineStatus<T> {
    Intact,
    Damaged { repair_time: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line<T> {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub status: LineStatus<T>,
}

impl<T: Scalar> Line<T> {
    pub fn repair_time(&self) -> Option<T> {
        match self.status {
            LineStatus::Damaged { repair_time } => Some(repair_time),
            LineStatus::Intact => None,
        }
    }

    pub fn is_damaged(&self) -> bool {
        matches!(self.status, LineStatus::Damaged { .. })
    }
}

/// A validated radial network with exactly one source.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    nodes: Vec<Node<T>>,
    lines: Vec<Line<T>>,
    source: usize,
}

impl<T: Scalar> Network<T> {
    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn lines(&self) -> &[Line<T>] {
        &self.lines
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn damaged_count(&self) -> usize {
        self.lines.iter().filter(|l| l.is_damaged()).count()
    }

    pub fn total_weight(&self) -> T {
        self.nodes.iter().fold(T::zero(), |acc, n| acc + n.weight)
    }

    pub fn weights(&self) -> Vec<T> {
        self.nodes.iter().map(|n| n.weight).collect()
    }

    /// Parses and validates the line-oriented network format.
    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        let mut builder = NetworkBuilder::new();
        let mut last_line = 0;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some(&keyword) = tokens.first() else {
                continue;
            };
            let syntax = |message: &str| NetworkError::Syntax {
                line,
                message: message.to_string(),
            };
            match keyword {
                "node" => {
                    let (id, weight, source) = match tokens.as_slice() {
                        [_, id, w] => (*id, *w, false),
                        [_, id, w, "source"] => (*id, *w, true),
                        _ => return Err(syntax("expected `node <id> <weight> [source]`")),
                    };
                    check_id(id, line)?;
                    let weight = T::parse_decimal(weight)
                        .ok_or_else(|| syntax(&format!("invalid weight `{weight}`")))?;
                    builder.node(id, weight, source, line)?;
                }
                "edge" => {
                    let (id, u, v, status) = match tokens.as_slice() {
                        [_, id, u, v, "intact"] => (*id, *u, *v, None),
                        [_, _, _, _, "intact", _] => {
                            return Err(syntax("intact edges take no repair time"))
                        }
                        [_, id, u, v, "damaged", p] => (*id, *u, *v, Some(*p)),
                        [_, _, _, _, "damaged"] => {
                            return Err(syntax("damaged edges need a repair time"))
                        }
                        _ => {
                            return Err(syntax(
                                "expected `edge <id> <u> <v> <intact|damaged> [<repair_time>]`",
                            ))
                        }
                    };
                    check_id(id, line)?;
                    let status = match status {
                        None => LineStatus::Intact,
                        Some(p) => LineStatus::Damaged {
                            repair_time: T::parse_decimal(p)
                                .ok_or_else(|| syntax(&format!("invalid repair time `{p}`")))?,
                        },
                    };
                    builder.edge(id, u, v, status, line)?;
                }
                other => return Err(syntax(&format!("unknown keyword `{other}`"))),
            }
        }
        builder.finish(last_line.max(1))
    }

    /// Serialises back into the text format; `parse(to_text(n)) == n`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            let _ = write!(out, "node {} {}", node.id, node.weight);
            if node.is_source {
                out.push_str(" source");
            }
            out.push('\n');
        }
        for line in &self.lines {
            let u = &self.nodes[line.u].id;
            let v = &self.nodes[line.v].id;
            match line.status {
                LineStatus::Intact => {
                    let _ = writeln!(out, "edge {} {u} {v} intact", line.id);
                }
                LineStatus::Damaged { repair_time } => {
                    let _ = writeln!(out, "edge {} {u} {v} damaged {repair_time}", line.id);
                }
            }
        }
        out
    }

    /// Returns a copy whose line statuses are replaced by `status(index, line)`.
    pub fn with_statuses<F>(&self, mut status: F) -> Result<Self, NetworkError>
    where
        F: FnMut(usize, &Line<T>) -> LineStatus<T>,
    {
        let mut builder = NetworkBuilder::new();
        let mut line_no = 0;
        for node in &self.nodes {
            line_no += 1;
            builder.node(&node.id, node.weight, node.is_source, line_no)?;
        }
        for (index, line) in self.lines.iter().enumerate() {
            line_no += 1;
            let (u, v) = (&self.nodes[line.u].id, &self.nodes[line.v].id);
            builder.edge(&line.id, u, v, status(index, line), line_no)?;
        }
        builder.finish(line_no)
    }

    /// Adjacency list of `(neighbour, line index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (index, line) in self.lines.iter().enumerate() {
            adj[line.u].push((line.v, index));
            adj[line.v].push((line.u, index));
        }
        adj
    }

    /// Orients every line away from the source; returns `(from, to)` per line.
    pub fn orientation(&self) -> Vec<(usize, usize)> {
        let adj = self.adjacency();
        let mut oriented = vec![(usize::MAX, usize::MAX); self.lines.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.source];
        seen[self.source] = true;
        while let Some(n) = stack.pop() {
            for &(next, line) in &adj[n] {
                if !seen[next] {
                    seen[next] = true;
                    oriented[line] = (n, next);
                    stack.push(next);
                }
            }
        }
        oriented
    }
}

fn check_id(id: &str, line: usize) -> Result<(), NetworkError> {
    if !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(NetworkError::Syntax {
            line,
            message: format!("invalid id `{id}`"),
        })
    }
}

/// Incremental construction with the same checks as the parser. Each call
/// carries the line number used in error messages.
#[derive(Debug)]
pub struct NetworkBuilder<T> {
    nodes: Vec<Node<T>>,
    node_lines: Vec<usize>,
    lines: Vec<Line<T>>,
    index: HashMap<String, usize>,
    line_ids: HashMap<String, usize>,
    source: Option<usize>,
    // union-find over nodes, used to reject cycles as edges arrive
    parent: Vec<usize>,
}

impl<T: Scalar> Default for NetworkBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> NetworkBuilder<T> {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            node_lines: Vec::new(),
            lines: Vec::new(),
            index: HashMap::new(),
            line_ids: HashMap::new(),
            source: None,
            parent: Vec::new(),
        }
    }

    pub fn node(&mut self, id: &str, weight: T, is_source: bool, line: usize) -> Result<usize, NetworkError> {
        if self.index.contains_key(id) || self.line_ids.contains_key(id) {
            return Err(NetworkError::DuplicateId { line, id: id.to_string() });
        }
        if weight < T::zero() {
            return Err(NetworkError::NegativeWeight { line, id: id.to_string() });
        }
        let index = self.nodes.len();
        if is_source {
            if self.source.is_some() {
                return Err(NetworkError::MultipleSources { line, id: id.to_string() });
            }
            self.source = Some(index);
        }
        self.index.insert(id.to_string(), index);
        self.nodes.push(Node {
            id: id.to_string(),
            weight,
            is_source,
        });
        self.node_lines.push(line);
        self.parent.push(index);
        Ok(index)
    }

    pub fn edge(
        &mut self,
        id: &str,
        u: &str,
        v: &str,
        status: LineStatus<T>,
        line: usize,
    ) -> Result<usize, NetworkError> {
        if self.line_ids.contains_key(id) || self.index.contains_key(id) {
            return Err(NetworkError::DuplicateId { line, id: id.to_string() });
        }
        let lookup = |name: &str| {
            self.index.get(name).copied().ok_or_else(|| NetworkError::UnknownNode {
                line,
                id: name.to_string(),
            })
        };
        let (u, v) = (lookup(u)?, lookup(v)?);
        if let LineStatus::Damaged { repair_time } = status {
            if repair_time <= T::zero() {
                return Err(NetworkError::NonpositiveRepairTime { line, id: id.to_string() });
            }
        }
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return Err(NetworkError::CycleDetected { line, id: id.to_string() });
        }
        self.parent[ru] = rv;
        let index = self.lines.len();
        self.line_ids.insert(id.to_string(), index);
        self.lines.push(Line {
            id: id.to_string(),
            u,
            v,
            status,
        });
        Ok(index)
    }

    /// Final checks; `end_line` is reported when no source was declared.
    pub fn finish(mut self, end_line: usize) -> Result<Network<T>, NetworkError> {
        let source = self.source.ok_or(NetworkError::MissingSource { line: end_line })?;
        let root = self.find(source);
        for n in 0..self.nodes.len() {
            if self.find(n) != root {
                return Err(NetworkError::Disconnected {
                    line: self.node_lines[n],
                    id: self.nodes[n].id.clone(),
                });
            }
        }
        Ok(Network {
            nodes: self.nodes,
            lines: self.lines,
            source,
        })
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}
