//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n 5
//! 0 1
//! 1 2 0.5
//! ```

use std::fmt::Write as _;

use super::{EdgeId, Graph, VertexId};
use crate::error::{Error, Result};

/// Parses an edge list. Either every edge carries a weight or none does.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut plain = Vec::new();
    let mut weighted = Vec::new();
    let mut max_seen: Option<VertexId> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 || declared.is_some() {
                return Err(parse_err(line, "header must be a single \"n <count>\" line"));
            }
            declared = Some(number(line, tokens[1])?);
            continue;
        }
        if !(2..=3).contains(&tokens.len()) {
            return Err(parse_err(line, "expected \"u v\" or \"u v weight\""));
        }
        let a = number(line, tokens[0])?;
        let b = number(line, tokens[1])?;
        max_seen = Some(max_seen.map_or(a.max(b), |m| m.max(a).max(b)));
        match tokens.get(2) {
            None => plain.push((a, b)),
            Some(tok) => {
                let w: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad weight {tok:?}")))?;
                weighted.push((a, b, w));
            }
        }
        if !plain.is_empty() && !weighted.is_empty() {
            return Err(parse_err(line, "mixes weighted and unweighted edges"));
        }
    }

    let n = declared.unwrap_or(0).max(max_seen.map_or(0, |m| m + 1));
    if weighted.is_empty() {
        Graph::from_edges(n, plain)
    } else {
        Graph::from_weighted_edges(n, weighted)
    }
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a nonnegative integer, got {tok:?}")))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl Graph {
    /// Serializes to the format read by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for e in self.edges() {
            let EdgeId { u, v } = e;
            if self.is_weighted() {
                // `{:?}` on f64 prints the shortest string that round-trips.
                let _ = writeln!(out, "{u} {v} {:?}", self.weight(e));
            } else {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        out
    }
}
