//! Undirected simple graphs with endpoint-keyed edge identities.
//!
//! A [`Graph`] is an immutable value. Removing an edge or a vertex set
//! returns a new graph on the same vertex ids, so an [`EdgeId`] that survives
//! a removal still names the same edge. That is what makes Hamming distances
//! between solutions computed on `G` and on `G - e` meaningful.

mod generators;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use generators::{generate, Family};
pub use io::parse_edge_list;

/// Vertices are dense ids in `0..n`.
pub type VertexId = usize;

/// An undirected edge, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    u: VertexId,
    v: VertexId,
}

impl EdgeId {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(EdgeId { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(EdgeId { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    /// The smaller endpoint.
    pub fn u(self) -> VertexId {
        self.u
    }

    /// The larger endpoint.
    pub fn v(self) -> VertexId {
        self.v
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn touches(self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(self, other: EdgeId) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    /// The endpoint opposite `x`; `x` must be an endpoint.
    pub fn other(self, x: VertexId) -> VertexId {
        debug_assert!(self.touches(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Shorthand for writing edge literals. Panics on a self-loop.
pub fn edge(a: VertexId, b: VertexId) -> EdgeId {
    EdgeId::new(a, b).expect("edge literal must not be a self-loop")
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl Serialize for EdgeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.u, self.v].serialize(serializer)
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<EdgeId>,
    weights: Option<BTreeMap<EdgeId, f64>>,
    adj: Vec<Vec<VertexId>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            weights: None,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let e = checked_edge(n, a, b)?;
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        Ok(Self::from_parts(n, set, None))
    }

    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut weights = BTreeMap::new();
        for (a, b, w) in edges {
            let e = checked_edge(n, a, b)?;
            if !w.is_finite() {
                return Err(Error::InvalidParameter(format!("weight of {e} is not finite")));
            }
            if weights.insert(e, w).is_some() {
                return Err(Error::DuplicateEdge(e));
            }
        }
        let set = weights.keys().copied().collect();
        Ok(Self::from_parts(n, set, Some(weights)))
    }

    fn from_parts(
        n: usize,
        edges: BTreeSet<EdgeId>,
        weights: Option<BTreeMap<EdgeId, f64>>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            weights,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        EdgeId::new(a, b).is_ok_and(|e| self.edges.contains(&e))
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.adj[v].iter().map(move |&w| edge(v, w))
    }

    /// Edges other than `e` sharing an endpoint with `e`.
    pub fn adjacent_edges(&self, e: EdgeId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .incident_edges(e.u)
            .chain(self.incident_edges(e.v))
            .filter(|&f| f != e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of `e`; unweighted graphs use unit weights.
    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights
            .as_ref()
            .and_then(|w| w.get(&e).copied())
            .unwrap_or(1.0)
    }

    /// `G - e`. Fails if `e` is not an edge of `self`.
    pub fn remove_edge(&self, e: EdgeId) -> Result<Graph> {
        if !self.edges.contains(&e) {
            return Err(Error::MissingEdge(e));
        }
        let mut out = self.clone();
        out.edges.remove(&e);
        if let Some(w) = out.weights.as_mut() {
            w.remove(&e);
        }
        let (a, b) = e.endpoints();
        remove_sorted(&mut out.adj[a], b);
        remove_sorted(&mut out.adj[b], a);
        Ok(out)
    }

    /// `G - {e_1, ..., e_k}`. Repeated edges are no-ops; every edge must
    /// belong to `self`.
    pub fn remove_edges<'a, I>(&self, removed: I) -> Result<Graph>
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        let mut drop = BTreeSet::new();
        for &e in removed {
            if !self.edges.contains(&e) {
                return Err(Error::MissingEdge(e));
            }
            drop.insert(e);
        }
        let edges = self.edges.difference(&drop).copied().collect();
        let weights = self
            .weights
            .as_ref()
            .map(|w| w.iter().filter(|(e, _)| !drop.contains(e)).map(|(e, w)| (*e, *w)).collect());
        Ok(Self::from_parts(self.n, edges, weights))
    }

    /// Deletes every edge incident to a vertex in `removed`. Vertex ids are
    /// kept; the removed vertices become isolated.
    pub fn without_vertices(&self, removed: &BTreeSet<VertexId>) -> Graph {
        let edges: BTreeSet<EdgeId> = self
            .edges
            .iter()
            .filter(|e| !removed.contains(&e.u) && !removed.contains(&e.v))
            .copied()
            .collect();
        let weights = self.weights.as_ref().map(|w| {
            w.iter()
                .filter(|(e, _)| edges.contains(e))
                .map(|(e, w)| (*e, *w))
                .collect()
        });
        Self::from_parts(self.n, edges, weights)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Short hex digest of the serialized edge list.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn checked_edge(n: usize, a: VertexId, b: VertexId) -> Result<EdgeId> {
    for vertex in [a, b] {
        if vertex >= n {
            return Err(Error::VertexOutOfRange { vertex, n });
        }
    }
    EdgeId::new(a, b)
}

fn remove_sorted(list: &mut Vec<VertexId>, x: VertexId) {
    if let Ok(pos) = list.binary_search(&x) {
        list.remove(pos);
    }
}
