//! Minimum spanning forests: Kruskal, and Prim with smallest-endpoint tie
//! breaking.
//!
//! Unweighted graphs use unit weights, so on them both algorithms return
//! spanning forests determined entirely by their tie-breaking rules.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use crate::graph::{edge, EdgeId, Graph, VertexId};
use crate::metrics::Solution;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Kruskal's algorithm; equal weights are ordered by canonical edge id.
pub fn kruskal(g: &Graph) -> Solution {
    let mut order: Vec<EdgeId> = g.edges().collect();
    order.sort_by(|&a, &b| g.weight(a).total_cmp(&g.weight(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::new(g.n());
    order
        .into_iter()
        .filter(|e| uf.union(e.u(), e.v()))
        .collect()
}

#[derive(PartialEq)]
struct Frontier {
    weight: f64,
    inside: VertexId,
    outside: VertexId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.inside.cmp(&other.inside))
            .then(self.outside.cmp(&other.outside))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// True iff `s` is a set of edges of `g` forming a spanning forest: acyclic
/// and connecting every component.
pub fn is_spanning_forest(g: &Graph, s: &Solution) -> bool {
    let Some(edges) = s.as_edges() else {
        return false;
    };
    let mut uf = UnionFind::new(g.n());
    for &e in edges {
        if !g.contains_edge(e) || !uf.union(e.u(), e.v()) {
            return false;
        }
    }
    edges.len() == g.n() - g.components().len()
}

/// Prim's algorithm grown from vertex 0. Among the lightest frontier edges it
/// takes the one with the smallest tree endpoint, then the smallest non-tree
/// endpoint. Each further component is grown from its smallest vertex.
pub fn prim(g: &Graph) -> Solution {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut tree = BTreeSet::new();
    let mut heap = BinaryHeap::new();
    let join = |x: VertexId, in_tree: &mut Vec<bool>, heap: &mut BinaryHeap<Reverse<Frontier>>| {
        in_tree[x] = true;
        for &y in g.neighbors(x) {
            if !in_tree[y] {
                heap.push(Reverse(Frontier {
                    weight: g.weight(edge(x, y)),
                    inside: x,
                    outside: y,
                }));
            }
        }
    };
    for root in 0..n {
        if in_tree[root] {
            continue;
        }
        join(root, &mut in_tree, &mut heap);
        while let Some(Reverse(f)) = heap.pop() {
            if in_tree[f.outside] {
                continue;
            }
            tree.insert(edge(f.inside, f.outside));
            join(f.outside, &mut in_tree, &mut heap);
        }
    }
    Solution::Edges(tree)
}
