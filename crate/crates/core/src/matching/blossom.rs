//! Edmonds' blossom algorithm for maximum-cardinality matching in general
//! graphs, with single-root augmentation exposed for incremental use.

use std::collections::VecDeque;

use crate::graph::{Graph, VertexId};

const NONE: usize = usize::MAX;

/// A matching on the alive vertices of a graph, augmentable one root at a
/// time.
pub(crate) struct Blossom<'a> {
    g: &'a Graph,
    alive: Vec<bool>,
    pub(crate) mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    pub(crate) fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            alive: vec![true; n],
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    pub(crate) fn mate_of(&self, v: VertexId) -> Option<VertexId> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    pub(crate) fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    /// Deletes `v` and unmatches its partner, which is returned.
    pub(crate) fn kill(&mut self, v: VertexId) -> Option<VertexId> {
        self.alive[v] = false;
        let w = self.mate[v];
        self.mate[v] = NONE;
        if w != NONE {
            self.mate[w] = NONE;
            Some(w)
        } else {
            None
        }
    }

    pub(crate) fn revive(&mut self, v: VertexId) {
        self.alive[v] = true;
    }

    pub(crate) fn size(&self) -> usize {
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    /// Grows the matching to maximum size.
    pub(crate) fn maximize(&mut self) {
        let n = self.g.n();
        // cheap greedy start
        for v in 0..n {
            if self.alive[v] && self.mate[v] == NONE {
                if let Some(&w) = self
                    .g
                    .neighbors(v)
                    .iter()
                    .find(|&&w| self.alive[w] && self.mate[w] == NONE)
                {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for v in 0..n {
            if self.alive[v] && self.mate[v] == NONE {
                self.augment_from(v);
            }
        }
    }

    /// Augments along an augmenting path starting at the free vertex
    /// `root`, if one exists.
    pub(crate) fn augment_from(&mut self, root: VertexId) -> bool {
        debug_assert!(self.alive[root] && self.mate[root] == NONE);
        let Some(mut v) = self.find_path(root) else {
            return false;
        };
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
        true
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.fill(false);
        self.parent.fill(NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.g.degree(v) {
                let to = self.g.neighbors(v)[idx];
                if !self.alive[to] || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}
