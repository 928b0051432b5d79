//! Greedy augmentation by vertex-disjoint augmenting paths of fixed length.

use rand::seq::SliceRandom;

use crate::graph::{edge, Graph, VertexId};
use crate::stochastics::Rng;

const NONE: usize = usize::MAX;

/// All augmenting paths with `len` edges for the matching given by `mate`,
/// as vertex sequences with first vertex smaller than last.
pub(crate) fn augmenting_paths(g: &Graph, mate: &[usize], len: usize) -> Vec<Vec<VertexId>> {
    debug_assert!(len % 2 == 1);
    let n = g.n();
    let dist = distance_to_free(g, mate);
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(len + 1);
    for start in 0..n {
        if mate[start] != NONE || dist[start] > len {
            continue;
        }
        path.clear();
        path.push(start);
        on_path[start] = true;
        extend(g, mate, &dist, len, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
    }
    out
}

/// `path` ends at a vertex whose next edge must be unmatched.
fn extend(
    g: &Graph,
    mate: &[usize],
    dist: &[usize],
    len: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<VertexId>>,
) {
    let x = *path.last().expect("non-empty");
    let used = path.len() - 1;
    let remaining = len - used;
    for &w in g.neighbors(x) {
        if on_path[w] || mate[x] == w {
            continue;
        }
        if mate[w] == NONE {
            if remaining == 1 && path[0] < w {
                path.push(w);
                out.push(path.clone());
                path.pop();
            }
            continue;
        }
        let y = mate[w];
        if remaining < 3 || on_path[y] || dist[y] > remaining - 2 {
            continue;
        }
        path.push(w);
        path.push(y);
        on_path[w] = true;
        on_path[y] = true;
        extend(g, mate, dist, len, path, on_path, out);
        on_path[w] = false;
        on_path[y] = false;
        path.pop();
        path.pop();
    }
}

/// For each vertex `x`, a lower bound on the length of an alternating walk
/// that leaves `x` by an unmatched edge and ends at a free vertex. Walks may
/// repeat vertices, so this never overestimates a simple path.
fn distance_to_free(g: &Graph, mate: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    for x in 0..n {
        if g.neighbors(x).iter().any(|&w| mate[w] == NONE && mate[x] != w) {
            dist[x] = 1;
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for &w in g.neighbors(x) {
                if mate[w] == NONE || mate[x] == w {
                    continue;
                }
                let d = dist[mate[w]];
                if d != usize::MAX && d + 2 < dist[x] {
                    dist[x] = d + 2;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

/// Number of rounds `ceil(1/eps - 1)`, guarded against rounding when
/// `1/eps` is an integer.
pub fn augmenting_rounds(eps: f64) -> usize {
    let k = (1.0 / eps - 1.0 - 1e-9).ceil();
    k.max(0.0) as usize
}

/// Runs the rounds on `g`, returning the final `mate` array.
pub(crate) fn greedy_augmenting(g: &Graph, rounds: usize, rng: &mut Rng) -> Vec<usize> {
    let n = g.n();
    let mut mate = vec![NONE; n];
    for i in 1..=rounds {
        let mut paths = augmenting_paths(g, &mate, 2 * i - 1);
        if paths.is_empty() {
            continue;
        }
        paths.shuffle(rng);
        let mut taken = vec![false; n];
        for p in paths {
            if p.iter().any(|&v| taken[v]) {
                continue;
            }
            for &v in &p {
                taken[v] = true;
            }
            // flip: pairs (p0,p1), (p2,p3), ... become matched
            for pair in p.chunks(2) {
                mate[pair[0]] = pair[1];
                mate[pair[1]] = pair[0];
            }
        }
    }
    mate
}

pub(crate) fn mate_edges(mate: &[usize]) -> impl Iterator<Item = crate::graph::EdgeId> + '_ {
    mate.iter()
        .enumerate()
        .filter(|&(v, &w)| w != NONE && v < w)
        .map(|(v, &w)| edge(v, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn rounds_from_eps() {
        assert_eq!(augmenting_rounds(0.5), 1);
        assert_eq!(augmenting_rounds(1.0 / 3.0), 2);
        assert_eq!(augmenting_rounds(0.3), 3);
        assert_eq!(augmenting_rounds(0.2), 4);
        assert_eq!(augmenting_rounds(0.99), 1);
    }

    #[test]
    fn paths_on_p4() {
        let g = generate(&Family::Path(4)).unwrap();
        let mut mate = vec![NONE; 4];
        mate[1] = 2;
        mate[2] = 1;
        assert_eq!(augmenting_paths(&g, &mate, 3), vec![vec![0, 1, 2, 3]]);
        assert!(augmenting_paths(&g, &mate, 1).is_empty());
        let empty = vec![NONE; 4];
        assert_eq!(augmenting_paths(&g, &empty, 1).len(), 3);
    }

    #[test]
    fn paths_are_simple_and_alternating() {
        let g = generate(&Family::ErdosRenyi { n: 14, p: 0.3, seed: 2 }).unwrap();
        let mut rng = crate::stochastics::rng_from_seed(1);
        let mate = greedy_augmenting(&g, 1, &mut rng);
        for len in [3, 5, 7] {
            for p in augmenting_paths(&g, &mate, len) {
                assert_eq!(p.len(), len + 1);
                let mut sorted = p.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), p.len());
                assert!(mate[p[0]] == NONE && mate[p[len]] == NONE);
                for (i, w) in p.windows(2).enumerate() {
                    assert!(g.has_edge(w[0], w[1]));
                    assert_eq!(mate[w[0]] == w[1], i % 2 == 1);
                }
            }
        }
    }
}
