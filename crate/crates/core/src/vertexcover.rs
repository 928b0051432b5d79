//! Vertex covers: the matching-endpoint cover and the degree-weighted
//! sampling cover.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{stable_half_matching_run, Branch};
use crate::metrics::Solution;
use crate::stochastics::{pick_index, rng_from_seed, unit};

/// True iff every edge of `g` has an endpoint in `s`.
pub fn is_vertex_cover(g: &Graph, s: &Solution) -> Result<bool> {
    let vs = s
        .as_vertices()
        .ok_or(Error::KindMismatch { left: "vertices", right: s.kind() })?;
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(g.edges().all(|e| vs.contains(&e.u()) || vs.contains(&e.v())))
}

/// Endpoints of the stable half matching run with `eps / 2`, plus every
/// vertex the thresholded branch deleted.
pub fn stable_vc_via_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let run = stable_half_matching_run(g, eps / 2.0, seed)?;
    let mut cover: BTreeSet<VertexId> = run
        .matching
        .as_edges()
        .expect("matching is an edge set")
        .iter()
        .flat_map(|e| [e.u(), e.v()])
        .collect();
    if let Branch::Thresholded { removed, .. } = run.branch {
        cover.extend(removed);
    }
    Ok(Solution::Vertices(cover))
}

/// Output of [`stable_vc_sampling_run`].
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingRun {
    pub cover: Solution,
    /// `n > m^(1+eps)`: outside the regime the approximation and stability
    /// bounds assume.
    pub assumption_violated: bool,
}

/// `n` rounds; round `i` (1-based) removes a vertex drawn with weight
/// `deg + 2 m^(1+eps) / (n - i + 1)` among the remaining ones and keeps it
/// if it still has an edge. One uniform per round.
pub fn stable_vc_sampling_run(g: &Graph, eps: f64, seed: u64) -> Result<SamplingRun> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(invalid(format!("eps must be non-negative, got {eps}")));
    }
    let n = g.n();
    let m = g.m();
    let scale = (m as f64).powf(1.0 + eps);
    let assumption_violated = n as f64 > scale;
    if m == 0 {
        return Ok(SamplingRun {
            cover: Solution::Vertices(BTreeSet::new()),
            assumption_violated,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut remaining: Vec<VertexId> = (0..n).collect();
    let mut removed = vec![false; n];
    let mut cover = BTreeSet::new();
    for i in 1..=n {
        let w = 2.0 * scale / (n - i + 1) as f64;
        let weights: Vec<f64> = remaining.iter().map(|&v| degree[v] as f64 + w).collect();
        let total: f64 = weights.iter().sum();
        let idx = pick_index(&weights, unit(&mut rng) * total);
        let v = remaining.remove(idx);
        if degree[v] >= 1 {
            cover.insert(v);
        }
        removed[v] = true;
        for &x in g.neighbors(v) {
            if !removed[x] {
                degree[x] -= 1;
            }
        }
        degree[v] = 0;
    }
    Ok(SamplingRun {
        cover: Solution::Vertices(cover),
        assumption_violated,
    })
}

pub fn stable_vc_sampling(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    stable_vc_sampling_run(g, eps, seed).map(|r| r.cover)
}

/// Minimum vertex cover size by exhaustive search; `n <= 24`.
pub fn min_vertex_cover_size(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > 24 {
        return Err(Error::Capacity(format!("exhaustive vertex cover needs n <= 24, got {n}")));
    }
    let masks: Vec<(u32, u32)> = g.edges().map(|e| (1 << e.u(), 1 << e.v())).collect();
    let mut best = n;
    for s in 0u32..(1u32 << n) {
        let size = s.count_ones() as usize;
        if size < best && masks.iter().all(|&(a, b)| s & (a | b) != 0) {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn verts(v: &[usize]) -> Solution {
        v.iter().copied().collect()
    }

    #[test]
    fn validator_examples() {
        let tri = generate(&Family::Complete(3)).unwrap();
        assert!(is_vertex_cover(&tri, &verts(&[0, 1, 2])).unwrap());
        assert!(!is_vertex_cover(&tri, &verts(&[0])).unwrap());
        let p3 = generate(&Family::Path(3)).unwrap();
        assert!(is_vertex_cover(&p3, &verts(&[1])).unwrap());
        assert!(is_vertex_cover(&p3, &verts(&[7])).is_err());
    }

    #[test]
    fn matching_cover_on_p4_is_everything() {
        let g = generate(&Family::Path(4)).unwrap();
        for seed in 0..20 {
            assert_eq!(stable_vc_via_matching(&g, 0.3, seed).unwrap(), verts(&[0, 1, 2, 3]));
        }
        assert!(stable_vc_via_matching(&g, 1.0, 0).is_err());
        assert!(stable_vc_via_matching(&g, 0.0, 0).is_err());
    }

    #[test]
    fn both_covers_are_valid() {
        for gs in 0..30 {
            let g = generate(&Family::ErdosRenyi { n: 16, p: 0.25, seed: gs }).unwrap();
            for seed in 0..100 {
                let a = stable_vc_via_matching(&g, 0.4, seed).unwrap();
                assert!(is_vertex_cover(&g, &a).unwrap());
                let b = stable_vc_sampling(&g, 0.2, seed).unwrap();
                assert!(is_vertex_cover(&g, &b).unwrap());
            }
        }
    }

    #[test]
    fn matching_cover_approximation() {
        let eps = 0.4;
        for gs in 0..5 {
            let g = generate(&Family::ErdosRenyi { n: 14, p: 0.3, seed: gs }).unwrap();
            let opt = min_vertex_cover_size(&g).unwrap() as f64;
            let sizes: Vec<f64> = (0..300)
                .map(|s| stable_vc_via_matching(&g, eps, s).unwrap().len() as f64)
                .collect();
            let mean = sizes.iter().sum::<f64>() / sizes.len() as f64;
            let var = sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (sizes.len() - 1) as f64;
            let se = (var / sizes.len() as f64).sqrt();
            assert!(mean - 3.0 * se <= (2.0 + 2.0 * eps) * opt, "{mean} vs opt {opt}");
        }
    }

    #[test]
    fn sampling_edge_cases() {
        let empty = Graph::empty(5);
        assert!(stable_vc_sampling(&empty, 0.1, 3).unwrap().is_empty());
        let single = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut seen = BTreeSet::new();
        for seed in 0..200 {
            let s = stable_vc_sampling(&single, 0.0, seed).unwrap();
            assert_eq!(s.len(), 1);
            seen.insert(s);
        }
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn sampling_flags_sparse_inputs() {
        let sparse = Graph::from_edges(10, [(0, 1)]).unwrap();
        assert!(stable_vc_sampling_run(&sparse, 0.5, 0).unwrap().assumption_violated);
        let k6 = generate(&Family::Complete(6)).unwrap();
        assert!(!stable_vc_sampling_run(&k6, 0.0, 0).unwrap().assumption_violated);
        assert!(stable_vc_sampling(&k6, -0.1, 0).is_err());
    }

    #[test]
    fn sampling_approximation() {
        let eps = 0.1;
        for gs in 0..5 {
            let g = generate(&Family::ErdosRenyi { n: 12, p: 0.4, seed: gs }).unwrap();
            let (n, m) = (g.n() as f64, g.m() as f64);
            let opt = min_vertex_cover_size(&g).unwrap() as f64;
            let mean = (0..300)
                .map(|s| stable_vc_sampling(&g, eps, s).unwrap().len() as f64)
                .sum::<f64>()
                / 300.0;
            assert!(mean <= 8.0 * m.powf(1.0 + eps) * n.ln() / n * opt);
        }
    }

    #[test]
    fn brute_force_cover() {
        assert_eq!(min_vertex_cover_size(&generate(&Family::Cycle(7)).unwrap()).unwrap(), 4);
        assert_eq!(min_vertex_cover_size(&generate(&Family::Star(9)).unwrap()).unwrap(), 1);
        assert_eq!(min_vertex_cover_size(&generate(&Family::Complete(5)).unwrap()).unwrap(), 4);
    }
}
