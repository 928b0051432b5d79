//! Canonical 2-coloring of bipartite graphs, and the experiment showing
//! its sensitivity grows linearly on paths.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{edge, generate, Family, Graph, VertexId};
use crate::harness::{exact_average_sensitivity, AlgorithmHandle};
use crate::metrics::Solution;

/// The colour class holding each component's smallest vertex, found by BFS
/// parity from that vertex.
pub fn two_coloring(g: &Graph) -> Result<Solution> {
    let mut colour: Vec<Option<bool>> = vec![None; g.n()];
    let mut part = BTreeSet::new();
    for root in 0..g.n() {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(true);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let c = colour[v].expect("queued vertices are coloured");
            if c {
                part.insert(v);
            }
            for &w in g.neighbors(v) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return Err(Error::NotBipartite(edge(v, w))),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Solution::Vertices(part))
}

/// Sensitivity of [`two_coloring`] on the path `0 - 1 - ... - (n-1)`.
/// Deleting `(i, i+1)` recolours the `n - 1 - i` suffix vertices exactly
/// when `i + 1` is odd.
pub fn path_sensitivity_closed_form(n: usize) -> f64 {
    assert!(n >= 2, "path needs an edge");
    let s: usize = (0..=n - 2).step_by(2).map(|i| n - 1 - i).sum();
    s as f64 / (n - 1) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColoringRow {
    pub n: usize,
    pub sensitivity: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoringReport {
    pub rows: Vec<ColoringRow>,
    /// Least-squares slope of sensitivity against `n`.
    pub slope: f64,
}

/// Exact sensitivity of [`two_coloring`] on `path(n)` for each size.
pub fn coloring_sensitivity_experiment(sizes: &[usize]) -> Result<ColoringReport> {
    if sizes.iter().any(|&n| n < 4) {
        return Err(invalid("every path size must be at least 4"));
    }
    let alg = AlgorithmHandle::deterministic("two-coloring", |g| {
        two_coloring(g).expect("paths are bipartite")
    });
    let rows = sizes
        .iter()
        .map(|&n| {
            let g = generate(&Family::Path(n))?;
            Ok(ColoringRow {
                n,
                sensitivity: exact_average_sensitivity(&alg, &g)?,
                closed_form: path_sensitivity_closed_form(n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = fit_slope(&rows.iter().map(|r| (r.n as f64, r.sensitivity)).collect::<Vec<_>>());
    Ok(ColoringReport { rows, slope })
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Vertices of `s` with no edge inside `s`.
pub fn is_independent(g: &Graph, s: &BTreeSet<VertexId>) -> bool {
    g.edges().all(|e| !(s.contains(&e.u()) && s.contains(&e.v())))
}
