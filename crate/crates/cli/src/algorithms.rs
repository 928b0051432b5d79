use clap::ValueEnum;
use serde_json::{json, Value};

use stable_graphs::coloring::{is_independent, two_coloring};
use stable_graphs::harness::AlgorithmHandle;
use stable_graphs::matching::{
    greedy_augmenting_matching, greedy_matching, is_matching, is_maximal_matching,
    lex_min_maximum_matching, stable_half_matching, stable_one_minus_eps_matching,
    thresholded_augmenting_matching, thresholded_greedy_matching,
};
use stable_graphs::metrics::Solution;
use stable_graphs::mincut::{cut_cost, stable_min_cut};
use stable_graphs::mst::{is_spanning_forest, kruskal, prim};
use stable_graphs::vertexcover::{is_vertex_cover, stable_vc_sampling, stable_vc_via_matching};
use stable_graphs::{Graph, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    Kruskal,
    Prim,
    Mincut,
    Lexmatch,
    Greedymatch,
    /// Greedy matching behind a Laplace degree cap.
    Thrmatch,
    Halfmatch,
    /// Greedy augmentation along short augmenting paths.
    Augmatch,
    /// Augmentation behind a Laplace degree cap.
    Thraugmatch,
    Fullmatch,
    Vcmatch,
    Vcsample,
    Twocolor,
}

impl Alg {
    pub fn name(self) -> &'static str {
        match self {
            Alg::Kruskal => "kruskal",
            Alg::Prim => "prim",
            Alg::Mincut => "mincut",
            Alg::Lexmatch => "lexmatch",
            Alg::Greedymatch => "greedymatch",
            Alg::Thrmatch => "thrmatch",
            Alg::Halfmatch => "halfmatch",
            Alg::Augmatch => "augmatch",
            Alg::Thraugmatch => "thraugmatch",
            Alg::Fullmatch => "fullmatch",
            Alg::Vcmatch => "vcmatch",
            Alg::Vcsample => "vcsample",
            Alg::Twocolor => "twocolor",
        }
    }

    pub fn uses_eps(self) -> bool {
        !matches!(
            self,
            Alg::Kruskal | Alg::Prim | Alg::Lexmatch | Alg::Greedymatch | Alg::Twocolor
        )
    }

    pub fn default_eps(self) -> f64 {
        match self {
            Alg::Mincut => 0.5,
            Alg::Fullmatch | Alg::Augmatch => 1.0 / 3.0,
            _ => 0.2,
        }
    }

    pub fn handle(self, eps: f64) -> AlgorithmHandle {
        let name = self.name();
        match self {
            Alg::Kruskal => AlgorithmHandle::deterministic(name, kruskal),
            Alg::Prim => AlgorithmHandle::deterministic(name, prim),
            Alg::Lexmatch => AlgorithmHandle::deterministic(name, lex_min_maximum_matching),
            Alg::Twocolor => AlgorithmHandle::new(name, true, |g, _| two_coloring(g)),
            Alg::Mincut => AlgorithmHandle::randomized(name, move |g, s| {
                stable_min_cut(g, eps, s).map(|c| c.solution())
            }),
            Alg::Greedymatch => AlgorithmHandle::randomized(name, |g, s| Ok(greedy_matching(g, s))),
            Alg::Thrmatch => {
                AlgorithmHandle::randomized(name, move |g, s| thresholded_greedy_matching(g, eps, s))
            }
            Alg::Halfmatch => {
                AlgorithmHandle::randomized(name, move |g, s| stable_half_matching(g, eps, s))
            }
            Alg::Augmatch => {
                AlgorithmHandle::randomized(name, move |g, s| greedy_augmenting_matching(g, eps, s))
            }
            Alg::Thraugmatch => AlgorithmHandle::randomized(name, move |g, s| {
                thresholded_augmenting_matching(g, eps, s)
            }),
            Alg::Fullmatch => AlgorithmHandle::randomized(name, move |g, s| {
                stable_one_minus_eps_matching(g, eps, s)
            }),
            Alg::Vcmatch => {
                AlgorithmHandle::randomized(name, move |g, s| stable_vc_via_matching(g, eps, s))
            }
            Alg::Vcsample => {
                AlgorithmHandle::randomized(name, move |g, s| stable_vc_sampling(g, eps, s))
            }
        }
    }

    /// Validity flags for the solution kind this algorithm produces.
    pub fn checks(self, g: &Graph, s: &Solution) -> Result<Value> {
        Ok(match self {
            Alg::Kruskal | Alg::Prim => json!({ "spanning_forest": is_spanning_forest(g, s) }),
            Alg::Mincut => {
                let side = s.as_vertices().cloned().unwrap_or_default();
                json!({
                    "proper_subset": !side.is_empty() && side.len() < g.n(),
                    "cost": cut_cost(g, &side),
                })
            }
            Alg::Vcmatch | Alg::Vcsample => json!({ "vertex_cover": is_vertex_cover(g, s)? }),
            Alg::Twocolor => json!({
                "independent": s.as_vertices().is_some_and(|v| is_independent(g, v)),
            }),
            _ => json!({
                "matching": is_matching(g, s),
                "maximal": is_maximal_matching(g, s),
            }),
        })
    }
}

/// Sorted members as JSON: `[[u, v], ...]` for edges, `[v, ...]` for
/// vertices.
pub fn members(s: &Solution) -> Value {
    match s {
        Solution::Edges(e) => json!(e.iter().map(|e| [e.u(), e.v()]).collect::<Vec<_>>()),
        Solution::Vertices(v) => json!(v),
    }
}
