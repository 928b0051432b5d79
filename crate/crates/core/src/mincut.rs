//! Global minimum cut: exact value, enumeration of near-minimum cuts, the
//! exponential-mechanism sampler and the untruncated Gibbs distribution.

use std::collections::{BTreeSet, HashSet};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metrics::{ExactDistribution, Solution};
use crate::mst::UnionFind;
use crate::stochastics::{derive_seed, edge_priorities, priority_order, rng_from_seed, unit, Rng};

/// Graphs up to this size are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;
/// Largest graph [`gibbs_cut_oracle`] accepts.
pub const GIBBS_LIMIT: usize = 16;
/// Upper bound on contraction trials for graphs above [`EXHAUSTIVE_LIMIT`].
pub const CONTRACTION_TRIAL_CAP: u64 = 2_000;

/// One side of a cut together with its crossing-edge count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutSolution {
    pub side: BTreeSet<VertexId>,
    pub cost: usize,
}

impl CutSolution {
    pub fn solution(&self) -> Solution {
        Solution::Vertices(self.side.clone())
    }
}

/// Number of edges with exactly one endpoint in `side`.
pub fn cut_cost(g: &Graph, side: &BTreeSet<VertexId>) -> usize {
    g.edges()
        .filter(|e| side.contains(&e.u()) != side.contains(&e.v()))
        .count()
}

fn need_two(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(invalid(format!("a cut needs n >= 2, got {}", g.n())));
    }
    Ok(())
}

/// Minimum cut value by Stoer-Wagner. Zero iff the graph is disconnected.
pub fn min_cut_value(g: &Graph) -> Result<usize> {
    need_two(g)?;
    let n = g.n();
    let mut w = vec![vec![0usize; n]; n];
    for e in g.edges() {
        w[e.u()][e.v()] += 1;
        w[e.v()][e.u()] += 1;
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    while alive.len() > 1 {
        let k = alive.len();
        let mut key = vec![0usize; k];
        let mut added = vec![false; k];
        let (mut prev, mut last) = (0, 0);
        for step in 0..k {
            let mut sel = usize::MAX;
            for i in 0..k {
                if !added[i] && (sel == usize::MAX || key[i] > key[sel]) {
                    sel = i;
                }
            }
            added[sel] = true;
            if step == k - 1 {
                best = best.min(key[sel]);
            }
            prev = last;
            last = sel;
            for i in 0..k {
                if !added[i] {
                    key[i] += w[alive[sel]][alive[i]];
                }
            }
        }
        // merge `last` into `prev`
        let (s, t) = (alive[prev], alive[last]);
        for &x in &alive {
            w[s][x] += w[t][x];
            w[x][s] = w[s][x];
        }
        w[s][s] = 0;
        alive.remove(last);
    }
    Ok(best)
}

/// Near-minimum cuts found by [`enumerate_small_cuts`].
#[derive(Clone, Debug, PartialEq)]
pub struct CutEnumeration {
    /// Sorted; a side and its complement are both listed.
    pub cuts: Vec<CutSolution>,
    /// False when found by random contraction, which may miss cuts.
    pub exhaustive: bool,
}

/// Every vertex set `S` with `cost(S) <= threshold`.
///
/// Exhaustive for `n <= EXHAUSTIVE_LIMIT`. Larger graphs are contracted at
/// random down to `ceil(2 alpha)` super-vertices, `alpha = threshold / OPT`,
/// and every bipartition of the super-vertices is tested; the trial count is
/// `ceil(n^(2 alpha) ln n)` capped at [`CONTRACTION_TRIAL_CAP`].
pub fn enumerate_small_cuts(g: &Graph, threshold: f64, seed: u64) -> Result<CutEnumeration> {
    need_two(g)?;
    let opt = min_cut_value(g)?;
    if threshold < opt as f64 {
        return Err(invalid(format!("threshold {threshold} is below the minimum cut {opt}")));
    }
    if g.n() <= EXHAUSTIVE_LIMIT {
        let mut cuts = Vec::new();
        for_each_cut(g, |mask, cost| {
            if cost as f64 <= threshold {
                cuts.push(CutSolution {
                    side: mask_to_set(mask, g.n()),
                    cost,
                });
            }
        });
        cuts.sort();
        return Ok(CutEnumeration {
            cuts,
            exhaustive: true,
        });
    }
    Ok(CutEnumeration {
        cuts: contraction_cuts(g, threshold, opt, seed),
        exhaustive: false,
    })
}

fn mask_to_set(mask: u64, n: usize) -> BTreeSet<VertexId> {
    (0..n).filter(|v| mask >> v & 1 == 1).collect()
}

/// Calls `f(mask, cost)` for every proper non-empty subset, in Gray-code
/// order. Needs `n <= 63`; callers keep `n` far smaller.
fn for_each_cut(g: &Graph, mut f: impl FnMut(u64, usize)) {
    let n = g.n();
    let nbr: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut mask = 0u64;
    let mut cost = 0usize;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let inside = mask >> v & 1 == 1;
        let other_side = if inside { !mask & full } else { mask };
        let crossing = (nbr[v] & other_side).count_ones() as usize;
        cost = cost + g.degree(v) - 2 * crossing;
        mask ^= 1 << v;
        if mask != full {
            f(mask, cost);
        }
    }
}

fn contraction_cuts(g: &Graph, threshold: f64, opt: usize, seed: u64) -> Vec<CutSolution> {
    let n = g.n();
    let alpha = (threshold / opt.max(1) as f64).max(1.0);
    let k = ((2.0 * alpha).ceil() as usize).clamp(2, n.min(EXHAUSTIVE_LIMIT));
    let wanted = (n as f64).powf(2.0 * alpha) * (n as f64).ln();
    let trials = if wanted.is_finite() {
        (wanted.ceil() as u64).min(CONTRACTION_TRIAL_CAP)
    } else {
        CONTRACTION_TRIAL_CAP
    };
    let mut found: HashSet<BTreeSet<VertexId>> = HashSet::new();
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, &[trial]));
        let label = contract(g, k, &mut rng);
        let groups = label.iter().copied().max().map_or(0, |x| x + 1);
        let mut mult = vec![vec![0usize; groups]; groups];
        for e in g.edges() {
            let (a, b) = (label[e.u()], label[e.v()]);
            if a != b {
                mult[a][b] += 1;
                mult[b][a] += 1;
            }
        }
        let h = Graph::from_edges(
            groups,
            (0..groups).flat_map(|a| (a + 1..groups).map(move |b| (a, b))),
        )
        .expect("complete graph");
        let weighted_cost = |mask: u64| -> usize {
            let mut c = 0;
            for a in 0..groups {
                for b in a + 1..groups {
                    if (mask >> a & 1) != (mask >> b & 1) {
                        c += mult[a][b];
                    }
                }
            }
            c
        };
        for_each_cut(&h, |mask, _| {
            let cost = weighted_cost(mask);
            if cost as f64 <= threshold {
                let side = (0..n).filter(|&v| mask >> label[v] & 1 == 1).collect();
                found.insert(side);
            }
        });
    }
    let mut cuts: Vec<CutSolution> = found
        .into_iter()
        .map(|side| CutSolution {
            cost: cut_cost(g, &side),
            side,
        })
        .collect();
    cuts.sort();
    cuts
}

/// Random contraction to `k` groups; returns a dense group label per vertex.
fn contract(g: &Graph, k: usize, rng: &mut Rng) -> Vec<usize> {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut groups = n;
    for e in priority_order(&edge_priorities(g, rng)) {
        if groups <= k {
            break;
        }
        if uf.union(e.u(), e.v()) {
            groups -= 1;
        }
    }
    // disconnected leftovers are merged at random
    while groups > k {
        let a = (unit(rng) * n as f64) as usize;
        let b = (unit(rng) * n as f64) as usize;
        if uf.union(a, b) {
            groups -= 1;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = uf.find(v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[v] = label[r];
    }
    out
}

/// The distribution the sampler draws from: candidate cuts with their
/// unnormalized log-weights.
#[derive(Clone, Debug)]
pub struct CutSampler {
    pub opt: usize,
    /// `None` when `OPT = 0`, where zero-cost cuts are drawn uniformly.
    pub alpha: Option<f64>,
    pub threshold: f64,
    pub exhaustive: bool,
    cuts: Vec<CutSolution>,
    cumulative: Vec<f64>,
}

/// `(2 + 1/eps) ln n / OPT`.
pub fn sampler_alpha(n: usize, opt: usize, eps: f64) -> f64 {
    (2.0 + 1.0 / eps) * (n as f64).ln() / opt as f64
}

/// `(2 + 7 eps) OPT + 2 eps`.
pub fn sampler_threshold(opt: usize, eps: f64) -> f64 {
    (2.0 + 7.0 * eps) * opt as f64 + 2.0 * eps
}

impl CutSampler {
    pub fn new(g: &Graph, eps: f64, seed: u64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("eps must be positive, got {eps}")));
        }
        let opt = min_cut_value(g)?;
        let (alpha, threshold) = if opt == 0 {
            (None, 0.0)
        } else {
            (Some(sampler_alpha(g.n(), opt, eps)), sampler_threshold(opt, eps))
        };
        let found = enumerate_small_cuts(g, threshold, derive_seed(seed, &[0xc07]))?;
        let cuts = found.cuts;
        let a = alpha.unwrap_or(0.0);
        // log-sum-exp relative to the cheapest cut
        let base = cuts.iter().map(|c| c.cost).min().unwrap_or(0) as f64;
        let mut acc = 0.0;
        let cumulative = cuts
            .iter()
            .map(|c| {
                acc += (-a * (c.cost as f64 - base)).exp();
                acc
            })
            .collect();
        Ok(CutSampler {
            opt,
            alpha,
            threshold,
            exhaustive: found.exhaustive,
            cuts,
            cumulative,
        })
    }

    pub fn candidates(&self) -> &[CutSolution] {
        &self.cuts
    }

    /// Draws one cut; consumes one uniform.
    pub fn sample(&self, rng: &mut Rng) -> CutSolution {
        let total = *self.cumulative.last().expect("at least one cut");
        let x = unit(rng) * total;
        let i = self.cumulative.partition_point(|&c| c <= x);
        self.cuts[i.min(self.cuts.len() - 1)].clone()
    }

    /// Exact output distribution.
    pub fn distribution(&self) -> Result<ExactDistribution> {
        let total = *self.cumulative.last().expect("at least one cut");
        let mut prev = 0.0;
        ExactDistribution::new(self.cuts.iter().zip(&self.cumulative).map(|(c, &cum)| {
            let p = (cum - prev) / total;
            prev = cum;
            (c.solution(), p)
        }))
    }
}

/// One draw of the exponential-mechanism min cut sampler.
pub fn stable_min_cut(g: &Graph, eps: f64, seed: u64) -> Result<CutSolution> {
    let sampler = CutSampler::new(g, eps, seed)?;
    Ok(sampler.sample(&mut rng_from_seed(seed)))
}

fn gibbs_cuts(g: &Graph) -> Result<Vec<(u64, usize)>> {
    need_two(g)?;
    if g.n() > GIBBS_LIMIT {
        return Err(Error::Capacity(format!(
            "gibbs oracle enumerates 2^n subsets; n = {} exceeds {GIBBS_LIMIT}",
            g.n()
        )));
    }
    let mut out = Vec::with_capacity((1 << g.n()) - 2);
    for_each_cut(g, |mask, cost| out.push((mask, cost)));
    Ok(out)
}

/// The distribution over all `2^n - 2` proper subsets with mass
/// proportional to `exp(-alpha cost)`.
pub fn gibbs_cut_oracle(g: &Graph, alpha: f64) -> Result<ExactDistribution> {
    let cuts = gibbs_cuts(g)?;
    let base = cuts.iter().map(|c| c.1).min().unwrap_or(0) as f64;
    let weights: Vec<f64> = cuts
        .iter()
        .map(|&(_, c)| (-alpha * (c as f64 - base)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    ExactDistribution::new(
        cuts.iter()
            .zip(weights)
            .map(|(&(mask, _), w)| (Solution::Vertices(mask_to_set(mask, g.n())), w / total)),
    )
}

/// Gibbs normalizers: `eligible` sums `exp(-alpha cost)` over cuts with
/// cost at most `threshold`, `all` over every proper subset. Both are scaled
/// by the common factor `exp(alpha OPT)` so they stay representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GibbsSums {
    pub eligible: f64,
    pub all: f64,
    /// The scale applied, as `alpha * OPT`.
    pub log_scale: f64,
}

impl GibbsSums {
    /// `2n (Z' - Z) / Z'`.
    pub fn truncation_bound(&self, n: usize) -> f64 {
        2.0 * n as f64 * (self.all - self.eligible) / self.all
    }
}

pub fn gibbs_sums(g: &Graph, alpha: f64, threshold: f64) -> Result<GibbsSums> {
    let cuts = gibbs_cuts(g)?;
    let base = cuts.iter().map(|c| c.1).min().unwrap_or(0) as f64;
    let (mut eligible, mut all) = (0.0, 0.0);
    for &(_, c) in &cuts {
        let w = (-alpha * (c as f64 - base)).exp();
        all += w;
        if c as f64 <= threshold {
            eligible += w;
        }
    }
    Ok(GibbsSums {
        eligible,
        all,
        log_scale: alpha * base,
    })
}

/// `(n/m) n^((2 + 1/eps)/OPT) ((2 + 7 eps) OPT + 2 eps)`, without the
/// vanishing term. Infinite when `OPT = 0`.
pub fn sensitivity_bound(n: usize, m: usize, opt: usize, eps: f64) -> f64 {
    if opt == 0 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    nf / m as f64 * nf.powf((2.0 + 1.0 / eps) / opt as f64) * sampler_threshold(opt, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::metrics::{exact_emd, tv_distance};

    fn brute_min_cut(g: &Graph) -> usize {
        let mut best = usize::MAX;
        for mask in 1u64..(1 << g.n()) - 1 {
            best = best.min(cut_cost(g, &mask_to_set(mask, g.n())));
        }
        best
    }

    #[test]
    fn min_cut_values() {
        assert_eq!(min_cut_value(&generate(&Family::Cycle(4)).unwrap()), Ok(2));
        assert_eq!(min_cut_value(&generate(&Family::Star(7)).unwrap()), Ok(1));
        assert_eq!(min_cut_value(&generate(&Family::Complete(4)).unwrap()), Ok(3));
        assert_eq!(min_cut_value(&Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()), Ok(0));
        assert!(min_cut_value(&Graph::empty(1)).is_err());
    }

    #[test]
    fn stoer_wagner_matches_brute_force() {
        for seed in 0..60 {
            let n = 2 + seed as usize % 9;
            let g = generate(&Family::ErdosRenyi { n, p: 0.5, seed }).unwrap();
            assert_eq!(min_cut_value(&g).unwrap(), brute_min_cut(&g), "seed {seed}");
        }
    }

    #[test]
    fn enumeration_counts() {
        let c4 = generate(&Family::Cycle(4)).unwrap();
        assert_eq!(enumerate_small_cuts(&c4, 2.0, 0).unwrap().cuts.len(), 12);
        let k4 = generate(&Family::Complete(4)).unwrap();
        assert_eq!(enumerate_small_cuts(&k4, 3.0, 0).unwrap().cuts.len(), 8);
        let g = generate(&Family::ErdosRenyi { n: 7, p: 0.5, seed: 1 }).unwrap();
        let all = enumerate_small_cuts(&g, g.m() as f64, 0).unwrap();
        assert_eq!(all.cuts.len(), (1 << 7) - 2);
        assert!(all.exhaustive);
        assert!(enumerate_small_cuts(&c4, 1.0, 0).is_err());
    }

    #[test]
    fn enumeration_costs_are_correct() {
        let g = generate(&Family::ErdosRenyi { n: 9, p: 0.4, seed: 3 }).unwrap();
        for c in enumerate_small_cuts(&g, 4.0, 0).unwrap().cuts {
            assert_eq!(c.cost, cut_cost(&g, &c.side));
            assert!(c.cost <= 4);
        }
    }

    #[test]
    fn contraction_finds_min_cuts_of_large_cycles() {
        // C_24 has 24*23/2 pairs of cut edges, each giving two sides
        let g = generate(&Family::Cycle(24)).unwrap();
        let found = enumerate_small_cuts(&g, 2.0, 5).unwrap();
        assert!(!found.exhaustive);
        assert!(found.cuts.iter().all(|c| c.cost == 2));
        assert_eq!(found.cuts.len(), 24 * 23);
    }

    #[test]
    fn sampler_respects_threshold() {
        let g = generate(&Family::ErdosRenyi { n: 10, p: 0.4, seed: 8 }).unwrap();
        let opt = min_cut_value(&g).unwrap();
        for eps in [0.1, 0.5] {
            for seed in 0..50 {
                let c = stable_min_cut(&g, eps, seed).unwrap();
                assert!(c.cost as f64 <= sampler_threshold(opt, eps) + 1e-12);
            }
        }
    }

    #[test]
    fn disconnected_graphs_give_zero_cuts() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let s = CutSampler::new(&g, 0.3, 0).unwrap();
        assert_eq!(s.candidates().len(), 2);
        for seed in 0..20 {
            assert_eq!(stable_min_cut(&g, 0.3, seed).unwrap().cost, 0);
        }
    }

    #[test]
    fn c4_sampler_weights() {
        // threshold 12 admits all 14 cuts; the two "diagonal" cuts cost 4
        let g = generate(&Family::Cycle(4)).unwrap();
        let s = CutSampler::new(&g, 0.5, 0).unwrap();
        assert_eq!(s.candidates().len(), 14);
        let alpha = 4.0 * 4f64.ln() / 2.0;
        let heavy = (-2.0 * alpha).exp();
        let total = 12.0 + 2.0 * heavy;
        for (sol, p) in s.distribution().unwrap().support() {
            let side = sol.as_vertices().unwrap();
            let expected = if cut_cost(&g, side) == 2 { 1.0 } else { heavy } / total;
            assert!((p - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn gibbs_oracle_limits() {
        let c4 = generate(&Family::Cycle(4)).unwrap();
        let flat = gibbs_cut_oracle(&c4, 0.0).unwrap();
        assert_eq!(flat.support_len(), 14);
        assert!(flat.support().all(|(_, p)| (p - 1.0 / 14.0).abs() < 1e-12));
        let sharp = gibbs_cut_oracle(&c4, 50.0).unwrap();
        let min_cuts = ExactDistribution::uniform(
            enumerate_small_cuts(&c4, 2.0, 0).unwrap().cuts.iter().map(CutSolution::solution),
        )
        .unwrap();
        assert!(tv_distance(&sharp, &min_cuts).unwrap() < 1e-6);
        assert!(matches!(
            gibbs_cut_oracle(&generate(&Family::Path(17)).unwrap(), 1.0),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn truncation_emd_within_bound() {
        for seed in 0..20 {
            let n = 4 + seed as usize % 6;
            let g = generate(&Family::ErdosRenyi { n, p: 0.6, seed }).unwrap();
            let opt = min_cut_value(&g).unwrap();
            if opt == 0 {
                continue;
            }
            for eps in [0.05, 0.2, 0.5] {
                let alpha = sampler_alpha(n, opt, eps);
                let alg = CutSampler::new(&g, eps, 0).unwrap().distribution().unwrap();
                let gibbs = gibbs_cut_oracle(&g, alpha).unwrap();
                let sums = gibbs_sums(&g, alpha, sampler_threshold(opt, eps)).unwrap();
                let emd = exact_emd(&alg, &gibbs).unwrap();
                assert!(emd <= sums.truncation_bound(n) + 1e-12, "seed {seed} eps {eps}");
            }
        }
    }

    #[test]
    fn normalizer_grows_under_edge_removal() {
        for seed in 0..10 {
            let g = generate(&Family::ErdosRenyi { n: 8, p: 0.5, seed }).unwrap();
            let alpha = 1.3;
            let z = gibbs_sums(&g, alpha, 0.0).unwrap();
            for e in g.edges() {
                let ze = gibbs_sums(&g.remove_edge(e).unwrap(), alpha, 0.0).unwrap();
                // undo the per-graph scaling before comparing
                let lhs = z.all.ln() - z.log_scale;
                let rhs = ze.all.ln() - ze.log_scale;
                assert!(lhs <= rhs + 1e-12);
            }
        }
    }
}
