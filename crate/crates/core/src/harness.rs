//! Average sensitivity: exact enumeration for deterministic algorithms,
//! Monte Carlo estimates with bootstrap intervals for randomized ones, and
//! parallel mixtures of algorithms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::matching::MIXTURE_TAG;
use crate::metrics::{empirical_emd, hamming, EmpiricalDistribution, Solution};
use crate::stochastics::{derive_seed, pick_index, rng_from_seed, unit};

const EDGE_TAG: u64 = 0x6564_6765;
const OUTPUT_TAG: u64 = 0x6f75_7470;
const BOOTSTRAP_TAG: u64 = 0x626f_6f74;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Largest number of removal tuples the exact k-removal enumeration visits.
pub const EXACT_TUPLE_CAPACITY: usize = 1_000_000;

type RunFn = dyn Fn(&Graph, u64) -> Result<Solution> + Send + Sync;

/// A named algorithm `(graph, seed) -> solution`.
#[derive(Clone)]
pub struct AlgorithmHandle {
    name: String,
    deterministic: bool,
    run: Arc<RunFn>,
}

impl fmt::Debug for AlgorithmHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgorithmHandle")
            .field("name", &self.name)
            .field("deterministic", &self.deterministic)
            .finish()
    }
}

impl AlgorithmHandle {
    /// `deterministic` promises the output ignores the seed.
    pub fn new<F>(name: impl Into<String>, deterministic: bool, f: F) -> Self
    where
        F: Fn(&Graph, u64) -> Result<Solution> + Send + Sync + 'static,
    {
        AlgorithmHandle {
            name: name.into(),
            deterministic,
            run: Arc::new(f),
        }
    }

    pub fn deterministic<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Graph) -> Solution + Send + Sync + 'static,
    {
        AlgorithmHandle {
            name: name.into(),
            deterministic: true,
            run: Arc::new(move |g, _| Ok(f(g))),
        }
    }

    pub fn randomized<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Graph, u64) -> Result<Solution> + Send + Sync + 'static,
    {
        AlgorithmHandle {
            name: name.into(),
            deterministic: false,
            run: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn run(&self, g: &Graph, seed: u64) -> Result<Solution> {
        (self.run)(g, seed)
    }
}

fn require_deterministic(alg: &AlgorithmHandle) -> Result<()> {
    if !alg.deterministic {
        return Err(Error::Contract(format!(
            "exact enumeration needs a deterministic algorithm, {} is randomized",
            alg.name
        )));
    }
    Ok(())
}

/// Mean Hamming change over all single-edge removals.
pub fn exact_average_sensitivity(alg: &AlgorithmHandle, g: &Graph) -> Result<f64> {
    require_deterministic(alg)?;
    if g.m() == 0 {
        return Err(Error::UndefinedInput("sensitivity of an edgeless graph".into()));
    }
    let base = alg.run(g, 0)?;
    let mut total = 0usize;
    for e in g.edges() {
        total += hamming(&base, &alg.run(&g.remove_edge(e)?, 0)?)?;
    }
    Ok(total as f64 / g.m() as f64)
}

/// Per-edge Hamming changes, in canonical edge order.
pub fn exact_edge_changes(alg: &AlgorithmHandle, g: &Graph) -> Result<Vec<(EdgeId, usize)>> {
    require_deterministic(alg)?;
    let base = alg.run(g, 0)?;
    g.edges()
        .map(|e| Ok((e, hamming(&base, &alg.run(&g.remove_edge(e)?, 0)?)?)))
        .collect()
}

/// Mean Hamming change over all `m^k` ordered removal tuples drawn from
/// `E` with repetition. Each distinct removal set is evaluated once.
pub fn exact_k_average_sensitivity(alg: &AlgorithmHandle, g: &Graph, k: usize) -> Result<f64> {
    require_deterministic(alg)?;
    check_k(g, k)?;
    let m = g.m();
    let tuples = (m as f64).powi(k as i32);
    if tuples > EXACT_TUPLE_CAPACITY as f64 {
        return Err(Error::Capacity(format!("{m}^{k} removal tuples")));
    }
    let edges: Vec<EdgeId> = g.edges().collect();
    let base = alg.run(g, 0)?;
    let mut cache: HashMap<BTreeSet<EdgeId>, usize> = HashMap::new();
    let mut idx = vec![0usize; k];
    let mut total = 0usize;
    loop {
        let set: BTreeSet<EdgeId> = idx.iter().map(|&i| edges[i]).collect();
        let d = match cache.get(&set) {
            Some(&d) => d,
            None => {
                let d = hamming(&base, &alg.run(&g.remove_edges(set.iter())?, 0)?)?;
                cache.insert(set, d);
                d
            }
        };
        total += d;
        // odometer over m^k tuples
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(total as f64 / tuples);
            }
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Chain bound for `k` removals: the sum over `i = 1..=k` of the largest
/// single-removal sensitivity among the graphs obtained by deleting at most
/// `i - 1` edges. Edgeless graphs count as 0.
pub fn k_removal_chain_bound(alg: &AlgorithmHandle, g: &Graph, k: usize) -> Result<f64> {
    require_deterministic(alg)?;
    check_k(g, k)?;
    let edges: Vec<EdgeId> = g.edges().collect();
    let mut level_max = Vec::with_capacity(k);
    let mut frontier: BTreeSet<BTreeSet<EdgeId>> = BTreeSet::from([BTreeSet::new()]);
    let mut running = 0.0f64;
    for _ in 0..k {
        for removed in &frontier {
            let h = g.remove_edges(removed.iter())?;
            if h.m() > 0 {
                running = running.max(exact_average_sensitivity(alg, &h)?);
            }
        }
        level_max.push(running);
        let mut next = BTreeSet::new();
        for removed in &frontier {
            for &e in &edges {
                if !removed.contains(&e) {
                    let mut r = removed.clone();
                    r.insert(e);
                    next.insert(r);
                }
            }
        }
        frontier = next;
    }
    Ok(level_max.iter().sum())
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if g.m() == 0 {
        return Err(Error::UndefinedInput("sensitivity of an edgeless graph".into()));
    }
    if k == 0 || k > g.m() {
        return Err(invalid(format!("k must lie in [1, m = {}], got {k}", g.m())));
    }
    Ok(())
}

/// Sampling parameters for [`estimate_k_average_sensitivity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingPlan {
    pub k: usize,
    pub edge_draws: usize,
    pub output_samples: usize,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn new(edge_draws: usize, output_samples: usize, seed: u64) -> Self {
        SamplingPlan {
            k: 1,
            edge_draws,
            output_samples,
            seed,
        }
    }

    pub fn with_k(self, k: usize) -> Self {
        SamplingPlan { k, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_edge_draws: usize,
    pub n_output_samples: usize,
    pub k: usize,
    /// Largest solution size seen in any sample on either side.
    pub max_weight: usize,
    /// EMD for each edge draw, in draw order.
    #[serde(skip)]
    pub per_draw: Vec<f64>,
}

impl SensitivityEstimate {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Removal tuple for draw `i`: `k` edges uniform over `E`, with repetition.
pub fn removal_draw(g: &Graph, seed: u64, draw: usize, k: usize) -> Vec<EdgeId> {
    let edges: Vec<EdgeId> = g.edges().collect();
    let mut rng = rng_from_seed(derive_seed(seed, &[EDGE_TAG, draw as u64]));
    (0..k)
        .map(|_| {
            let i = (unit(&mut rng) * edges.len() as f64) as usize;
            edges[i.min(edges.len() - 1)]
        })
        .collect()
}

/// Seed for replicate `r` of side `side` (0 for `G`, 1 for the shrunken
/// graph) in draw `draw`.
pub fn output_seed(seed: u64, draw: usize, side: u64, r: usize) -> u64 {
    derive_seed(seed, &[OUTPUT_TAG, draw as u64, side, r as u64])
}

pub fn estimate_average_sensitivity(
    alg: &AlgorithmHandle,
    g: &Graph,
    edge_draws: usize,
    output_samples: usize,
    seed: u64,
) -> Result<SensitivityEstimate> {
    estimate_k_average_sensitivity(alg, g, &SamplingPlan::new(edge_draws, output_samples, seed))
}

/// For each draw, compares `output_samples` runs on `G` with as many on
/// `G` minus the drawn edges, each run on its own derived seed. Draws run
/// on the current rayon pool and are aggregated in draw order, so the
/// result does not depend on the thread count. Deterministic algorithms
/// run once per side.
pub fn estimate_k_average_sensitivity(
    alg: &AlgorithmHandle,
    g: &Graph,
    plan: &SamplingPlan,
) -> Result<SensitivityEstimate> {
    check_k(g, plan.k)?;
    if plan.edge_draws == 0 {
        return Err(invalid("need at least one edge draw"));
    }
    if plan.output_samples < 2 {
        return Err(invalid("need at least two output samples per side"));
    }
    let reps = if alg.deterministic { 1 } else { plan.output_samples };
    let results: Vec<Result<(f64, usize)>> = (0..plan.edge_draws)
        .into_par_iter()
        .map(|i| {
            let removed = removal_draw(g, plan.seed, i, plan.k);
            let h = g.remove_edges(removed.iter())?;
            let side = |graph: &Graph, s: u64| -> Result<EmpiricalDistribution> {
                let runs = (0..reps)
                    .map(|r| alg.run(graph, output_seed(plan.seed, i, s, r)))
                    .collect::<Result<Vec<_>>>()?;
                EmpiricalDistribution::new(runs)
            };
            let a = side(g, 0)?;
            let b = side(&h, 1)?;
            Ok((empirical_emd(&a, &b)?, a.max_weight().max(b.max_weight())))
        })
        .collect();
    let mut per_draw = Vec::with_capacity(plan.edge_draws);
    let mut max_weight = 0;
    for r in results {
        let (d, w) = r?;
        per_draw.push(d);
        max_weight = max_weight.max(w);
    }
    let point = mean(&per_draw);
    let (ci_low, ci_high) = bootstrap_interval(&per_draw, point, derive_seed(plan.seed, &[BOOTSTRAP_TAG]));
    Ok(SensitivityEstimate {
        point,
        ci_low,
        ci_high,
        n_edge_draws: plan.edge_draws,
        n_output_samples: plan.output_samples,
        k: plan.k,
        max_weight,
        per_draw,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// 95% percentile bootstrap of the mean, widened to contain `point`.
fn bootstrap_interval(xs: &[f64], point: f64, seed: u64) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let n = xs.len();
    let mut means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let s: f64 = (0..n)
                .map(|_| xs[((unit(&mut rng) * n as f64) as usize).min(n - 1)])
                .sum();
            s / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let lo = means[(0.025 * BOOTSTRAP_RESAMPLES as f64) as usize];
    let hi = means[((0.975 * BOOTSTRAP_RESAMPLES as f64) as usize).min(BOOTSTRAP_RESAMPLES - 1)];
    (lo.min(point).max(0.0), hi.max(point))
}

type WeightFn = dyn Fn(&Graph) -> Result<Vec<f64>> + Send + Sync;

fn check_weights(w: &[f64], count: usize) -> Result<()> {
    if w.len() != count {
        return Err(Error::InvalidDistribution(format!(
            "{} weights for {count} algorithms",
            w.len()
        )));
    }
    if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("negative or non-finite weight in {w:?}")));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("weights sum to {s}")));
    }
    Ok(())
}

/// Runs `algs[i]` with probability `weights(g)[i]`. The first uniform of
/// the seed's stream picks `i`; the chosen algorithm gets a derived seed.
/// Same protocol as the stable matching mixtures.
pub fn parallel_mixture<W>(
    name: impl Into<String>,
    algs: Vec<AlgorithmHandle>,
    weights: W,
) -> Result<AlgorithmHandle>
where
    W: Fn(&Graph) -> Result<Vec<f64>> + Send + Sync + 'static,
{
    if algs.is_empty() {
        return Err(invalid("mixture of no algorithms"));
    }
    let weights: Arc<WeightFn> = Arc::new(weights);
    let deterministic = algs.len() == 1 && algs[0].deterministic;
    Ok(AlgorithmHandle {
        name: name.into(),
        deterministic,
        run: Arc::new(move |g, seed| {
            let w = weights(g)?;
            check_weights(&w, algs.len())?;
            let u = unit(&mut rng_from_seed(seed));
            let i = pick_index(&w, u);
            algs[i].run(g, derive_seed(seed, &[MIXTURE_TAG]))
        }),
    })
}

/// `E_e sum_i |rho_i(G) - rho_i(G - e)|` over all edges.
pub fn mean_weight_change<W>(g: &Graph, weights: W) -> Result<f64>
where
    W: Fn(&Graph) -> Result<Vec<f64>>,
{
    if g.m() == 0 {
        return Err(Error::UndefinedInput("weight change of an edgeless graph".into()));
    }
    let base = weights(g)?;
    let mut total = 0.0;
    for e in g.edges() {
        let w = weights(&g.remove_edge(e)?)?;
        if w.len() != base.len() {
            return Err(Error::InvalidDistribution("weight vector length changed".into()));
        }
        total += base.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum::<f64>();
    }
    Ok(total / g.m() as f64)
}

/// `sum_i rho_i beta_i + h * delta` with `delta` from [`mean_weight_change`].
pub fn mixture_bound(rho: &[f64], betas: &[f64], h: f64, delta: f64) -> f64 {
    rho.iter().zip(betas).map(|(r, b)| r * b).sum::<f64>() + h * delta
}

/// Flat record of one estimate, as written by the command-line tool.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityRecord {
    pub schema: u32,
    pub algorithm: String,
    /// `exact` for full enumeration, `estimate` for sampling.
    pub method: String,
    pub graph: String,
    pub k: usize,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_edge_draws: usize,
    pub n_output_samples: usize,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl SensitivityRecord {
    pub fn new(alg: &str, g: &Graph, est: &SensitivityEstimate, seed: u64, wall_time_ms: u64) -> Self {
        SensitivityRecord {
            schema: 1,
            algorithm: alg.to_string(),
            method: "estimate".into(),
            graph: g.content_hash(),
            k: est.k,
            point: est.point,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            n_edge_draws: est.n_edge_draws,
            n_output_samples: est.n_output_samples,
            seed,
            wall_time_ms,
        }
    }

    /// Record of an exact enumeration over `m^k` removal tuples.
    pub fn exact(alg: &str, g: &Graph, k: usize, value: f64, seed: u64, wall_time_ms: u64) -> Self {
        SensitivityRecord {
            schema: 1,
            algorithm: alg.to_string(),
            method: "exact".into(),
            graph: g.content_hash(),
            k,
            point: value,
            ci_low: value,
            ci_high: value,
            n_edge_draws: g.m().pow(k as u32),
            n_output_samples: 1,
            seed,
            wall_time_ms,
        }
    }
}
