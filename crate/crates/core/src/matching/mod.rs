//! Matching algorithms: exact maximum and lexicographically smallest
//! maximum matchings, randomized greedy, Laplace degree thresholding, greedy
//! augmenting paths, and the mixtures built from them.

mod augmenting;
mod blossom;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::metrics::Solution;
use crate::stochastics::{
    derive_seed, edge_priorities, pick_index, rng_from_seed, sample_laplace, unit, LaplaceParams,
    Rng,
};

pub use augmenting::augmenting_rounds;
use augmenting::{greedy_augmenting, mate_edges};
use blossom::Blossom;

/// Tag mixed into the seed handed to the chosen component of a mixture.
pub const MIXTURE_TAG: u64 = 0x6d69_7874;

/// True if `s` is a set of pairwise disjoint edges of `g`.
pub fn is_matching(g: &Graph, s: &Solution) -> bool {
    let Some(edges) = s.as_edges() else {
        return false;
    };
    let mut seen = BTreeSet::new();
    edges
        .iter()
        .all(|e| g.contains_edge(*e) && seen.insert(e.u()) && seen.insert(e.v()))
}

/// True if no edge of `g` can be added to the matching `s`.
pub fn is_maximal_matching(g: &Graph, s: &Solution) -> bool {
    let covered: BTreeSet<VertexId> = s
        .as_edges()
        .into_iter()
        .flatten()
        .flat_map(|e| [e.u(), e.v()])
        .collect();
    is_matching(g, s) && g.edges().all(|e| covered.contains(&e.u()) || covered.contains(&e.v()))
}

/// A maximum-cardinality matching (Edmonds' blossom algorithm).
pub fn maximum_matching(g: &Graph) -> Solution {
    let mut b = Blossom::new(g);
    b.maximize();
    mate_edges(&b.mate).collect()
}

pub fn maximum_matching_size(g: &Graph) -> usize {
    let mut b = Blossom::new(g);
    b.maximize();
    b.size()
}

/// The maximum matching whose sorted edge sequence is lexicographically
/// smallest.
///
/// Edges are scanned in canonical order and kept when a maximum matching
/// containing every kept edge still exists. A maximum matching of the graph
/// minus the kept edges' endpoints is maintained, so each test is at most
/// two single-root augmentation attempts.
pub fn lex_min_maximum_matching(g: &Graph) -> Solution {
    let mut b = Blossom::new(g);
    b.maximize();
    let mut forced = BTreeSet::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        if !b.is_alive(u) || !b.is_alive(v) {
            continue;
        }
        if b.mate_of(u) == Some(v) {
            b.kill(u);
            b.kill(v);
            forced.insert(e);
            continue;
        }
        let saved = b.mate.clone();
        let freed: Vec<VertexId> = [b.kill(u), b.kill(v)].into_iter().flatten().collect();
        // Losing one matched edge is allowed; losing two needs a repair.
        let ok = freed.len() < 2 || freed.iter().any(|&w| b.mate_of(w).is_none() && b.augment_from(w));
        if ok {
            forced.insert(e);
        } else {
            b.mate = saved;
            b.revive(u);
            b.revive(v);
        }
    }
    Solution::Edges(forced)
}

/// Scans edges by increasing `(priority, EdgeId)` and keeps each edge whose
/// endpoints are both still free.
pub fn randomized_greedy_matching(g: &Graph, priorities: &BTreeMap<EdgeId, f64>) -> Result<Solution> {
    let mut order = Vec::with_capacity(g.m());
    for e in g.edges() {
        let p = priorities
            .get(&e)
            .ok_or_else(|| invalid(format!("no priority for edge {e}")))?;
        order.push((*p, e));
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut used = vec![false; g.n()];
    let mut out = BTreeSet::new();
    for (_, e) in order {
        if !used[e.u()] && !used[e.v()] {
            used[e.u()] = true;
            used[e.v()] = true;
            out.insert(e);
        }
    }
    Ok(Solution::Edges(out))
}

/// Randomized greedy with priorities drawn from `rng`.
pub fn greedy_matching_with(g: &Graph, rng: &mut Rng) -> Solution {
    randomized_greedy_matching(g, &edge_priorities(g, rng)).expect("priorities cover the graph")
}

pub fn greedy_matching(g: &Graph, seed: u64) -> Solution {
    greedy_matching_with(g, &mut rng_from_seed(seed))
}

/// Location `tau` and relative scale `delta` of the Laplace degree cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdConfig {
    pub tau: f64,
    pub delta: f64,
}

impl ThresholdConfig {
    pub fn new(tau: f64, delta: f64) -> Result<Self> {
        if !(tau > 0.0) || !(delta > 0.0) || !tau.is_finite() || !delta.is_finite() {
            return Err(invalid(format!("threshold needs tau, delta > 0, got ({tau}, {delta})")));
        }
        Ok(ThresholdConfig { tau, delta })
    }

    pub fn laplace(&self) -> LaplaceParams {
        LaplaceParams::new(self.tau, self.delta * self.tau).expect("validated")
    }
}

/// Vertices removed at degree cap `level`: every vertex of degree at least
/// `level`, or all vertices when `level <= 0`.
pub fn vertices_at_or_above(g: &Graph, level: f64) -> BTreeSet<VertexId> {
    if level <= 0.0 {
        return (0..g.n()).collect();
    }
    (0..g.n()).filter(|&v| g.degree(v) as f64 >= level).collect()
}

/// Result of a thresholded run.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRun {
    pub solution: Solution,
    pub level: f64,
    pub removed: BTreeSet<VertexId>,
}

/// Draws `L ~ Lap(tau, delta tau)` (one uniform from `rng`), deletes the
/// vertices of degree at least `L`, and runs `inner` on what is left with
/// the rest of the stream.
pub fn threshold_wrap<F>(g: &Graph, cfg: &ThresholdConfig, rng: &mut Rng, inner: F) -> ThresholdRun
where
    F: FnOnce(&Graph, &mut Rng) -> Solution,
{
    let level = sample_laplace(&cfg.laplace(), rng);
    threshold_at(g, level, rng, inner)
}

/// [`threshold_wrap`] with a fixed level.
pub fn threshold_at<F>(g: &Graph, level: f64, rng: &mut Rng, inner: F) -> ThresholdRun
where
    F: FnOnce(&Graph, &mut Rng) -> Solution,
{
    let removed = vertices_at_or_above(g, level);
    let rest = g.without_vertices(&removed);
    ThresholdRun {
        solution: inner(&rest, rng),
        level,
        removed,
    }
}

/// Which component produced a matching.
#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// The deterministic lexicographic matching (guards or mixture pick).
    Lexicographic,
    Thresholded { level: f64, removed: BTreeSet<VertexId> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingRun {
    pub matching: Solution,
    pub branch: Branch,
}

impl MatchingRun {
    fn lex(g: &Graph) -> Self {
        MatchingRun {
            matching: lex_min_maximum_matching(g),
            branch: Branch::Lexicographic,
        }
    }

    fn thresholded(run: ThresholdRun) -> Self {
        MatchingRun {
            matching: run.solution,
            branch: Branch::Thresholded {
                level: run.level,
                removed: run.removed,
            },
        }
    }
}

fn check_eps(eps: f64, upper: f64) -> Result<()> {
    if !(eps > 0.0 && eps < upper) {
        return Err(invalid(format!("eps must lie in (0, {upper}), got {eps}")));
    }
    Ok(())
}

/// `1 / (2 ln n)`.
fn default_delta(n: usize) -> f64 {
    1.0 / (2.0 * (n as f64).ln())
}

/// Thresholded randomized greedy: the maximum matching on small instances,
/// otherwise greedy behind a Laplace degree cap with `tau = m / (eps' MM)`,
/// `eps' = eps - 1/(2 MM)` and `delta = 1 / (2 ln n)`.
pub fn thresholded_greedy_run(g: &Graph, eps: f64, seed: u64) -> Result<MatchingRun> {
    check_eps(eps, 1.0)?;
    let mm = maximum_matching_size(g) as f64;
    let m = g.m() as f64;
    if mm <= 1.0 / eps + 1.0 || m <= 1.0 / (2.0 * eps) {
        return Ok(MatchingRun::lex(g));
    }
    let eps1 = eps - 1.0 / (2.0 * mm);
    let cfg = ThresholdConfig::new(m / (eps1 * mm), default_delta(g.n()))?;
    let mut rng = rng_from_seed(seed);
    Ok(MatchingRun::thresholded(threshold_wrap(
        g,
        &cfg,
        &mut rng,
        greedy_matching_with,
    )))
}

pub fn thresholded_greedy_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    thresholded_greedy_run(g, eps, seed).map(|r| r.matching)
}

/// Mixture weight of the lexicographic component, with the intermediate
/// quantities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureWeights {
    /// `MM^2 / m`.
    pub f: f64,
    /// Natural log of the `g` term (it can overflow `f64`).
    pub ln_g: f64,
    /// Probability of running the lexicographic matching.
    pub rho: f64,
    /// True when a guard forces the lexicographic matching.
    pub guarded: bool,
}

fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn mixture(f: f64, ln_g: f64) -> MixtureWeights {
    // rho = g / (f + g) = 1 / (1 + f/g)
    let rho = 1.0 / (1.0 + (f.ln() - ln_g).exp());
    MixtureWeights {
        f,
        ln_g,
        rho,
        guarded: false,
    }
}

fn guarded() -> MixtureWeights {
    MixtureWeights {
        f: f64::NAN,
        ln_g: f64::NAN,
        rho: 1.0,
        guarded: true,
    }
}

/// Weights of the half-approximation mixture: guard `MM < 5 or m < 6`,
/// `f = MM^2/m`, `g = (eps/(1-eps)) ln n + m^3 / (eps^3 MM^3)`.
pub fn half_matching_weights(g: &Graph, eps: f64) -> Result<MixtureWeights> {
    check_eps(eps, 0.5)?;
    let mm = maximum_matching_size(g) as f64;
    let (m, n) = (g.m() as f64, g.n() as f64);
    if mm < 5.0 || m < 6.0 {
        return Ok(guarded());
    }
    let f = mm * mm / m;
    let ln_g = ln_add(
        (eps / (1.0 - eps) * n.ln()).ln(),
        3.0 * (m / (eps * mm)).ln(),
    );
    Ok(mixture(f, ln_g))
}

/// `c = k^2` with `k = ceil(1/eps - 1)`.
pub fn mixture_exponent(eps: f64) -> usize {
    let k = augmenting_rounds(eps);
    k * k
}

/// Weights of the `(1 - eps)` mixture: guard `MM < 2c or m < 2c`,
/// `g = (eps/(1-eps)) ln n + (m / (eps^3 MM))^c`.
pub fn one_minus_eps_weights(g: &Graph, eps: f64) -> Result<MixtureWeights> {
    check_eps(eps, 1.0)?;
    let c = mixture_exponent(eps) as f64;
    let mm = maximum_matching_size(g) as f64;
    let (m, n) = (g.m() as f64, g.n() as f64);
    if mm < 2.0 * c || m < 2.0 * c {
        return Ok(guarded());
    }
    let f = mm * mm / m;
    let ln_g = ln_add(
        (eps / (1.0 - eps) * n.ln()).ln(),
        c * (m / (eps.powi(3) * mm)).ln(),
    );
    Ok(mixture(f, ln_g))
}

/// Runs the lexicographic matching with probability `rho` and `other`
/// otherwise. The first uniform of `seed`'s stream picks the branch; the
/// chosen component gets a derived seed.
fn run_mixture<F>(g: &Graph, w: &MixtureWeights, seed: u64, other: F) -> Result<MatchingRun>
where
    F: FnOnce(&Graph, u64) -> Result<MatchingRun>,
{
    let u = unit(&mut rng_from_seed(seed));
    let child = derive_seed(seed, &[MIXTURE_TAG]);
    match pick_index(&[w.rho, 1.0 - w.rho], u) {
        0 => Ok(MatchingRun::lex(g)),
        _ => other(g, child),
    }
}

/// `(1/2 - eps)`-approximate matching mixing the lexicographic matching
/// with [`thresholded_greedy_run`].
pub fn stable_half_matching_run(g: &Graph, eps: f64, seed: u64) -> Result<MatchingRun> {
    let w = half_matching_weights(g, eps)?;
    run_mixture(g, &w, seed, |g, s| thresholded_greedy_run(g, eps, s))
}

pub fn stable_half_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    stable_half_matching_run(g, eps, seed).map(|r| r.matching)
}

/// `ceil(1/eps - 1)` rounds of greedy augmentation by disjoint augmenting
/// paths of length 1, 3, 5, ...
pub fn greedy_augmenting_matching_with(g: &Graph, eps: f64, rng: &mut Rng) -> Result<Solution> {
    check_eps(eps, 1.0)?;
    Ok(mate_edges(&greedy_augmenting(g, augmenting_rounds(eps), rng)).collect())
}

pub fn greedy_augmenting_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    greedy_augmenting_matching_with(g, eps, &mut rng_from_seed(seed))
}

/// Thresholded greedy augmentation: the maximum matching when
/// `MM <= 2/eps + 1` or `m <= 1/(3 eps)`, otherwise augmentation with
/// `eps' = eps/3 - 1/(3 MM)` behind a degree cap with `tau = m/(eps' MM)`.
pub fn thresholded_augmenting_run(g: &Graph, eps: f64, seed: u64) -> Result<MatchingRun> {
    check_eps(eps, 1.0)?;
    let mm = maximum_matching_size(g) as f64;
    let m = g.m() as f64;
    if mm <= 2.0 / eps + 1.0 || m <= 1.0 / (3.0 * eps) {
        return Ok(MatchingRun::lex(g));
    }
    let eps1 = eps / 3.0 - 1.0 / (3.0 * mm);
    let cfg = ThresholdConfig::new(m / (eps1 * mm), default_delta(g.n()))?;
    let rounds = augmenting_rounds(eps1);
    let mut rng = rng_from_seed(seed);
    Ok(MatchingRun::thresholded(threshold_wrap(g, &cfg, &mut rng, |h, r| {
        mate_edges(&greedy_augmenting(h, rounds, r)).collect()
    })))
}

pub fn thresholded_augmenting_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    thresholded_augmenting_run(g, eps, seed).map(|r| r.matching)
}

/// `(1 - eps)`-approximate matching mixing the lexicographic matching with
/// [`thresholded_augmenting_run`].
pub fn stable_one_minus_eps_matching_run(g: &Graph, eps: f64, seed: u64) -> Result<MatchingRun> {
    let w = one_minus_eps_weights(g, eps)?;
    run_mixture(g, &w, seed, |g, s| thresholded_augmenting_run(g, eps, s))
}

pub fn stable_one_minus_eps_matching(g: &Graph, eps: f64, seed: u64) -> Result<Solution> {
    stable_one_minus_eps_matching_run(g, eps, seed).map(|r| r.matching)
}

/// Confirms a matching is valid, for callers that want an error instead of
/// a boolean.
pub fn check_matching(g: &Graph, s: &Solution) -> Result<()> {
    if is_matching(g, s) {
        Ok(())
    } else {
        Err(Error::Contract("output is not a matching".into()))
    }
}
