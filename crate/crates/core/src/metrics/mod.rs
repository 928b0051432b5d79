//! Distances between solutions and between distributions over solutions.

mod assignment;
mod transport;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};

pub use assignment::min_cost_assignment;
pub use transport::min_cost_transport;

/// An algorithm output: a set of edges or a set of vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Solution {
    Edges(BTreeSet<EdgeId>),
    Vertices(BTreeSet<VertexId>),
}

impl Solution {
    pub fn kind(&self) -> &'static str {
        match self {
            Solution::Edges(_) => "edges",
            Solution::Vertices(_) => "vertices",
        }
    }

    /// Hamming weight, i.e. the number of members.
    pub fn len(&self) -> usize {
        match self {
            Solution::Edges(s) => s.len(),
            Solution::Vertices(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_edges(&self) -> Option<&BTreeSet<EdgeId>> {
        match self {
            Solution::Edges(s) => Some(s),
            Solution::Vertices(_) => None,
        }
    }

    pub fn as_vertices(&self) -> Option<&BTreeSet<VertexId>> {
        match self {
            Solution::Vertices(s) => Some(s),
            Solution::Edges(_) => None,
        }
    }

    fn same_kind(&self, other: &Solution) -> Result<()> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                left: self.kind(),
                right: other.kind(),
            })
        }
    }
}

impl FromIterator<EdgeId> for Solution {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        Solution::Edges(iter.into_iter().collect())
    }
}

impl FromIterator<VertexId> for Solution {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Solution::Vertices(iter.into_iter().collect())
    }
}

fn sym_diff<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    let (mut x, mut y) = (a.iter().peekable(), b.iter().peekable());
    let mut d = 0;
    loop {
        match (x.peek(), y.peek()) {
            (Some(p), Some(q)) => match p.cmp(q) {
                std::cmp::Ordering::Less => {
                    d += 1;
                    x.next();
                }
                std::cmp::Ordering::Greater => {
                    d += 1;
                    y.next();
                }
                std::cmp::Ordering::Equal => {
                    x.next();
                    y.next();
                }
            },
            (Some(_), None) => return d + x.count(),
            (None, Some(_)) => return d + y.count(),
            (None, None) => return d,
        }
    }
}

/// Size of the symmetric difference.
pub fn hamming(a: &Solution, b: &Solution) -> Result<usize> {
    match (a, b) {
        (Solution::Edges(x), Solution::Edges(y)) => Ok(sym_diff(x, y)),
        (Solution::Vertices(x), Solution::Vertices(y)) => Ok(sym_diff(x, y)),
        _ => a.same_kind(b).map(|_| unreachable!()),
    }
}

/// A multiset of sampled solutions of one kind.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<Solution>,
}

impl EmpiricalDistribution {
    pub fn new(samples: Vec<Solution>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::InvalidDistribution("no samples".into()));
        };
        for s in &samples {
            first.same_kind(s)?;
        }
        Ok(EmpiricalDistribution { samples })
    }

    pub fn samples(&self) -> &[Solution] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_weight(&self) -> usize {
        self.samples.iter().map(Solution::len).max().unwrap_or(0)
    }

    fn counts(&self) -> BTreeMap<&Solution, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.samples {
            *counts.entry(s).or_insert(0) += 1;
        }
        counts
    }
}

/// Earth mover's distance between two equal-size sample lists: the mean
/// Hamming cost of an optimal perfect matching between them.
///
/// Repeated samples are pooled first. When few distinct outputs remain the
/// pooled problem is solved as a transportation problem, otherwise as an
/// `N x N` assignment problem. Both give the same optimum.
pub fn empirical_emd(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidDistribution(format!(
            "sample counts differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    a.samples[0].same_kind(&b.samples[0])?;
    let n = a.len();
    let (ca, cb) = (a.counts(), b.counts());
    if ca.len() * cb.len() <= n.max(64) {
        let supply: Vec<f64> = ca.values().map(|&c| c as f64).collect();
        let demand: Vec<f64> = cb.values().map(|&c| c as f64).collect();
        let cost = cost_matrix(ca.keys().copied(), cb.keys().copied());
        Ok(min_cost_transport(&supply, &demand, &cost)? / n as f64)
    } else {
        Ok(empirical_emd_by_assignment(a, b)?)
    }
}

/// [`empirical_emd`] without pooling; always solves the full assignment.
pub fn empirical_emd_by_assignment(
    a: &EmpiricalDistribution,
    b: &EmpiricalDistribution,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidDistribution("sample counts differ".into()));
    }
    a.samples[0].same_kind(&b.samples[0])?;
    let cost: Vec<Vec<i64>> = a
        .samples
        .iter()
        .map(|x| {
            b.samples
                .iter()
                .map(|y| hamming(x, y).map(|d| d as i64))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let (total, _) = min_cost_assignment(&cost);
    Ok(total as f64 / a.len() as f64)
}

fn cost_matrix<'a>(
    xs: impl Iterator<Item = &'a Solution>,
    ys: impl Iterator<Item = &'a Solution> + Clone,
) -> Vec<Vec<f64>> {
    xs.map(|x| {
        ys.clone()
            .map(|y| hamming(x, y).expect("kinds checked") as f64)
            .collect()
    })
    .collect()
}

/// A finite distribution over solutions of one kind.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    support: BTreeMap<Solution, f64>,
}

impl ExactDistribution {
    /// Repeated solutions have their probabilities added. Zero-probability
    /// entries are dropped.
    pub fn new(entries: impl IntoIterator<Item = (Solution, f64)>) -> Result<Self> {
        let mut support: BTreeMap<Solution, f64> = BTreeMap::new();
        let mut total = 0.0;
        let mut kind = None;
        for (s, p) in entries {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!("bad probability {p}")));
            }
            match kind {
                None => kind = Some(s.clone()),
                Some(ref k) => k.same_kind(&s)?,
            }
            total += p;
            if p > 0.0 {
                *support.entry(s).or_insert(0.0) += p;
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(ExactDistribution { support })
    }

    pub fn point(s: Solution) -> Self {
        ExactDistribution {
            support: BTreeMap::from([(s, 1.0)]),
        }
    }

    /// Uniform over the given (distinct) solutions.
    pub fn uniform(solutions: impl IntoIterator<Item = Solution>) -> Result<Self> {
        let v: Vec<Solution> = solutions.into_iter().collect();
        let p = 1.0 / v.len() as f64;
        Self::new(v.into_iter().map(|s| (s, p)))
    }

    pub fn support(&self) -> impl Iterator<Item = (&Solution, f64)> {
        self.support.iter().map(|(s, &p)| (s, p))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn probability(&self, s: &Solution) -> f64 {
        self.support.get(s).copied().unwrap_or(0.0)
    }

    pub fn max_weight(&self) -> usize {
        self.support.keys().map(Solution::len).max().unwrap_or(0)
    }

    fn kind_check(&self, other: &ExactDistribution) -> Result<()> {
        match (self.support.keys().next(), other.support.keys().next()) {
            (Some(x), Some(y)) => x.same_kind(y),
            _ => Ok(()),
        }
    }
}

pub fn tv_distance(a: &ExactDistribution, b: &ExactDistribution) -> Result<f64> {
    a.kind_check(b)?;
    let mut sum = 0.0;
    for (s, p) in a.support() {
        sum += (p - b.probability(s)).abs();
    }
    for (s, q) in b.support() {
        if !a.support.contains_key(s) {
            sum += q;
        }
    }
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Largest Hamming distance between a solution in the support of `a` and
/// one in the support of `b`. `exact_emd(a, b)` is at most this times
/// `tv_distance(a, b)`; it is at most twice the largest Hamming weight.
pub fn max_pairwise_distance(a: &ExactDistribution, b: &ExactDistribution) -> Result<usize> {
    a.kind_check(b)?;
    let mut best = 0;
    for x in a.support.keys() {
        for y in b.support.keys() {
            best = best.max(hamming(x, y)?);
        }
    }
    Ok(best)
}

/// Largest support-size product [`exact_emd`] accepts.
pub const EXACT_EMD_CAPACITY: usize = 1_000_000;

/// Optimal transport cost between two exact distributions under the Hamming
/// ground metric.
pub fn exact_emd(a: &ExactDistribution, b: &ExactDistribution) -> Result<f64> {
    a.kind_check(b)?;
    let product = a.support_len().saturating_mul(b.support_len());
    if product > EXACT_EMD_CAPACITY {
        return Err(Error::Capacity(format!(
            "support sizes {} x {} exceed {EXACT_EMD_CAPACITY}",
            a.support_len(),
            b.support_len()
        )));
    }
    let supply: Vec<f64> = a.support.values().copied().collect();
    let demand: Vec<f64> = b.support.values().copied().collect();
    let cost = cost_matrix(a.support.keys(), b.support.keys());
    min_cost_transport(&supply, &demand, &cost)
}
