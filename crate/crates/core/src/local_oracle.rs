//! Local query oracles for randomized greedy matching.
//!
//! [`greedy_match_oracle`] decides whether one edge belongs to the greedy
//! matching by recursing only into adjacent edges of lower rank, where rank
//! is `(priority, EdgeId)`. Ranks strictly decrease along the recursion, so
//! it terminates. An explicit stack is used instead of call recursion.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::stochastics::{derive_seed, edge_priorities, rng_from_seed};

/// Queries made by one oracle call.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLog {
    /// Distinct edges touched.
    pub queried_edges: BTreeSet<EdgeId>,
    /// Every status request (the root, each recursive request including
    /// memo hits) and, for the thresholded oracle, each adjacency probe.
    pub count: usize,
}

impl QueryLog {
    fn touch(&mut self, e: EdgeId) {
        self.count += 1;
        self.queried_edges.insert(e);
    }
}

type Priorities = BTreeMap<EdgeId, f64>;

fn rank(priorities: &Priorities, e: EdgeId) -> Result<(f64, EdgeId)> {
    priorities
        .get(&e)
        .map(|&p| (p, e))
        .ok_or_else(|| invalid(format!("no priority for edge {e}")))
}

fn rank_lt(a: (f64, EdgeId), b: (f64, EdgeId)) -> bool {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).is_lt()
}

/// Neighbourhood access for the recursion; the thresholded oracle hides
/// dead edges behind counted probes.
trait View {
    /// Adjacent edges visible in the view, with lower rank than `e`, in
    /// increasing rank order.
    fn lower(&mut self, e: EdgeId, log: &mut QueryLog) -> Result<Vec<EdgeId>>;
    fn priorities(&self) -> &Priorities;
}

struct Plain<'a> {
    g: &'a Graph,
    priorities: &'a Priorities,
}

impl View for Plain<'_> {
    fn lower(&mut self, e: EdgeId, _log: &mut QueryLog) -> Result<Vec<EdgeId>> {
        lower_among(self.priorities, e, self.g.adjacent_edges(e))
    }

    fn priorities(&self) -> &Priorities {
        self.priorities
    }
}

fn lower_among(priorities: &Priorities, e: EdgeId, adjacent: Vec<EdgeId>) -> Result<Vec<EdgeId>> {
    let re = rank(priorities, e)?;
    let mut out = Vec::new();
    for f in adjacent {
        let rf = rank(priorities, f)?;
        if rank_lt(rf, re) {
            out.push(rf);
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out.into_iter().map(|(_, f)| f).collect())
}

struct Frame {
    edge: EdgeId,
    lower: Vec<EdgeId>,
    next: usize,
}

fn run<V: View>(view: &mut V, root: EdgeId, log: &mut QueryLog) -> Result<bool> {
    let mut memo: HashMap<EdgeId, bool> = HashMap::new();
    log.touch(root);
    let mut stack = vec![Frame {
        edge: root,
        lower: view.lower(root, log)?,
        next: 0,
    }];
    let mut returned: Option<bool> = None;
    loop {
        let top = stack.last_mut().expect("stack non-empty inside loop");
        if let Some(child_matched) = returned.take() {
            if child_matched {
                memo.insert(top.edge, false);
                stack.pop();
                if stack.is_empty() {
                    return Ok(false);
                }
                returned = Some(false);
                continue;
            }
            top.next += 1;
        }
        if top.next == top.lower.len() {
            memo.insert(top.edge, true);
            stack.pop();
            if stack.is_empty() {
                return Ok(true);
            }
            returned = Some(true);
            continue;
        }
        let f = top.lower[top.next];
        log.touch(f);
        if let Some(&known) = memo.get(&f) {
            returned = Some(known);
            continue;
        }
        let lower = view.lower(f, log)?;
        stack.push(Frame {
            edge: f,
            lower,
            next: 0,
        });
    }
}

/// Whether `e` is in `randomized_greedy_matching(g, priorities)`.
pub fn greedy_match_oracle(
    g: &Graph,
    e: EdgeId,
    priorities: &Priorities,
    log: &mut QueryLog,
) -> Result<bool> {
    if !g.contains_edge(e) {
        return Err(Error::MissingEdge(e));
    }
    let mut view = Plain { g, priorities };
    let _ = view.priorities();
    run(&mut view, e, log)
}

struct Thresholded<'a> {
    g: &'a Graph,
    priorities: &'a Priorities,
    /// Probes allowed per endpoint before declaring it heavy.
    budget: usize,
    alive: HashMap<EdgeId, bool>,
}

impl Thresholded<'_> {
    /// An endpoint is heavy once `budget` neighbours other than the edge's
    /// far end have been seen; each neighbour seen is one probe.
    fn alive(&mut self, e: EdgeId, log: &mut QueryLog) -> bool {
        if let Some(&a) = self.alive.get(&e) {
            return a;
        }
        let mut ok = true;
        for x in [e.u(), e.v()] {
            let far = e.other(x);
            let mut seen = 0;
            if self.budget == 0 {
                ok = false;
                break;
            }
            for &y in self.g.neighbors(x) {
                if y == far {
                    continue;
                }
                log.touch(crate::graph::edge(x, y));
                seen += 1;
                if seen >= self.budget {
                    break;
                }
            }
            if seen >= self.budget {
                ok = false;
                break;
            }
        }
        self.alive.insert(e, ok);
        ok
    }
}

impl View for Thresholded<'_> {
    fn lower(&mut self, e: EdgeId, log: &mut QueryLog) -> Result<Vec<EdgeId>> {
        let mut visible = Vec::new();
        for f in self.g.adjacent_edges(e) {
            log.touch(f);
            if self.alive(f, log) {
                visible.push(f);
            }
        }
        lower_among(self.priorities, e, visible)
    }

    fn priorities(&self) -> &Priorities {
        self.priorities
    }
}

/// Probe budget per endpoint: an endpoint has degree at least `x` iff it
/// has at least `ceil(x) - 1` neighbours besides the other endpoint.
fn probe_budget(x: f64) -> usize {
    if x <= 1.0 {
        0
    } else {
        (x.ceil() - 1.0) as usize
    }
}

/// Whether `e` is in the greedy matching of `g` with every vertex of degree
/// at least `x` deleted, using `priorities` restricted to the surviving
/// edges. Dead edges are rejected after at most `ceil(x) - 1` probes per
/// endpoint.
pub fn thresholded_oracle(
    g: &Graph,
    e: EdgeId,
    x: f64,
    priorities: &Priorities,
    log: &mut QueryLog,
) -> Result<bool> {
    if !g.contains_edge(e) {
        return Err(Error::MissingEdge(e));
    }
    let mut view = Thresholded {
        g,
        priorities,
        budget: probe_budget(x),
        alive: HashMap::new(),
    };
    log.touch(e);
    if !view.alive(e, log) {
        return Ok(false);
    }
    // `run` counts the root again; keep one count per request
    log.count -= 1;
    let _ = view.priorities();
    run(&mut view, e, log)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleKind {
    Greedy,
    Thresholded { x: f64 },
}

/// Query counts over every edge and `n_seeds` priority draws.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryStats {
    pub mean: f64,
    /// Standard error of `mean`.
    pub std_err: f64,
    pub per_edge_mean: BTreeMap<EdgeId, f64>,
    pub samples: usize,
}

/// Mean of `log.count` over all `(edge, seed)` pairs. Seed `s` draws
/// priorities from `derive_seed(base_seed, [s])`.
pub fn mean_query_complexity(
    g: &Graph,
    kind: OracleKind,
    n_seeds: u64,
    base_seed: u64,
) -> Result<QueryStats> {
    if g.m() == 0 {
        return Err(Error::UndefinedInput("query complexity of an edgeless graph".into()));
    }
    if n_seeds == 0 {
        return Err(invalid("need at least one seed"));
    }
    let mut per_edge: BTreeMap<EdgeId, f64> = g.edges().map(|e| (e, 0.0)).collect();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for s in 0..n_seeds {
        let pri = edge_priorities(g, &mut rng_from_seed(derive_seed(base_seed, &[s])));
        for e in g.edges() {
            let mut log = QueryLog::default();
            match kind {
                OracleKind::Greedy => greedy_match_oracle(g, e, &pri, &mut log)?,
                OracleKind::Thresholded { x } => thresholded_oracle(g, e, x, &pri, &mut log)?,
            };
            let c = log.count as f64;
            sum += c;
            sum_sq += c * c;
            *per_edge.get_mut(&e).expect("edge") += c;
        }
    }
    let samples = g.m() * n_seeds as usize;
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    for v in per_edge.values_mut() {
        *v /= n_seeds as f64;
    }
    Ok(QueryStats {
        mean,
        std_err: (var / n).sqrt(),
        per_edge_mean: per_edge,
        samples,
    })
}
