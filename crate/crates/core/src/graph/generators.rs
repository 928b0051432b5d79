//! Deterministic graph families.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use super::{EdgeId, Graph};
use crate::error::{invalid, Result};
use crate::stochastics::{derive_seed, rng_from_seed, unit};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// Vertex 0 is the centre.
    Star(usize),
    /// The lower-bound family for Prim's algorithm with smallest-endpoint
    /// tie breaking. Requires even `n >= 8`.
    PrimAdversarial(usize),
    ErdosRenyi { n: usize, p: f64, seed: u64 },
    /// Uniform `d`-regular graph by the configuration model with rejection.
    RandomRegular { n: usize, d: usize, seed: u64 },
}

pub fn generate(family: &Family) -> Result<Graph> {
    match *family {
        Family::Path(n) => {
            at_least("path", n, 1)?;
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        Family::Cycle(n) => {
            at_least("cycle", n, 3)?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Complete(n) => {
            at_least("complete", n, 1)?;
            Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
        }
        Family::Star(n) => {
            at_least("star", n, 1)?;
            Graph::from_edges(n, (1..n).map(|i| (0, i)))
        }
        Family::PrimAdversarial(n) => prim_adversarial(n),
        Family::ErdosRenyi { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("erdos_renyi needs p in [0, 1], got {p}")));
            }
            let mut rng = rng_from_seed(seed);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if unit(&mut rng) < p {
                        edges.push((a, b));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        Family::RandomRegular { n, d, seed } => random_regular(n, d, seed),
    }
}

fn at_least(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(invalid(format!("{name} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// Built from 1-indexed labels, shifted down by one. With `h = n/2`:
/// a path `1 - 2 - ... - (h-1)`, the edge `(h, 1)`, and both `h-1` and `h`
/// joined to every vertex of `h+1..=n`.
fn prim_adversarial(n: usize) -> Result<Graph> {
    if n < 8 || n % 2 != 0 {
        return Err(invalid(format!("prim_adversarial needs even n >= 8, got {n}")));
    }
    let h = n / 2;
    let mut edges: Vec<(usize, usize)> = (1..=h - 2).map(|i| (i, i + 1)).collect();
    edges.push((h, 1));
    for j in h + 1..=n {
        edges.push((h - 1, j));
        edges.push((h, j));
    }
    let g = Graph::from_edges(n, edges.into_iter().map(|(a, b)| (a - 1, b - 1)))?;
    debug_assert_eq!(g.m(), 3 * n / 2 - 1);
    debug_assert_eq!(g.degree(h - 2), h + 1);
    debug_assert_eq!(g.degree(h - 1), h + 1);
    Ok(g)
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n.max(1) || (n * d) % 2 != 0 {
        return Err(invalid(format!("no simple {d}-regular graph on {n} vertices")));
    }
    for attempt in 0..10_000u64 {
        let mut rng = rng_from_seed(derive_seed(seed, &[attempt]));
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut set = BTreeSet::new();
        let ok = stubs.chunks(2).all(|pair| {
            EdgeId::new(pair[0], pair[1]).is_ok_and(|e| set.insert(e))
        });
        if ok {
            return Graph::from_edges(n, set.into_iter().map(EdgeId::endpoints));
        }
    }
    Err(invalid(format!("could not sample a {d}-regular graph on {n} vertices")))
}
