//! Seeded randomness: stream construction, seed derivation, Laplace draws and
//! edge priorities.
//!
//! Every stream is a [`ChaCha8Rng`] built from a `u64`. Sub-streams for a
//! given edge or replicate are obtained with [`derive_seed`], never by
//! sharing a generator between workers.

use std::collections::BTreeMap;

use rand::distr::Open01;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::{EdgeId, Graph};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable mix of a base seed with a sequence of tags. Platform independent.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix(base), |acc, &t| splitmix(acc.rotate_left(23) ^ splitmix(t)))
}

/// Tag for an edge, for use with [`derive_seed`].
pub fn edge_tag(e: EdgeId) -> u64 {
    ((e.u() as u64) << 32) ^ (e.v() as u64)
}

/// A uniform draw in the open interval (0, 1).
pub fn open01(rng: &mut Rng) -> f64 {
    rng.sample(Open01)
}

/// A uniform draw in [0, 1).
pub fn unit(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

/// Location `mu` and scale `phi` of a Laplace distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceParams {
    mu: f64,
    phi: f64,
}

impl LaplaceParams {
    pub fn new(mu: f64, phi: f64) -> Result<Self> {
        if !(phi > 0.0) || !phi.is_finite() || !mu.is_finite() {
            return Err(invalid(format!("laplace needs finite mu and phi > 0, got ({mu}, {phi})")));
        }
        Ok(LaplaceParams { mu, phi })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.phi;
        if z < 0.0 {
            0.5 * z.exp()
        } else {
            1.0 - 0.5 * (-z).exp()
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        (-(x - self.mu).abs() / self.phi).exp() / (2.0 * self.phi)
    }

    /// Inverse CDF at `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        if u < 0.5 {
            self.mu + self.phi * (2.0 * u).ln()
        } else {
            self.mu - self.phi * (2.0 * (1.0 - u)).ln()
        }
    }
}

/// One Laplace draw; consumes exactly one uniform.
pub fn sample_laplace(params: &LaplaceParams, rng: &mut Rng) -> f64 {
    params.quantile(open01(rng))
}

/// Index `i` with `u` in `[w_0 + ... + w_{i-1}, w_0 + ... + w_i)`. The last
/// index with positive weight absorbs rounding at the top end.
pub fn pick_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Independent uniform priorities, one per edge, drawn in canonical order.
pub fn edge_priorities(g: &Graph, rng: &mut Rng) -> BTreeMap<EdgeId, f64> {
    g.edges().map(|e| (e, unit(rng))).collect()
}

/// Edges sorted by `(priority, EdgeId)`.
pub fn priority_order(priorities: &BTreeMap<EdgeId, f64>) -> Vec<EdgeId> {
    let mut order: Vec<EdgeId> = priorities.keys().copied().collect();
    order.sort_by(|a, b| priorities[a].total_cmp(&priorities[b]).then(a.cmp(b)));
    order
}
