//! Transportation problem with real-valued masses, solved as min-cost flow by
//! successive shortest paths with Johnson potentials.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

struct Arc {
    to: usize,
    cap: f64,
    cost: f64,
}

/// Minimum total cost of shipping `supply` to `demand` with unit costs
/// `cost[i][j] >= 0`. Total supply and demand must agree to within 1e-9
/// (relative).
pub fn min_cost_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<f64> {
    let (na, nb) = (supply.len(), demand.len());
    let total_a: f64 = supply.iter().sum();
    let total_b: f64 = demand.iter().sum();
    let scale = total_a.abs().max(1.0);
    if (total_a - total_b).abs() > 1e-9 * scale {
        return Err(Error::InvalidDistribution(format!(
            "supply {total_a} differs from demand {total_b}"
        )));
    }
    if supply.iter().chain(demand).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution("masses must be finite and >= 0".into()));
    }
    if cost.len() != na || cost.iter().any(|r| r.len() != nb) {
        return Err(Error::Contract("cost matrix shape".into()));
    }
    if na == 0 || nb == 0 {
        return Ok(0.0);
    }

    // nodes: 0 = source, 1..=na, na+1..=na+nb, sink
    let nodes = na + nb + 2;
    let (s, t) = (0, nodes - 1);
    let mut arcs: Vec<Arc> = Vec::with_capacity(2 * (na * nb + na + nb));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut add = |arcs: &mut Vec<Arc>, a: usize, b: usize, cap: f64, c: f64| {
        out[a].push(arcs.len());
        arcs.push(Arc { to: b, cap, cost: c });
        out[b].push(arcs.len());
        arcs.push(Arc { to: a, cap: 0.0, cost: -c });
    };
    for (i, &x) in supply.iter().enumerate() {
        add(&mut arcs, s, 1 + i, x, 0.0);
    }
    for (j, &y) in demand.iter().enumerate() {
        add(&mut arcs, 1 + na + j, t, y, 0.0);
    }
    for i in 0..na {
        for j in 0..nb {
            add(&mut arcs, 1 + i, 1 + na + j, f64::INFINITY, cost[i][j]);
        }
    }

    let target = total_a.min(total_b);
    let mut flow = 0.0;
    let mut total_cost = 0.0;
    let mut potential = vec![0.0f64; nodes];
    let mut dist = vec![0.0f64; nodes];
    let mut prev = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];
    while target - flow > EPS * scale {
        // dense Dijkstra on reduced costs
        dist.fill(f64::INFINITY);
        prev.fill(usize::MAX);
        done.fill(false);
        dist[s] = 0.0;
        loop {
            let mut x = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..nodes {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    x = v;
                }
            }
            if x == usize::MAX {
                break;
            }
            done[x] = true;
            for &a in &out[x] {
                let arc = &arcs[a];
                if arc.cap > EPS * scale {
                    let reduced = (arc.cost + potential[x] - potential[arc.to]).max(0.0);
                    let nd = dist[x] + reduced;
                    if nd < dist[arc.to] {
                        dist[arc.to] = nd;
                        prev[arc.to] = a;
                    }
                }
            }
        }
        if !dist[t].is_finite() {
            break;
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }
        let mut push = target - flow;
        let mut v = t;
        while v != s {
            let a = prev[v];
            push = push.min(arcs[a].cap);
            v = arcs[a ^ 1].to;
        }
        let mut v = t;
        while v != s {
            let a = prev[v];
            arcs[a].cap -= push;
            arcs[a ^ 1].cap += push;
            total_cost += push * arcs[a].cost;
            v = arcs[a ^ 1].to;
        }
        flow += push;
    }
    Ok(total_cost.max(0.0))
}
