//! Acceptance checks. Each test prints one `PASS`/`FAIL` line and asserts
//! both the property and its time budget. Tests share a lock so the
//! budgets are measured without competing for cores.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use stable_graphs::coloring::{coloring_sensitivity_experiment, two_coloring};
use stable_graphs::harness::{
    estimate_average_sensitivity, exact_average_sensitivity, exact_edge_changes,
    exact_k_average_sensitivity, k_removal_chain_bound, mean_weight_change, mixture_bound,
    output_seed, parallel_mixture, removal_draw, AlgorithmHandle,
};
use stable_graphs::local_oracle::{greedy_match_oracle, mean_query_complexity, OracleKind, QueryLog};
use stable_graphs::matching::{
    greedy_matching, half_matching_weights, is_matching, lex_min_maximum_matching,
    maximum_matching_size, randomized_greedy_matching, stable_half_matching,
    stable_one_minus_eps_matching, thresholded_greedy_matching,
};
use stable_graphs::metrics::{exact_emd, hamming, tv_distance, ExactDistribution, Solution};
use stable_graphs::mincut::{gibbs_cut_oracle, gibbs_sums, min_cut_value, sensitivity_bound, CutSampler};
use stable_graphs::mst::{kruskal, prim};
use stable_graphs::stochastics::{derive_seed, edge_priorities, rng_from_seed, sample_laplace, unit, LaplaceParams};
use stable_graphs::vertexcover::{
    is_vertex_cover, min_vertex_cover_size, stable_vc_sampling, stable_vc_via_matching,
};
use stable_graphs::{edge, generate, EdgeId, Family, Graph};

static SERIAL: Mutex<()> = Mutex::new(());

fn report(id: usize, name: &str, pass: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let within = elapsed < budget;
    let verdict = if pass && within { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {id:>2} {name}: {detail} [{:.2}s of {:.0}s]",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(pass, "criterion {id} {name} failed: {detail}");
    assert!(within, "criterion {id} {name} exceeded its time budget");
}

fn random_graph(seed: u64, n_lo: usize, n_hi: usize) -> Graph {
    let mut rng = rng_from_seed(derive_seed(seed, &[0x6e]));
    let n = n_lo + (unit(&mut rng) * (n_hi - n_lo + 1) as f64) as usize;
    let p = 0.08 + 0.3 * unit(&mut rng);
    generate(&Family::ErdosRenyi { n: n.min(n_hi), p, seed }).unwrap()
}

fn random_weights(g: &Graph, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    Graph::from_weighted_edges(g.n(), g.edges().map(|e| (e.u(), e.v(), unit(&mut rng)))).unwrap()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn kruskal_stability() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let alg = AlgorithmHandle::deterministic("kruskal", kruskal);
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..100 {
        let base = random_graph(seed, 5, 40);
        if base.m() == 0 {
            continue;
        }
        for g in [base.clone(), random_weights(&base, seed + 1000)] {
            checked += 1;
            let forest = kruskal(&g).len() as f64;
            let s = exact_average_sensitivity(&alg, &g).unwrap();
            let worst = exact_edge_changes(&alg, &g).unwrap().iter().map(|p| p.1).max().unwrap();
            if s > 2.0 * forest / g.m() as f64 + 1e-12 || worst > 2 {
                failures.push((seed, s, worst));
            }
        }
    }
    report(
        1,
        "kruskal-stability",
        failures.is_empty(),
        &format!("{checked} graphs, violations {failures:?}"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn prim_lower_bound() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let alg = AlgorithmHandle::deterministic("prim", prim);
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [24, 48, 96] {
        let g = generate(&Family::PrimAdversarial(n)).unwrap();
        let s = exact_average_sensitivity(&alg, &g).unwrap();
        ok &= s >= n as f64 / 6.0 - 1.0;
        let t = prim(&g);
        for i in 0..n / 2 - 2 {
            let te = prim(&g.remove_edge(edge(i, i + 1)).unwrap());
            let replaced = t.as_edges().unwrap().difference(te.as_edges().unwrap()).count();
            ok &= replaced == n / 2 && hamming(&t, &te).unwrap() == n;
        }
        detail.push(format!("n={n}: {s:.3} >= {:.3}", n as f64 / 6.0 - 1.0));
    }
    report(
        2,
        "prim-lower-bound",
        ok,
        &format!("{}; path removals replace n/2 edges", detail.join(", ")),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn lexicographic_matching() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let alg = AlgorithmHandle::deterministic("lexmatch", lex_min_maximum_matching);
    let mut violations = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for seed in 0..100 {
        let g = random_graph(seed + 500, 4, 20);
        if g.m() == 0 {
            continue;
        }
        let mm = maximum_matching_size(&g) as f64;
        assert_eq!(lex_min_maximum_matching(&g).len() as f64, mm);
        let bound = mm * mm / g.m() as f64;
        let s = exact_average_sensitivity(&alg, &g).unwrap();
        worst_ratio = worst_ratio.max(s / bound);
        if s > bound + 1e-12 {
            violations.push(format!("seed {seed}: {s:.3} > {bound:.3}"));
        }
    }
    let mut paths = Vec::new();
    for n in [4, 8, 16] {
        let g = generate(&Family::Path(n)).unwrap();
        let mm = maximum_matching_size(&g) as f64;
        let bound = mm * mm / g.m() as f64;
        let s = exact_average_sensitivity(&alg, &g).unwrap();
        if !(bound / 2.0 - 1e-12 <= s && s <= bound + 1e-12) {
            violations.push(format!("P_{n}: {s:.3} outside [{:.3}, {bound:.3}]", bound / 2.0));
        }
        paths.push(format!("P_{n} {s:.3}/{bound:.3}"));
    }
    report(
        3,
        "lexicographic-matching",
        violations.is_empty(),
        &format!(
            "max sensitivity/(MM^2/m) = {worst_ratio:.3}; {}; violations {violations:?}",
            paths.join(", ")
        ),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// Mean Hamming change of greedy under the priority coupling: the same
/// priorities on `G` and restricted to `G - e`. A coupling bounds EMD.
fn coupled_greedy_change(g: &Graph, draws: usize, seed: u64) -> f64 {
    let mut total = 0.0;
    for i in 0..draws {
        let e = removal_draw(g, seed, i, 1)[0];
        let h = g.remove_edge(e).unwrap();
        let pri = edge_priorities(g, &mut rng_from_seed(output_seed(seed, i, 0, 0)));
        let restricted: BTreeMap<EdgeId, f64> = h.edges().map(|f| (f, pri[&f])).collect();
        let a = randomized_greedy_matching(g, &pri).unwrap();
        let b = randomized_greedy_matching(&h, &restricted).unwrap();
        total += hamming(&a, &b).unwrap() as f64;
    }
    total / draws as f64
}

#[test]
fn greedy_matching_bound() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let alg = AlgorithmHandle::randomized("greedy", |g, s| Ok(greedy_matching(g, s)));
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [10, 50] {
        let g = generate(&Family::Cycle(n)).unwrap();
        let est = estimate_average_sensitivity(&alg, &g, 200, 400, 41).unwrap();
        let q = mean_query_complexity(&g, OracleKind::Greedy, 200, 42).unwrap();
        let est_ok = est.point <= 2.5 + 3.0 * est.half_width();
        let q_ok = q.mean <= 2.5 + 3.0 * q.std_err;
        ok &= est_ok && q_ok;
        detail.push(format!(
            "C_{n}: estimate {:.3} [{:.3}, {:.3}] {}, coupled {:.3}, queries {:.3}±{:.3} {}",
            est.point,
            est.ci_low,
            est.ci_high,
            if est_ok { "ok" } else { "over" },
            coupled_greedy_change(&g, 2000, 43),
            q.mean,
            q.std_err,
            if q_ok { "ok" } else { "over" },
        ));
    }
    let mut graphs = vec![
        generate(&Family::Path(8)).unwrap(),
        generate(&Family::Cycle(12)).unwrap(),
        generate(&Family::Star(9)).unwrap(),
        generate(&Family::Complete(4)).unwrap(),
        generate(&Family::PrimAdversarial(8)).unwrap(),
    ];
    for seed in 0..40 {
        let g = random_graph(seed + 900, 4, 10);
        if g.m() > 0 && g.m() <= 12 {
            graphs.push(g);
        }
    }
    let mut mismatches = 0;
    for g in &graphs {
        for s in 0..200 {
            let pri = edge_priorities(g, &mut rng_from_seed(s));
            let global = randomized_greedy_matching(g, &pri).unwrap();
            let set = global.as_edges().unwrap();
            for e in g.edges() {
                let local = greedy_match_oracle(g, e, &pri, &mut QueryLog::default()).unwrap();
                if local != set.contains(&e) {
                    mismatches += 1;
                }
            }
        }
    }
    ok &= mismatches == 0;
    detail.push(format!("oracle/global mismatches {mismatches} over {} graphs", graphs.len()));
    report(
        4,
        "greedy-matching-bound",
        ok,
        &detail.join("; "),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

/// Truncated Gibbs distribution by direct subset enumeration.
fn truncated_gibbs(g: &Graph, alpha: f64, threshold: f64) -> ExactDistribution {
    let n = g.n();
    let mut entries = Vec::new();
    for mask in 1u64..(1 << n) - 1 {
        let side: BTreeSet<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let cost = g
            .edges()
            .filter(|e| side.contains(&e.u()) != side.contains(&e.v()))
            .count() as f64;
        if cost <= threshold {
            entries.push((Solution::Vertices(side), (-alpha * cost).exp()));
        }
    }
    let total: f64 = entries.iter().map(|e| e.1).sum();
    ExactDistribution::new(entries.into_iter().map(|(s, w)| (s, w / total))).unwrap()
}

#[test]
fn min_cut_distribution() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let eps = 0.5;
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, g) in [
        ("C_4", generate(&Family::Cycle(4)).unwrap()),
        ("C_6", generate(&Family::Cycle(6)).unwrap()),
        ("K_5", generate(&Family::Complete(5)).unwrap()),
    ] {
        let sampler = CutSampler::new(&g, eps, 1).unwrap();
        let alpha = sampler.alpha.unwrap();
        let reference = truncated_gibbs(&g, alpha, sampler.threshold);
        let mut rng = rng_from_seed(derive_seed(5, &[g.n() as u64]));
        let draws = 100_000;
        let mut counts: BTreeMap<Solution, f64> = BTreeMap::new();
        for _ in 0..draws {
            *counts.entry(sampler.sample(&mut rng).solution()).or_default() += 1.0;
        }
        let empirical =
            ExactDistribution::new(counts.into_iter().map(|(s, c)| (s, c / draws as f64))).unwrap();
        let tv = tv_distance(&empirical, &reference).unwrap();
        let sums = gibbs_sums(&g, alpha, sampler.threshold).unwrap();
        let emd = exact_emd(&sampler.distribution().unwrap(), &gibbs_cut_oracle(&g, alpha).unwrap()).unwrap();
        let bound = sums.truncation_bound(g.n());
        // the two computations of the truncation bound must agree
        ok &= tv <= 0.01 && emd <= bound + 1e-12;
        detail.push(format!("{name}: TV {tv:.4}, EMD {emd:.3e} <= {bound:.3e}"));
    }
    let g = generate(&Family::Cycle(6)).unwrap();
    let base = CutSampler::new(&g, eps, 2).unwrap().distribution().unwrap();
    let mut total = 0.0;
    for e in g.edges() {
        let h = g.remove_edge(e).unwrap();
        total += exact_emd(&base, &CutSampler::new(&h, eps, 2).unwrap().distribution().unwrap()).unwrap();
    }
    let sens = total / g.m() as f64;
    let opt = min_cut_value(&g).unwrap();
    let beta = sensitivity_bound(g.n(), g.m(), opt, eps) + 1.0;
    ok &= sens <= beta;
    detail.push(format!("C_6 sensitivity {sens:.3} <= {beta:.1}"));
    report(5, "min-cut-distribution", ok, &detail.join("; "), start.elapsed(), Duration::from_secs(120));
}

#[test]
fn laplace_tails() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (i, (mu, phi, eps)) in [(10.0, 1.0, 0.1), (100.0, 5.0, 0.2), (50.0, 25.0, 0.5)].into_iter().enumerate() {
        let params = LaplaceParams::new(mu, phi).unwrap();
        let mut rng = rng_from_seed(derive_seed(6, &[i as u64]));
        let draws = 1_000_000;
        let cut = (1.0 - eps) * mu;
        let hits = (0..draws).filter(|_| sample_laplace(&params, &mut rng) < cut).count();
        let p = hits as f64 / draws as f64;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        let bound = (-eps * mu / phi).exp() / 2.0;
        ok &= p <= bound + 3.0 * sigma;
        detail.push(format!("({mu},{phi},{eps}): {p:.5} <= {bound:.5}+3*{sigma:.1e}"));
    }
    report(6, "laplace-tails", ok, &detail.join("; "), start.elapsed(), Duration::from_secs(30));
}

#[test]
fn matching_approximation() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let g = generate(&Family::ErdosRenyi { n: 60, p: 0.1, seed: 7 }).unwrap();
    let mm = maximum_matching_size(&g) as f64;
    let mut half = Vec::new();
    let mut third = Vec::new();
    let mut all_valid = true;
    for seed in 0..1000 {
        let a = stable_half_matching(&g, 0.2, seed).unwrap();
        let b = stable_one_minus_eps_matching(&g, 1.0 / 3.0, seed).unwrap();
        all_valid &= is_matching(&g, &a) && is_matching(&g, &b);
        half.push(a.len() as f64);
        third.push(b.len() as f64);
    }
    let (mh, sh) = mean_and_se(&half);
    let (mt, st) = mean_and_se(&third);
    let rho = half_matching_weights(&g, 0.2).unwrap().rho;
    let ok = all_valid && mh >= 0.3 * mm - 3.0 * sh && mt >= 2.0 / 3.0 * mm - 3.0 * st;
    report(
        7,
        "matching-approximation",
        ok,
        &format!(
            "MM {mm}, half-mixture mean {mh:.2} (rho {rho:.4}), (1-eps)-mixture mean {mt:.2}, valid {all_valid}"
        ),
        start.elapsed(),
        Duration::from_secs(180),
    );
}

/// `(MM^2/m, ln g)` computed directly from the definitions.
fn f_and_ln_g(g: &Graph, eps: f64) -> (f64, f64) {
    let mm = maximum_matching_size(g) as f64;
    let (m, n) = (g.m() as f64, g.n() as f64);
    let a = eps / (1.0 - eps) * n.ln();
    let b = (m / (eps * mm)).powi(3);
    (mm * mm / m, (a + b).ln())
}

#[test]
fn lipschitz_claims() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let eps = 0.2;
    let mut graphs = 0;
    let mut violations = Vec::new();
    let mut seed = 0;
    while graphs < 50 {
        seed += 1;
        let g = random_graph(seed + 3000, 12, 40);
        let mm = maximum_matching_size(&g) as f64;
        let m = g.m() as f64;
        if mm < 5.0 || m < 6.0 {
            continue;
        }
        graphs += 1;
        let (f, ln_g) = f_and_ln_g(&g, eps);
        let lib = half_matching_weights(&g, eps).unwrap();
        if (lib.f - f).abs() > 1e-9 * f || (lib.ln_g - ln_g).abs() > 1e-9 * ln_g.abs().max(1.0) {
            violations.push(format!("seed {seed}: weights disagree with the definitions"));
        }
        for e in g.edges() {
            let (fe, ln_ge) = f_and_ln_g(&g.remove_edge(e).unwrap(), eps);
            let tol = 1e-12;
            if fe < f * (1.0 - 2.0 / mm) - tol || fe > f * (1.0 + 1.0 / (m - 1.0)) + tol {
                violations.push(format!("seed {seed} {e}: f"));
            }
            if ln_ge < ln_g + (1.0 - 3.0 / m).ln() - tol || ln_ge > ln_g + (1.0 + 4.0 / (mm - 1.0)).ln() + tol {
                violations.push(format!("seed {seed} {e}: g"));
            }
        }
    }
    report(
        8,
        "lipschitz-claims",
        violations.is_empty(),
        &format!("{graphs} graphs, violations {violations:?}"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn vertex_cover() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut invalid = 0;
    for gs in 0..30 {
        let g = random_graph(gs + 4000, 6, 30);
        for seed in 0..1000 {
            if !is_vertex_cover(&g, &stable_vc_via_matching(&g, 0.2, seed).unwrap()).unwrap() {
                invalid += 1;
            }
            if !is_vertex_cover(&g, &stable_vc_sampling(&g, 0.2, seed).unwrap()).unwrap() {
                invalid += 1;
            }
        }
    }
    let mut ok = invalid == 0;
    let mut detail = vec![format!("invalid covers {invalid}")];
    let mut worst: f64 = 0.0;
    for gs in 0..10 {
        let g = random_graph(gs + 5000, 8, 14);
        if g.m() == 0 {
            continue;
        }
        let opt = min_vertex_cover_size(&g).unwrap() as f64;
        let sizes: Vec<f64> = (0..1000)
            .map(|s| stable_vc_via_matching(&g, 0.2, s).unwrap().len() as f64)
            .collect();
        let (mean, se) = mean_and_se(&sizes);
        ok &= mean <= 2.4 * opt + 3.0 * se;
        worst = worst.max(mean / opt);
    }
    detail.push(format!("worst mean/OPT {worst:.3} vs 2.4"));
    let eps = 0.2;
    let alg = AlgorithmHandle::randomized("vcsample", move |g, s| stable_vc_sampling(g, eps, s));
    for (name, g) in [
        ("C_8", generate(&Family::Cycle(8)).unwrap()),
        ("K_6", generate(&Family::Complete(6)).unwrap()),
    ] {
        let est = estimate_average_sensitivity(&alg, &g, 100, 200, 9).unwrap();
        let bound = 16.0 * (g.n() as f64).powi(2) / (g.m() as f64).powf(1.0 + eps);
        ok &= est.point <= bound + est.half_width();
        detail.push(format!("{name} sensitivity {:.3} <= {bound:.2}", est.point));
    }
    report(9, "vertex-cover", ok, &detail.join("; "), start.elapsed(), Duration::from_secs(180));
}

#[test]
fn two_coloring_lower_bound() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let report_rows = coloring_sensitivity_experiment(&[32, 64, 128, 256]).unwrap();
    let mut ok = report_rows.slope >= 0.2;
    let mut detail = Vec::new();
    for r in &report_rows.rows {
        // independent oracle: the suffix after (i, i+1) is recoloured iff i is even
        let oracle: f64 = (0..r.n - 1).filter(|i| i % 2 == 0).map(|i| (r.n - 1 - i) as f64).sum::<f64>()
            / (r.n - 1) as f64;
        ok &= r.sensitivity >= 0.2 * r.n as f64
            && (r.sensitivity - r.closed_form).abs() <= 1e-9
            && (r.sensitivity - oracle).abs() <= 1e-9;
        detail.push(format!("n={} {:.3}", r.n, r.sensitivity));
    }
    assert_eq!(
        two_coloring(&generate(&Family::Path(4)).unwrap()).unwrap(),
        [0usize, 2].into_iter().collect()
    );
    report(
        10,
        "two-coloring-lower-bound",
        ok,
        &format!("{}; slope {:.4}", detail.join(", "), report_rows.slope),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn composition_checks() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    let kruskal_alg = AlgorithmHandle::deterministic("kruskal", kruskal);
    let lex = AlgorithmHandle::deterministic("lexmatch", lex_min_maximum_matching);
    for (name, g) in [
        ("K_3", generate(&Family::Complete(3)).unwrap()),
        ("P_5", generate(&Family::Path(5)).unwrap()),
        ("C_6", generate(&Family::Cycle(6)).unwrap()),
    ] {
        for alg in [&kruskal_alg, &lex] {
            for k in 1..=3.min(g.m()) {
                let exact = exact_k_average_sensitivity(alg, &g, k).unwrap();
                let bound = k_removal_chain_bound(alg, &g, k).unwrap();
                ok &= exact <= bound + 1e-12;
                if k == 3 {
                    detail.push(format!("{name}/{} k=3 {exact:.3}<={bound:.3}", alg.name()));
                }
            }
        }
    }
    let eps = 0.2;
    let weights = move |g: &Graph| {
        let w = half_matching_weights(g, eps)?;
        Ok(vec![w.rho, 1.0 - w.rho])
    };
    let thr = AlgorithmHandle::randomized("thresholded", move |g, s| thresholded_greedy_matching(g, eps, s));
    let mix = parallel_mixture("stable-half", vec![lex.clone(), thr.clone()], weights).unwrap();
    for (name, g) in [
        ("P_8", generate(&Family::Path(8)).unwrap()),
        ("C_8", generate(&Family::Cycle(8)).unwrap()),
        ("C_12", generate(&Family::Cycle(12)).unwrap()),
    ] {
        // same seed, so both estimates see the same removal draws
        let measured = estimate_average_sensitivity(&mix, &g, 200, 200, 11).unwrap();
        let beta_thr = estimate_average_sensitivity(&thr, &g, 200, 200, 11).unwrap();
        let lex_changes: BTreeMap<EdgeId, usize> = exact_edge_changes(&lex, &g).unwrap().into_iter().collect();
        let rho = weights(&g).unwrap();
        let h = measured.max_weight.max(beta_thr.max_weight).max(lex_min_maximum_matching(&g).len()) as f64;
        let diffs: Vec<f64> = (0..200)
            .map(|i| {
                let e = removal_draw(&g, 11, i, 1)[0];
                let re = weights(&g.remove_edge(e).unwrap()).unwrap();
                let delta: f64 = rho.iter().zip(&re).map(|(a, b)| (a - b).abs()).sum();
                let rhs = mixture_bound(&rho, &[lex_changes[&e] as f64, beta_thr.per_draw[i]], h, delta);
                measured.per_draw[i] - rhs
            })
            .collect();
        let (gap, se) = mean_and_se(&diffs);
        let delta = mean_weight_change(&g, weights).unwrap();
        let rhs_all = mixture_bound(&rho, &[exact_average_sensitivity(&lex, &g).unwrap(), beta_thr.point], h, delta);
        ok &= gap <= 3.0 * se;
        detail.push(format!(
            "{name}: {:.3} vs bound {rhs_all:.3}, paired gap {gap:.3} <= 3*{se:.3} (rho {:.4}, H {h})",
            measured.point, rho[0]
        ));
    }
    report(11, "composition-checks", ok, &detail.join("; "), start.elapsed(), Duration::from_secs(120));
}
