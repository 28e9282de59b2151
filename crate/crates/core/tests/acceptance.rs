//! Acceptance suite: one PASS/FAIL line per criterion.

// NaN must fail these comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use expander_cdo::adversary::{
    build_report, search_worst, theoretical_bounds, valuediff_bound, BoundInputs, SearchMode, DEFAULT_BUDGET,
};
use expander_cdo::cdo_model::{
    mc_value, model_to_json, value_profile, AssetModel, DiscreteDist, Scenario, TrancheSpec, ValueProfile,
};
use expander_cdo::expander::{
    biregularize, derive_guv_params, verify_expansion, BipartiteGraph, ExpansionCertificate, VerifyMode,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took <= limit, "{what} took {took:?}, limit {limit:?}");
    Ok(())
}

fn toy() -> (BipartiteGraph, ExpansionCertificate) {
    let (p, c) = derive_guv_params(0.5, 16, 16, 4).unwrap();
    (p.build_graph(16).unwrap(), c)
}

fn toy_model() -> AssetModel<f64> {
    AssetModel::single(DiscreteDist::bernoulli(0.5).unwrap(), DiscreteDist::point(0.0).unwrap()).unwrap()
}

// ---------- criterion 1 ----------

/// GF(4) as a lookup table; elements 0, 1, w, w+1 encoded 0..4.
const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

fn gf4_eval(p: &[u8], y: u8) -> u8 {
    p.iter().rev().fold(0, |acc, &c| GF4_MUL[acc as usize][y as usize] ^ c)
}

/// Remainder of `a` modulo monic `e`, both lowest coefficient first.
fn gf4_rem(a: &[u8], e: &[u8]) -> Vec<u8> {
    let mut a = a.to_vec();
    let de = e.len() - 1;
    while a.len() > de {
        let lead = a.pop().unwrap();
        let shift = a.len() - de;
        for (i, &c) in e[..de].iter().enumerate() {
            a[shift + i] ^= GF4_MUL[lead as usize][c as usize];
        }
    }
    a
}

fn gf4_mul_poly(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= GF4_MUL[x as usize][y as usize];
        }
    }
    out
}

/// Independent neighbor map for q=4, n_q=m_q=3, h=2.
fn brute_neighbors_q4() -> Vec<Vec<u32>> {
    // first monic cubic (lowest coefficient as least significant digit) with no root
    let e: Vec<u8> = (0..64u32)
        .map(|idx| vec![(idx % 4) as u8, (idx / 4 % 4) as u8, (idx / 16) as u8, 1])
        .find(|e| (0..4).all(|y| gf4_eval(e, y) != 0))
        .unwrap();
    (0..64u32)
        .map(|u| {
            let f = vec![(u % 4) as u8, (u / 4 % 4) as u8, (u / 16) as u8];
            let f0 = gf4_rem(&f, &e);
            let f1 = gf4_rem(&gf4_mul_poly(&f0, &f0), &e);
            let mut nb: Vec<u32> =
                (0..4u8).map(|y| u32::from(y) * 16 + u32::from(gf4_eval(&f0, y)) * 4 + u32::from(gf4_eval(&f1, y))).collect();
            nb.sort_unstable();
            nb
        })
        .collect()
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let (g, c) = toy();
    ensure!((c.q, c.h, c.delta, c.k_max_thm) == (4, 2, 1, 2), "toy certificate {c}");
    let nb = verify_expansion(&g, 2, 3, VerifyMode::Neighbor).unwrap();
    let un = verify_expansion(&g, 2, 2, VerifyMode::Unique).unwrap();
    ensure!(nb.passed, "neighbor expansion failed at {:?}", nb.worst_subset);
    ensure!(un.passed, "unique expansion failed at {:?}", un.worst_subset);
    within(Duration::from_secs(1), start, "toy verification")?;

    let (p, c3) = derive_guv_params(0.5, 64, 64, 4).unwrap();
    ensure!((c3.q, c3.h, c3.n_q, c3.m_q, c3.delta) == (4, 2, 3, 3, 4), "second instance certificate {c3}");
    ensure!(c3.vacuous && c3.gamma == 0, "expected vacuous flag with gamma 0, got {c3}");
    let g3 = p.build_graph(64).unwrap();
    let brute = brute_neighbors_q4();
    ensure!(g3.adjacency() == brute.as_slice(), "m_q=3 instance differs from brute-force map");
    Ok(format!(
        "toy: {} + {} subsets in {:?}; m_q=3 instance matches brute force on {} edges, vacuous={}",
        nb.subsets_checked,
        un.subsets_checked,
        start.elapsed(),
        g3.edge_count(),
        c3.vacuous
    ))
}

// ---------- criterion 2 ----------

fn random_left_regular(rng: &mut ChaCha8Rng, n: usize, m0: usize, d0: usize) -> BipartiteGraph {
    let rights: Vec<u32> = (0..m0 as u32).collect();
    let adjacency = (0..n).map(|_| rights.choose_multiple(rng, d0).copied().collect()).collect();
    BipartiteGraph::new(m0, adjacency).unwrap()
}

fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut built, mut attempts, mut infeasible) = (0, 0, 0);
    while built < 120 {
        attempts += 1;
        ensure!(attempts < 10_000, "could not find enough feasible parameter sets");
        let n: usize = rng.random_range(4..=50);
        let d0: usize = rng.random_range(1..=3);
        let m0 = rng.random_range(d0 + 1..=10);
        let d = rng.random_range(d0 + 1..=m0.min(d0 + 4));
        let m_min = (m0 * d).div_ceil(d - d0);
        let options: Vec<(usize, usize)> =
            (m_min..=n * d).filter(|&m| (n * d).is_multiple_of(m)).map(|m| (m, n * d / m)).collect();
        let Some(&(m, r)) = options.get(rng.random_range(0..options.len().max(1))) else { continue };
        let g = random_left_regular(&mut rng, n, m0, d0);
        let out = match biregularize(&g, m, d, r) {
            Ok(o) => o,
            Err(_) => {
                infeasible += 1;
                continue;
            }
        };
        ensure!(out.is_biregular(d, r), "n={n} m={m} d={d} r={r}: not biregular");
        ensure!(n * d == m * r && out.edge_count() == n * d, "edge count mismatch");
        let k = if n <= 30 { 3 } else { 2 };
        let before = verify_expansion(&g, k, 0, VerifyMode::Neighbor).unwrap();
        let after = verify_expansion(&out, k, 0, VerifyMode::Neighbor).unwrap();
        ensure!(
            after.worst_ratio >= before.worst_ratio,
            "expansion dropped from {} to {} (n={n} m={m} d={d} r={r})",
            before.worst_ratio,
            after.worst_ratio
        );
        built += 1;
    }
    within(Duration::from_secs(30), start, "biregularization sweep")?;
    Ok(format!("{built} random instances biregular with expansion kept ({infeasible} rejected as infeasible) in {:?}", start.elapsed()))
}

// ---------- criteria 3, 4 ----------

fn random_dist(rng: &mut ChaCha8Rng, max_support: usize) -> DiscreteDist<f64> {
    let k = rng.random_range(1..=max_support);
    let mut pts: Vec<u32> = (0..=20).collect();
    pts.shuffle(rng);
    let mut pts = pts[..k].to_vec();
    pts.sort_unstable();
    let w: Vec<f64> = (0..k).map(|_| f64::from(rng.random_range(1u32..10))).collect();
    let total: f64 = w.iter().sum();
    DiscreteDist::new(pts.iter().map(|&p| f64::from(p) / 20.0).collect(), w.iter().map(|x| x / total).collect()).unwrap()
}

/// Good with probability `1 - p` and payoff 0 otherwise: dominated by `good`.
fn thinned(good: &DiscreteDist<f64>, p: f64) -> DiscreteDist<f64> {
    let mut support = good.support().to_vec();
    let mut probs: Vec<f64> = good.probs().iter().map(|q| q * (1.0 - p)).collect();
    if support[0] == 0.0 {
        probs[0] += p;
    } else {
        support.insert(0, 0.0);
        probs.insert(0, p);
    }
    let total: f64 = probs.iter().sum();
    DiscreteDist::new(support, probs.iter().map(|q| q / total).collect()).unwrap()
}

fn random_model(rng: &mut ChaCha8Rng, dominated: bool) -> AssetModel<f64> {
    let k = rng.random_range(1..=3);
    let w: Vec<f64> = (0..k).map(|_| f64::from(rng.random_range(1u32..5))).collect();
    let total: f64 = w.iter().sum();
    let scenarios = w
        .iter()
        .map(|&wi| {
            if dominated {
                let good = random_dist(rng, 3);
                let lemon = thinned(&good, rng.random_range(0.1..0.9));
                Scenario { weight: wi / total, good, lemon }
            } else {
                Scenario { weight: wi / total, good: random_dist(rng, 4), lemon: random_dist(rng, 4) }
            }
        })
        .collect();
    AssetModel::new(scenarios).unwrap()
}

fn random_tranches(rng: &mut ChaCha8Rng, r: usize) -> TrancheSpec<f64> {
    let s = rng.random_range(1..=r.min(4));
    let mut cuts: Vec<f64> = (1..4 * r).map(|c| c as f64 / 4.0).collect();
    cuts.shuffle(rng);
    let mut pts = cuts[..s - 1].to_vec();
    pts.push(0.0);
    pts.push(r as f64);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    TrancheSpec::new(pts).unwrap()
}

fn check_identities(m: &AssetModel<f64>, p: &ValueProfile<f64>) -> Result<(), String> {
    let r = p.r;
    for g in 0..=r {
        let row: f64 = p.values[g].iter().sum();
        let want = r as f64 * m.lambda + g as f64 * m.delta;
        ensure!((row - want).abs() <= 1e-9, "conservation g={g}: {row} vs {want}");
        for i in 0..=r - g {
            for tr in 0..p.tranche_count() {
                let step = p.values[g + i][tr] - p.values[g][tr];
                if m.dominated {
                    ensure!(step >= -1e-9, "not monotone g={g} i={i} tranche {tr}: {step}");
                    ensure!(step <= i as f64 * m.delta + 1e-9, "sandwich g={g} i={i} tranche {tr}: {step}");
                }
                if m.mu >= m.lambda {
                    ensure!(step.abs() <= i as f64 * m.mu + 1e-9, "general bound g={g} i={i} tranche {tr}: {step}");
                }
            }
        }
    }
    Ok(())
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut dom, mut general, mut total) = (0, 0, 0);
    while total < 60 || general < 20 {
        let model = random_model(&mut rng, total % 2 == 0);
        let r = rng.random_range(1..=8);
        let t = random_tranches(&mut rng, r);
        let p = value_profile(&model, &t, r).map_err(|e| e.to_string())?;
        check_identities(&model, &p)?;
        total += 1;
        dom += usize::from(model.dominated);
        general += usize::from(!model.dominated && model.mu >= model.lambda);
    }
    within(Duration::from_secs(10), start, "value identities")?;
    Ok(format!("{total} models ({dom} dominated, {general} non-dominated with mu >= lambda) in {:?}", start.elapsed()))
}

fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for k in 0..10 {
        let model = random_model(&mut rng, k % 2 == 0);
        let r = rng.random_range(1..=6);
        let g = rng.random_range(0..=r);
        let t = random_tranches(&mut rng, r);
        let exact = value_profile(&model, &t, r).unwrap();
        let seed = 1000 + k;
        let est = mc_value(&model, &t, r, g, seed, 100_000).unwrap();
        for (i, (&mean, &se)) in est.means.iter().zip(&est.std_errors).enumerate() {
            let dev = (mean - exact.values[g][i]).abs();
            ensure!(dev <= 3.0 * se + 1e-12, "model {k} tranche {i}: |{mean} - {}| > 3 * {se}", exact.values[g][i]);
            if se > 0.0 {
                worst = worst.max(dev / se);
            }
        }
        let again = mc_value(&model, &t, r, g, seed, 100_000).unwrap();
        ensure!(
            again.means.iter().zip(&est.means).all(|(a, b)| a.to_bits() == b.to_bits()),
            "seeded rerun differs for model {k}"
        );
    }
    Ok(format!("10 models within 3 SE (largest deviation {worst:.2} SE), reruns bit-identical"))
}

// ---------- criteria 5, 6, 7 ----------

fn inputs_for(g: &BipartiteGraph, c: &ExpansionCertificate, model: &AssetModel<f64>, t: &TrancheSpec<f64>, ell: usize) -> BoundInputs<f64> {
    BoundInputs {
        d: g.left_degree().unwrap(),
        r: g.right_degree().unwrap(),
        m: g.m(),
        ell,
        delta_cert: c.delta,
        delta_explicit: expander_cdo::expander::explicit_delta(c.alpha, g.n(), g.m(), g.left_degree().unwrap()),
        k_max: c.k_max_thm as usize,
        mu: model.mu,
        delta: model.delta,
        dominated: model.dominated,
        tranches: t.clone(),
    }
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let (g, c) = toy();
    let model = toy_model();
    let t = TrancheSpec::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
    let p = value_profile(&model, &t, 4).unwrap();
    let mut lines = Vec::new();
    for ell in [1usize, 2] {
        let a = search_worst(&g, &p, ell, SearchMode::Exhaustive, DEFAULT_BUDGET, 0).unwrap();
        ensure!(a.exhaustive && a.placements_examined == [16, 120][ell - 1], "not exhaustive");
        let rep = build_report(&a, &inputs_for(&g, &c, &model, &t, ell), &g, &p).unwrap();
        ensure!(rep.applicability.unique, "unique bound not applicable at ell={ell}");
        ensure!(rep.bounds.unique_tranche == ell as f64, "2 Delta ell delta = {}", rep.bounds.unique_tranche);
        ensure!(rep.bounds.unique_l1 == 1.5 * ell as f64, "3 Delta ell delta = {}", rep.bounds.unique_l1);
        let vd = rep.bounds.valuediff.clone().unwrap();
        for (i, (&gap, &v)) in a.gap_per_tranche.iter().zip(&vd).enumerate() {
            ensure!(gap <= v + 1e-9, "ell={ell} tranche {i}: gap {gap} > valuediff {v}");
            ensure!(v <= rep.bounds.unique_tranche + 1e-9, "ell={ell} tranche {i}: valuediff {v} > {}", rep.bounds.unique_tranche);
        }
        // the lemma also holds against every placement's own histogram
        for (i, l) in a.l_min.iter().enumerate() {
            let counts = g.neighbor_counts(l).unwrap();
            let v = valuediff_bound(&counts, &p, c.delta, ell, i).unwrap();
            ensure!(v.dominated && v.value == vd[i], "valuediff recomputation differs");
        }
        ensure!(a.gap_l1 <= rep.bounds.unique_l1 + 1e-9, "ell={ell}: L1 gap {} > {}", a.gap_l1, rep.bounds.unique_l1);
        ensure!(rep.passed(), "violations: {:?}", rep.violations);
        let max_gap = a.gap_per_tranche.iter().copied().fold(0.0, f64::max);
        lines.push(format!("ell={ell}: max gap {max_gap:.4} <= {ell}, L1 {:.4} <= {}", a.gap_l1, 1.5 * ell as f64));
    }
    within(Duration::from_secs(60), start, "dominated bound check")?;
    Ok(lines.join("; "))
}

fn criterion_6() -> Result<String, String> {
    let start = Instant::now();
    let (g, c) = toy();
    let model = AssetModel::single(DiscreteDist::point(0.5).unwrap(), DiscreteDist::bernoulli(0.4).unwrap()).unwrap();
    ensure!(!model.dominated, "model should not be dominated");
    let t = TrancheSpec::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
    let p = value_profile(&model, &t, 4).unwrap();
    let mut lines = Vec::new();
    for ell in [1usize, 2] {
        let a = search_worst(&g, &p, ell, SearchMode::Exhaustive, DEFAULT_BUDGET, 0).unwrap();
        let rep = build_report(&a, &inputs_for(&g, &c, &model, &t, ell), &g, &p).unwrap();
        ensure!(rep.applicability.general && !rep.applicability.unique, "applicability {:?}", rep.applicability);
        ensure!(rep.bounds.general_tranche == ell as f64, "2 Delta ell mu = {}", rep.bounds.general_tranche);
        for (i, &gap) in a.gap_per_tranche.iter().enumerate() {
            ensure!(gap <= ell as f64 + 1e-9, "ell={ell} tranche {i}: gap {gap} > {ell}");
        }
        ensure!(rep.passed(), "violations: {:?}", rep.violations);
        let max_gap = a.gap_per_tranche.iter().copied().fold(0.0, f64::max);
        lines.push(format!("ell={ell}: max gap {max_gap:.4} <= {ell}"));
    }
    within(Duration::from_secs(60), start, "general-asset bound check")?;
    Ok(lines.join("; "))
}

/// Random `(d, r)`-biregular graph from a shuffled stub matching, retried
/// until simple.
fn random_biregular(rng: &mut ChaCha8Rng, n: usize, d: usize, r: usize) -> BipartiteGraph {
    let m = n * d / r;
    loop {
        let mut stubs: Vec<u32> = (0..m as u32).flat_map(|v| std::iter::repeat_n(v, r)).collect();
        stubs.shuffle(rng);
        let adjacency: Vec<Vec<u32>> = stubs.chunks(d).map(|c| c.to_vec()).collect();
        if let Ok(g) = BipartiteGraph::new(m, adjacency) {
            return g;
        }
    }
}

/// Disjoint copies of `K_{d,d}`: as far from an expander as biregular gets.
fn complete_blocks(blocks: usize, d: usize) -> BipartiteGraph {
    let adjacency = (0..blocks * d).map(|u| ((u / d * d) as u32..((u / d + 1) * d) as u32).collect()).collect();
    BipartiteGraph::new(blocks * d, adjacency).unwrap()
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graphs = vec![complete_blocks(4, 2), complete_blocks(3, 3), complete_blocks(2, 4)];
    while graphs.len() < 24 {
        let d = rng.random_range(2..=4);
        let r = rng.random_range(2..=4);
        let n = r * rng.random_range(2..=4);
        graphs.push(random_biregular(&mut rng, n, d, r));
    }
    let mut checked = 0;
    for (k, g) in graphs.iter().enumerate() {
        let (d, r) = (g.left_degree().unwrap(), g.right_degree().unwrap());
        let model = random_model(&mut rng, true);
        let t = random_tranches(&mut rng, r);
        let p = value_profile(&model, &t, r).unwrap();
        for ell in 1..=3.min(g.n()) {
            let a = search_worst(g, &p, ell, SearchMode::Exhaustive, DEFAULT_BUDGET, 0).unwrap();
            let bound = (d * ell) as f64 * model.delta;
            for (i, &gap) in a.gap_per_tranche.iter().enumerate() {
                ensure!(gap <= bound + 1e-9, "graph {k} ell={ell} tranche {i}: gap {gap} > d ell delta = {bound}");
            }
            checked += 1;
        }
    }
    Ok(format!("{} graphs ({checked} graph/ell pairs), every gap within d*ell*delta", graphs.len()))
}

// ---------- criterion 8 ----------

fn criterion_8() -> Result<String, String> {
    let mk = |ell, dominated, delta| BoundInputs {
        d: 4,
        r: 4,
        m: 16,
        ell,
        delta_cert: 1,
        delta_explicit: 1.0,
        k_max: 2,
        mu: 0.5,
        delta,
        dominated,
        tranches: TrancheSpec::unit(4),
    };
    let b = theoretical_bounds(&mk(2, true, 0.5));
    ensure!(b.trivial_tranche == 4.0 && b.eps_trivial[0] == 0.25, "trivial {} / {}", b.trivial_tranche, b.eps_trivial[0]);
    ensure!(b.unique_tranche == 2.0 && b.eps_unique[0] == 0.125, "unique {} / {}", b.unique_tranche, b.eps_unique[0]);
    ensure!(b.unique_l1 == 3.0 && b.eps_unique_l1 == 3.0 / 64.0, "L1 {} / {}", b.unique_l1, b.eps_unique_l1);
    let z = theoretical_bounds(&mk(0, true, 0.5));
    ensure!(z.trivial_tranche == 0.0 && z.unique_tranche == 0.0 && z.unique_l1 == 0.0 && z.general_tranche == 0.0, "ell=0 not zero");
    let gen = theoretical_bounds(&mk(2, false, 0.1));
    ensure!(gen.general_tranche == 2.0 && gen.eps_general[0] == 0.125, "general {}", gen.general_tranche);
    ensure!(gen.applicability.general && !gen.applicability.unique && !gen.applicability.trivial, "flags {:?}", gen.applicability);
    Ok("trivial 4.0 (0.25), unique 2.0 (0.125), L1 3.0 (0.046875), general 2.0 (0.125)".into())
}

// ---------- criterion 9 ----------

fn cli(dir: &Path, threads: usize, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_expander-cdo"))
        .current_dir(dir)
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    Ok(())
}

fn criterion_9() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    std::fs::write(d.join("model.json"), model_to_json(&toy_model())).unwrap();
    std::fs::write(d.join("tranches.txt"), "0 1 2 3 4\n").unwrap();
    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for threads in [1usize, 2, 8] {
        let tag = threads.to_string();
        let g = format!("g{tag}.txt");
        cli(d, threads, &["construct", "--alpha", "0.5", "--n", "16", "--m", "16", "--d", "4", "--r", "4", "--mode", "direct", "--out", &g])?;
        let b = format!("b{tag}.txt");
        cli(d, threads, &["construct", "--alpha", "0.5", "--n", "12", "--m", "24", "--d", "4", "--r", "2", "--out", &b])?;
        let common = ["--graph", "g1.txt", "--model", "model.json", "--tranches", "tranches.txt"];
        let ex = format!("ex{tag}.json");
        let rnd = format!("rnd{tag}.json");
        let gr = format!("gr{tag}.json");
        cli(d, threads, &[&["attack"][..], &common, &["--ell", "3", "--mode", "exhaustive", "--out", &ex]].concat())?;
        cli(d, threads, &[&["attack"][..], &common, &["--ell", "3", "--mode", "random", "--budget", "20000", "--seed", "5", "--out", &rnd]].concat())?;
        cli(d, threads, &[&["attack"][..], &common, &["--ell", "3", "--mode", "greedy", "--out", &gr]].concat())?;
        let rep = format!("rep{tag}.json");
        let csv = format!("rep{tag}.csv");
        cli(d, threads, &[&["report"][..], &common, &["--cert", "g1.txt.cert", "--attack", &ex, "--out", &rep, "--csv", &csv]].concat())
            .or_else(|e| if e.contains("exited Some(1)") { Ok(()) } else { Err(e) })?;
        let files = [g.clone(), format!("{g}.cert"), b.clone(), format!("{b}.cert"), ex, rnd, gr, rep, csv];
        outputs.push(files.iter().map(|f| std::fs::read(d.join(f)).unwrap()).collect());
    }
    for (i, o) in outputs.iter().enumerate().skip(1) {
        ensure!(o == &outputs[0], "outputs differ between thread counts (run {i})");
    }
    let bytes: usize = outputs[0].iter().map(Vec::len).sum();
    Ok(format!("9 canonical files ({bytes} bytes) byte-identical at --threads 1, 2, 8"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 9] = [
        ("1 expander correctness", criterion_1),
        ("2 biregularization", criterion_2),
        ("3 value identities", criterion_3),
        ("4 monte carlo oracle", criterion_4),
        ("5 dominated bounds", criterion_5),
        ("6 general-asset bounds", criterion_6),
        ("7 trivial bound", criterion_7),
        ("8 formula regression", criterion_8),
        ("9 determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
