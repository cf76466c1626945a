//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chainlattice::containers::{container_stats, max_comparable_degree};
use chainlattice::dump::read_chain_dump;
use chainlattice::extremal::{
    boolean_algebra, comparable_pair, corner, ex_oracle, grid_partition, subgrid_sampling_check,
    verify_grid_partition, AffineConfiguration, Ambient, Grid,
};
use chainlattice::lattice::{
    comparability_edge_count, lubell_mass_masks, uniformity_stats, verify_chain_decomposition,
    ChainDecomposition, Ground,
};
use chainlattice::matching::{lym_check, min_chain_partition};
use chainlattice::numerics::{appendix_table_check, binomial_estimate_check};
use chainlattice::pipeline::run_pipeline;
use chainlattice::sperner::{build_sperner_graph, certify_alpha};
use chainlattice::subset::{binom, is_subset, level, middle_binom};
use chainlattice::symmetric::symmetric_decomposition;
use chainlattice::Method;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

/// Chain sizes in descending order.
fn sizes(d: &ChainDecomposition) -> Vec<usize> {
    let mut s: Vec<usize> = d.chains.iter().map(|c| c.len()).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Symmetric chain sizes computed from binomials: `binom(n,k) -
/// binom(n,k-1)` chains of size `n - 2k + 1`.
fn sigma(n: u32) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 0..=n / 2 {
        let count = binom(n, k) - if k > 0 { binom(n, k - 1) } else { 0 };
        out.extend(std::iter::repeat_n(
            (n - 2 * k + 1) as usize,
            count as usize,
        ));
    }
    out
}

fn prefix_dominated(candidate: &[usize], reference: &[usize]) -> bool {
    let (mut c, mut r) = (0usize, 0usize);
    for i in 0..candidate.len().max(reference.len()) {
        c += candidate.get(i).copied().unwrap_or(0);
        r += reference.get(i).copied().unwrap_or(0);
        if r < c {
            return false;
        }
    }
    c == r
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v[v.len() / 2]
}

fn run_cli(args: &[&str]) -> (i32, Duration) {
    let t = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_chainlattice"))
        .args(args)
        .status()
        .expect("binary runs");
    (status.code().unwrap_or(-1), t.elapsed())
}

fn load_dump(path: &Path) -> ChainDecomposition {
    read_chain_dump(
        BufReader::new(File::open(path).expect("dump exists")),
        Ground::Full,
    )
    .expect("dump parses")
}

/// Largest antichain as a maximum independent set of the comparability
/// graph, branching on the lowest remaining vertex.
fn brute_force_width(family: &[u64]) -> usize {
    let k = family.len();
    let mut comparable = vec![0u32; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && (is_subset(family[i], family[j]) || is_subset(family[j], family[i])) {
                comparable[i] |= 1 << j;
            }
        }
    }
    fn mis(cand: u32, comparable: &[u32]) -> usize {
        if cand == 0 {
            return 0;
        }
        let v = cand.trailing_zeros() as usize;
        let rest = cand & !(1 << v);
        let with = 1 + mis(rest & !comparable[v], comparable);
        if comparable[v] & rest == 0 {
            return with;
        }
        with.max(mis(rest, comparable))
    }
    mis(((1u64 << k) - 1) as u32, &comparable)
}

fn criterion1(runs: &mut Vec<ChainDecomposition>) -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut cases: Vec<(u32, u64, u64)> = Vec::new();
    for n in [6u32, 8, 10, 12, 14, 16] {
        for seed in 0..3u64 {
            cases.push((n, seed, 30));
        }
    }
    cases.push((20, 0, 600));
    for (n, seed, limit) in cases {
        let dump = dir.path().join(format!("d{n}_{seed}.txt"));
        let json = dir.path().join(format!("d{n}_{seed}.json"));
        let (code, took) = run_cli(&[
            "decompose",
            "--method",
            "uniform",
            "--n",
            &n.to_string(),
            "--seed",
            &seed.to_string(),
            "--chains",
            dump.to_str().unwrap(),
            "--out",
            json.to_str().unwrap(),
        ]);
        slowest = slowest.max(took);
        if code != 0 {
            failures.push(format!("n={n} seed={seed}: exit {code}"));
            continue;
        }
        let d = load_dump(&dump);
        let report = verify_chain_decomposition(&d);
        if !report.passed || d.num_chains() as u128 != middle_binom(n) {
            failures.push(format!("n={n} seed={seed}: {:?}", report.problems));
        }
        if took > Duration::from_secs(limit) {
            failures.push(format!("n={n} seed={seed}: {took:?} > {limit}s"));
        }
        runs.push(d);
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "19 runs, slowest {:.2}s {}",
            slowest.as_secs_f64(),
            failures.join("; ")
        ),
    )
}

fn criterion2(runs: &mut Vec<ChainDecomposition>) -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=20 {
        let d = symmetric_decomposition(n).expect("n <= 20");
        if sizes(&d) != sigma(n) || !verify_chain_decomposition(&d).passed {
            bad.push(n);
        }
        runs.push(d);
    }
    Verdict::new(bad.is_empty(), format!("n = 1..20, mismatches at {bad:?}"))
}

fn criterion3(runs: &[ChainDecomposition]) -> Verdict {
    let bad: Vec<u32> = runs
        .iter()
        .filter(|d| !prefix_dominated(&sizes(d), &sigma(d.n)))
        .map(|d| d.n)
        .collect();
    Verdict::new(
        bad.is_empty(),
        format!("{} profiles, failing n {bad:?}", runs.len()),
    )
}

fn criterion4() -> Verdict {
    let mut problems = Vec::new();
    for n in 1..=16u32 {
        let mut decs = vec![symmetric_decomposition(n).unwrap()];
        if n >= 6 {
            decs.push(run_pipeline(n, 0).unwrap().0);
        }
        for d in decs {
            let g = build_sperner_graph(&d).unwrap();
            let cert = certify_alpha(&g);
            if !cert.certified() || cert.alpha != middle_binom(n) {
                problems.push(format!("alpha n={n}"));
            }
            // Turán: |E| >= |V|^2 / (2 alpha) - |V| / 2, in integers.
            let edges: u128 = d.chains.iter().map(|c| binom(c.len() as u32, 2)).sum();
            let (v, m) = (1u128 << n, middle_binom(n));
            if edges != g.num_edges || 2 * m * edges + v * m < v * v {
                problems.push(format!("turan n={n}"));
            }
        }
    }
    for n in 1..=12u32 {
        if comparability_edge_count(n).unwrap() != 3u128.pow(n) - 2u128.pow(n) {
            problems.push(format!("B_n edges n={n}"));
        }
    }
    let mut trend = Vec::new();
    for n in [12u32, 14, 16, 18, 20] {
        let vals = (0..3u64)
            .map(|seed| {
                let d = run_pipeline(n, seed).unwrap().0;
                let e: u128 = d.chains.iter().map(|c| binom(c.len() as u32, 2)).sum();
                e as f64 / ((1u128 << n) as f64 * (n as f64).sqrt())
            })
            .collect();
        trend.push(median(vals));
    }
    let decreasing = trend.windows(2).all(|w| w[1] < w[0]);
    let last = *trend.last().unwrap();
    if !decreasing {
        problems.push("normalized edges not strictly decreasing".into());
    }
    if !(0.55..=1.2).contains(&last) {
        problems.push(format!(
            "n=20 normalized edges {last:.4} outside [0.55, 1.2]"
        ));
    }
    let shown: Vec<String> = trend.iter().map(|x| format!("{x:.4}")).collect();
    Verdict::new(
        problems.is_empty(),
        format!(
            "normalized |E| n=12..20: [{}] {}",
            shown.join(", "),
            problems.join("; ")
        ),
    )
}

fn criterion5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=24);
        let family: Vec<u64> = sample(&mut rng, 1 << 10, size)
            .into_iter()
            .map(|x| x as u64)
            .collect();
        let chains = min_chain_partition(&family, 10).unwrap();
        let d = ChainDecomposition::new(10, Ground::explicit(family.clone()), chains);
        if !verify_chain_decomposition(&d).passed || d.num_chains() != brute_force_width(&family) {
            bad += 1;
        }
    }
    Verdict::new(bad == 0, format!("200 families, {bad} disagreements"))
}

/// `ex` of `z = x ∨ y` over `[k]^2` by trying all `2^(k^2)` families.
fn corner_brute_force(k: usize) -> u64 {
    let coords = |p: usize| (p % k, p / k);
    let mut forbidden = Vec::new();
    for x in 0..k * k {
        for y in x + 1..k * k {
            let (a, b) = (coords(x), coords(y));
            if (a.0 <= b.0 && a.1 <= b.1) || (b.0 <= a.0 && b.1 <= a.1) {
                continue;
            }
            let z = a.0.max(b.0) + k * a.1.max(b.1);
            forbidden.push((1u32 << x) | (1 << y) | (1 << z));
        }
    }
    (0u32..1 << (k * k))
        .filter(|&h| forbidden.iter().all(|&f| h & f != f))
        .map(|h| h.count_ones() as u64)
        .max()
        .unwrap()
}

/// Every sorted shape `k_1 <= ... <= k_d` with at most 36 points, d <= 3.
fn small_shapes() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 1..=36u32 {
        out.push(vec![a]);
        for b in a..=36 / a {
            out.push(vec![a, b]);
            for c in b..=36 / (a * b) {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn criterion6() -> Verdict {
    let mut problems = Vec::new();
    for k in 1..=10 {
        let v = ex_oracle(
            &Ambient::Grid(Grid::cube(k, 1).unwrap()),
            &comparable_pair(),
        )
        .unwrap()
        .value;
        if v != 1 {
            problems.push(format!("ex({k},1,comparable) = {v}"));
        }
    }
    let mut corners = Vec::new();
    for k in 2..=4u32 {
        let v = ex_oracle(&Ambient::Grid(Grid::cube(k, 2).unwrap()), &corner())
            .unwrap()
            .value;
        corners.push(v);
        if v != corner_brute_force(k as usize) || v > 2 * k as u64 {
            problems.push(format!("ex({k},2,corner) = {v}"));
        }
    }
    let configs: [(&str, AffineConfiguration); 3] = [
        ("comparable", comparable_pair()),
        ("corner", corner()),
        ("boolean2", boolean_algebra(2).unwrap()),
    ];
    let shapes = small_shapes();
    let mut pairs = 0;
    for (name, c) in &configs {
        let mut ex: HashMap<Vec<u32>, u64> = HashMap::new();
        for s in &shapes {
            let v = ex_oracle(&Ambient::Grid(Grid::new(s.clone()).unwrap()), c)
                .unwrap()
                .value;
            ex.insert(s.clone(), v);
        }
        for s in &shapes {
            let d = s.len() as u32;
            let size: u64 = s.iter().map(|&x| x as u64).product();
            for k in 1..=s[0] {
                let kd = (k as u64).pow(d);
                if kd > 36 {
                    continue;
                }
                pairs += 1;
                let cube = ex[&vec![k; d as usize]];
                if ex[s] * kd > cube * size {
                    problems.push(format!("{name} {s:?} k={k}"));
                }
            }
        }
    }
    let sampling =
        subgrid_sampling_check(&Grid::new(vec![3, 3]).unwrap(), &corner(), 2, 10_000, 7).unwrap();
    if !sampling.passed {
        problems.push(format!("sampling {sampling:?}"));
    }
    let mut phi_pairs = 0;
    for n in 4..=10 {
        let gp = grid_partition(n, 2, Method::Symmetric, 0).unwrap();
        let r = verify_grid_partition(&gp);
        phi_pairs += r.pairs_checked;
        if !r.passed || !r.exhaustive {
            problems.push(format!("phi n={n}"));
        }
    }
    Verdict::new(
        problems.is_empty(),
        format!(
            "ex(k,2,corner) k=2..4: {corners:?}; {pairs} ratio pairs; {phi_pairs} phi pairs {}",
            problems.join("; ")
        ),
    )
}

fn family_above(r: u32, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let n = 10;
    let mut pool: Vec<u64> = (5..=n).flat_map(|l| level(n, l)).collect();
    pool.shuffle(rng);
    let target = r as f64 + rng.gen_range(0.01..0.99);
    let mut family = Vec::new();
    let mut mass = 0.0;
    for x in pool {
        if mass > target {
            break;
        }
        mass += 1.0 / binom(n, x.count_ones()) as f64;
        family.push(x);
    }
    family
}

fn criterion7() -> Verdict {
    let t = Instant::now();
    let a = container_stats(12, 0, 1000).unwrap();
    let b = container_stats(12, 0, 1000).unwrap();
    let took = t.elapsed();
    let same = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    let mut problems = Vec::new();
    if !a.all_contained {
        problems.push("containment".to_string());
    }
    if !same {
        problems.push("nondeterministic".into());
    }
    if !a.within_twice_budget {
        problems.push(format!(
            "max |S| {} > 2 x {:.1}",
            a.max_fingerprint, a.budget
        ));
    }
    if !a.all_monotone {
        problems.push("Lubell mass not monotone".into());
    }
    if took > Duration::from_secs(120) {
        problems.push(format!("took {took:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut degree_bad = 0;
    for r in 1..=2u32 {
        for _ in 0..500 {
            let fam = family_above(r, &mut rng);
            let delta = lubell_mass_masks(&fam, 10) - r as f64;
            if !max_comparable_degree(&fam, 10, r, delta).unwrap().holds() {
                degree_bad += 1;
            }
        }
    }
    if degree_bad > 0 {
        problems.push(format!("{degree_bad} degree-bound failures"));
    }
    let note = if a.max_fingerprint == 0 {
        format!(
            ", T has Lubell mass {:.3} so no container step is taken",
            a.lubell_t
        )
    } else {
        String::new()
    };
    Verdict::new(
        problems.is_empty(),
        format!(
            "1000 samples, max |S| {} (budget {:.1}){note}, 1000 degree checks {}",
            a.max_fingerprint,
            a.budget,
            problems.join("; ")
        ),
    )
}

fn criterion8() -> Verdict {
    let t = Instant::now();
    let mut problems = Vec::new();
    let all: Vec<u64> = (1..=200).collect();
    for part in [3u32, 4] {
        let r = binomial_estimate_check(part, &all).unwrap();
        if !r.passed {
            let first: Vec<String> = r
                .rows
                .iter()
                .filter(|row| row.violations > 0)
                .take(3)
                .map(|row| format!("n={}", row.n))
                .collect();
            problems.push(format!(
                "part {part}: {} violations (first at {})",
                r.violations,
                first.join(", ")
            ));
        }
    }
    let p1 = binomial_estimate_check(1, &[10_000]).unwrap();
    if !(p1.max_deviation < 1e-4) {
        problems.push(format!("part 1 deviation {:.3e}", p1.max_deviation));
    }
    let app = appendix_table_check().unwrap();
    if !(app.passed && app.rows_ok == 13 && app.links_ok == 12) {
        problems.push(format!(
            "appendix rows {} links {}",
            app.rows_ok, app.links_ok
        ));
    }
    let took = t.elapsed();
    if took > Duration::from_secs(10) {
        problems.push(format!("took {took:?}"));
    }
    Verdict::new(
        problems.is_empty(),
        format!(
            "part 1 deviation {:.2e}, table {}/13, links {}/12 {}",
            p1.max_deviation,
            app.rows_ok,
            app.links_ok,
            problems.join("; ")
        ),
    )
}

fn criterion9() -> Verdict {
    let mut problems = Vec::new();
    let (mut near, mut cover) = (Vec::new(), Vec::new());
    for n in 12..=20u32 {
        let (mut nf, mut cf) = (Vec::new(), Vec::new());
        for seed in 0..5u64 {
            let st = uniformity_stats(&run_pipeline(n, seed).unwrap().0, 0.5);
            nf.push(st.near_uniform_fraction);
            cf.push(st.coverage_fraction);
        }
        let sym = uniformity_stats(&symmetric_decomposition(n).unwrap(), 0.5);
        let (nm, cm) = (median(nf), median(cf));
        if nm < sym.near_uniform_fraction || cm < sym.coverage_fraction {
            problems.push(format!("n={n} below symmetric"));
        }
        near.push(nm);
        cover.push(cm);
    }
    if !near.windows(2).all(|w| w[1] >= w[0]) {
        problems.push("near-uniform fraction not nondecreasing".into());
    }
    if !cover.windows(2).all(|w| w[1] >= w[0]) {
        problems.push("coverage fraction not nondecreasing".into());
    }
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Verdict::new(
        problems.is_empty(),
        format!(
            "near [{}] cover [{}] {}",
            fmt(&near),
            fmt(&cover),
            problems.join("; ")
        ),
    )
}

fn criterion10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=16u32);
        let top = n - n.div_ceil(2);
        let i = rng.gen_range(0..=top);
        let j = loop {
            let j = rng.gen_range(0..=top);
            if j != i {
                break j;
            }
        };
        let a_i = level(n, n.div_ceil(2) + i);
        let size = rng.gen_range(1..=a_i.len().min(64));
        let x: Vec<u64> = sample(&mut rng, a_i.len(), size)
            .into_iter()
            .map(|p| a_i[p])
            .collect();
        if !lym_check(&x, i, j, n).unwrap() {
            bad += 1;
        }
    }
    Verdict::new(bad == 0, format!("10000 samples, {bad} violations"))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut runs = Vec::new();
    let mut results: Vec<(u32, &str, Verdict, Duration)> = Vec::new();
    let mut record = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        let took = t.elapsed();
        println!(
            "criterion {id:>2} {} {name} ({:.2}s): {}",
            if v.passed { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            v.detail.trim_end()
        );
        results.push((id, name, v, took));
    };
    record(1, "partition validity", &mut || criterion1(&mut runs));
    record(2, "symmetric profile", &mut || criterion2(&mut runs));
    record(3, "dominance", &mut || criterion3(&runs));
    record(4, "sperner graph", &mut criterion4);
    record(5, "dilworth duality", &mut criterion5);
    record(6, "extremal oracles", &mut criterion6);
    record(7, "containers", &mut criterion7);
    record(8, "numerics", &mut criterion8);
    record(9, "uniformity", &mut criterion9);
    record(10, "lym", &mut criterion10);
    let failed: Vec<u32> = results
        .iter()
        .filter(|r| !r.2.passed)
        .map(|r| r.0)
        .collect();
    println!(
        "acceptance: {}/{} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(", failing {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
