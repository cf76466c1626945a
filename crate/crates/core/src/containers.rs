//! Graph containers for antichains of the upper levels.
//!
//! [`kw_container`] runs the greedy max-degree procedure on the
//! comparability graph of a family `T`: the selected vertices that belong to
//! the antichain form the fingerprint `S`, and the vertices still alive when
//! the Lubell mass drops below `1 + n^(-1/2)` form the body `f(S)`.
//! [`max_comparable_degree`] exposes the degree lower bound that drives the
//! size estimate for `S`.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{capability, domain, Result};
use crate::lattice::{lubell_from_level_counts, lubell_mass_masks};
use crate::pipeline::compute_constants;
use crate::subset::{full_mask, is_subset, level};

/// Largest ground set for which dense membership tables are allocated.
pub const CONTAINER_MAX_N: u32 = 20;

/// Largest `n` accepted by [`container_stats`].
pub const CONTAINER_STATS_MAX_N: u32 = 16;

const ABSENT: u32 = u32::MAX;

fn check_family(family: &[u64], n: u32, what: &str) -> Result<Vec<u32>> {
    if n == 0 || n > CONTAINER_MAX_N {
        return capability(format!(
            "containers support 1 <= n <= {CONTAINER_MAX_N}, got {n}"
        ));
    }
    let full = full_mask(n);
    let mut pos = vec![ABSENT; 1usize << n];
    for (i, &x) in family.iter().enumerate() {
        if x & !full != 0 {
            return domain(format!("{what} has a set outside [{n}]: {x:#x}"));
        }
        if pos[x as usize] != ABSENT {
            return domain(format!("{what} lists {x:#x} twice"));
        }
        pos[x as usize] = i as u32;
    }
    Ok(pos)
}

/// Neighbour lists of the comparability graph on `family`, found by walking
/// the proper supersets of every member.
fn comparability_lists(family: &[u64], n: u32, pos: &[u32]) -> Vec<Vec<u32>> {
    let full = full_mask(n);
    let mut adj = vec![Vec::new(); family.len()];
    for (i, &x) in family.iter().enumerate() {
        let free = full & !x;
        let mut add = free;
        while add != 0 {
            let j = pos[(x | add) as usize];
            if j != ABSENT {
                adj[i].push(j);
                adj[j as usize].push(i as u32);
            }
            add = (add - 1) & free;
        }
    }
    adj
}

/// Result of the max-degree scan over a family of Lubell mass `r + delta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeWitness {
    pub witness: u64,
    /// Number of other members comparable with `witness`.
    pub degree: usize,
    pub lubell: f64,
    pub r: u32,
    pub delta: f64,
    /// `delta / ((r + delta) r!) * (n/2)^r`.
    pub bound: f64,
}

impl DegreeWitness {
    pub fn holds(&self) -> bool {
        self.degree as f64 >= self.bound
    }
}

/// Finds the member of `family` comparable with the most other members and
/// the guaranteed lower bound for that count.
///
/// The family must lie in the upper half and have Lubell mass `r + delta`
/// with `delta > 0`; `delta` is checked against the mass to `1e-9`.
pub fn max_comparable_degree(family: &[u64], n: u32, r: u32, delta: f64) -> Result<DegreeWitness> {
    let pos = check_family(family, n, "family")?;
    let m = n.div_ceil(2);
    if family.iter().any(|x| x.count_ones() < m) {
        return domain(format!("family must lie in levels >= {m}"));
    }
    if r == 0 {
        return domain("r must be a positive integer");
    }
    let lubell = lubell_mass_masks(family, n);
    if lubell <= r as f64 {
        return domain(format!("Lubell mass {lubell} does not exceed r = {r}"));
    }
    if !(delta > 0.0) || (lubell - (r as f64 + delta)).abs() > 1e-9 {
        return domain(format!(
            "delta = {delta} does not match Lubell mass {lubell} with r = {r}"
        ));
    }
    let adj = comparability_lists(family, n, &pos);
    let (best, degree) = adj
        .iter()
        .enumerate()
        .map(|(i, nb)| (i, nb.len()))
        .max_by_key(|&(i, d)| (d, Reverse(i)))
        .expect("mass > r > 0 implies a non-empty family");
    let r_fact: f64 = (1..=r).map(f64::from).product();
    let bound = delta / ((r as f64 + delta) * r_fact) * (n as f64 / 2.0).powi(r as i32);
    Ok(DegreeWitness {
        witness: family[best],
        degree,
        lubell,
        r,
        delta,
        bound,
    })
}

/// Steps spent in one mass phase of the container run.
///
/// Phase `-1` covers mass at least 3, phase `0` mass in `[2, 3)`, phase
/// `r >= 1` mass in `[1 + 2^-r, 1 + 2^-(r-1))`, measured before the step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseLog {
    pub phase: i32,
    pub steps: usize,
    /// Vertices added to the fingerprint.
    pub fingerprint_added: usize,
    /// Vertices deleted from the graph, including fingerprint vertices.
    pub removed: usize,
}

fn phase_of(mass: f64) -> i32 {
    if mass >= 3.0 {
        return -1;
    }
    if mass >= 2.0 {
        return 0;
    }
    let mut r = 1;
    while mass < 1.0 + 0.5f64.powi(r) && r < 64 {
        r += 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainerResult {
    /// `S`, in the order the vertices were selected.
    pub fingerprint: Vec<u64>,
    /// `f(S)`, sorted ascending.
    pub body: Vec<u64>,
    /// `S ∪ f(S)`, sorted ascending.
    pub container: Vec<u64>,
    pub step_log: Vec<PhaseLog>,
    /// Lubell mass of the live vertex set, before the first step and after
    /// every step.
    pub mass_trace: Vec<f64>,
    /// Termination threshold `1 + n^(-1/2)`.
    pub threshold: f64,
}

impl ContainerResult {
    pub fn steps(&self) -> usize {
        self.mass_trace.len() - 1
    }

    pub fn lubell(&self, n: u32) -> f64 {
        lubell_mass_masks(&self.container, n)
    }

    /// Every step removed mass.
    pub fn mass_strictly_decreasing(&self) -> bool {
        self.mass_trace.windows(2).all(|w| w[1] < w[0])
    }
}

/// Builds the container of the antichain `antichain` inside `t`, where the
/// slice order of `t` is the tie-breaking order.
pub fn kw_container(antichain: &[u64], t: &[u64], n: u32) -> Result<ContainerResult> {
    let pos = check_family(t, n, "T")?;
    let mut in_i = vec![false; t.len()];
    for &x in antichain {
        let full = full_mask(n);
        let j = if x & !full == 0 {
            pos[x as usize]
        } else {
            ABSENT
        };
        if j == ABSENT {
            return domain(format!("antichain member {x:#x} is not in T"));
        }
        if in_i[j as usize] {
            return domain(format!("antichain lists {x:#x} twice"));
        }
        in_i[j as usize] = true;
    }
    for (a, &x) in antichain.iter().enumerate() {
        for &y in &antichain[a + 1..] {
            if is_subset(x, y) || is_subset(y, x) {
                return domain(format!("{x:#x} and {y:#x} are comparable"));
            }
        }
    }

    let adj = comparability_lists(t, n, &pos);
    let mut alive = vec![true; t.len()];
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(Reverse<usize>, u32)> = (0..t.len())
        .map(|i| (Reverse(degree[i]), i as u32))
        .collect();
    let mut per_level = vec![0u128; n as usize + 1];
    for &x in t {
        per_level[x.count_ones() as usize] += 1;
    }
    let mut mass = lubell_from_level_counts(n, &per_level);
    let threshold = 1.0 + (n as f64).powf(-0.5);

    let mut fingerprint = Vec::new();
    let mut mass_trace = vec![mass];
    let mut step_log: Vec<PhaseLog> = Vec::new();

    let remove = |v: usize,
                  alive: &mut Vec<bool>,
                  degree: &mut Vec<usize>,
                  queue: &mut BTreeSet<(Reverse<usize>, u32)>,
                  per_level: &mut Vec<u128>| {
        alive[v] = false;
        queue.remove(&(Reverse(degree[v]), v as u32));
        per_level[t[v].count_ones() as usize] -= 1;
        for &w in &adj[v] {
            let w = w as usize;
            if alive[w] {
                queue.remove(&(Reverse(degree[w]), w as u32));
                degree[w] -= 1;
                queue.insert((Reverse(degree[w]), w as u32));
            }
        }
    };

    while mass >= threshold {
        let Some(&(_, v)) = queue.iter().next() else {
            break;
        };
        let v = v as usize;
        let phase = phase_of(mass);
        let mut removed = 1;
        let added = in_i[v] as usize;
        if in_i[v] {
            fingerprint.push(t[v]);
            let nbrs: Vec<usize> = adj[v]
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| alive[w])
                .collect();
            remove(v, &mut alive, &mut degree, &mut queue, &mut per_level);
            for w in nbrs {
                remove(w, &mut alive, &mut degree, &mut queue, &mut per_level);
                removed += 1;
            }
        } else {
            remove(v, &mut alive, &mut degree, &mut queue, &mut per_level);
        }
        mass = lubell_from_level_counts(n, &per_level);
        mass_trace.push(mass);
        match step_log.last_mut() {
            Some(log) if log.phase == phase => {
                log.steps += 1;
                log.fingerprint_added += added;
                log.removed += removed;
            }
            _ => step_log.push(PhaseLog {
                phase,
                steps: 1,
                fingerprint_added: added,
                removed,
            }),
        }
    }

    let mut body: Vec<u64> = (0..t.len()).filter(|&i| alive[i]).map(|i| t[i]).collect();
    body.sort_unstable();
    let mut container: Vec<u64> = body.iter().chain(&fingerprint).copied().collect();
    container.sort_unstable();
    Ok(ContainerResult {
        fingerprint,
        body,
        container,
        step_log,
        mass_trace,
        threshold,
    })
}

/// `3 * 2^n * log2(n) / n^(3/2)`, the fingerprint size budget.
pub fn fingerprint_budget(n: u32) -> f64 {
    let nf = n as f64;
    3.0 * 2f64.powi(n as i32) * nf.log2() / nf.powf(1.5)
}

/// The family `T = A_{k+1} ∪ ... ∪ A_{C0}` of the uniform construction, in
/// increasing bitmask order.
pub fn pipeline_t(n: u32) -> Result<Vec<u64>> {
    let c = compute_constants(n)?;
    let mut t: Vec<u64> = (c.k + 1..=c.c0).flat_map(|i| level(n, c.m + i)).collect();
    t.sort_unstable();
    Ok(t)
}

/// Random antichain of `t`: a uniformly random target size, then a greedy
/// scan of a shuffled copy of `t`.
pub fn random_antichain(t: &[u64], rng: &mut impl Rng) -> Vec<u64> {
    let target = rng.gen_range(0..=t.len());
    let mut shuffled = t.to_vec();
    shuffled.shuffle(rng);
    let mut out: Vec<u64> = Vec::new();
    for x in shuffled {
        if out.len() == target {
            break;
        }
        if out.iter().all(|&y| !is_subset(x, y) && !is_subset(y, x)) {
            out.push(x);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainerStats {
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub t_size: usize,
    pub lubell_t: f64,
    pub max_lubell_container: f64,
    pub mean_lubell_container: f64,
    /// Largest `ℓ(C) - 1` over the samples.
    pub max_excess: f64,
    pub max_fingerprint: usize,
    pub mean_fingerprint: f64,
    pub distinct_fingerprints: usize,
    pub budget: f64,
    pub within_twice_budget: bool,
    pub all_contained: bool,
    pub all_monotone: bool,
    /// `ℓ(C) >= ℓ(I)` for every sample.
    pub container_dominates: bool,
}

/// Samples antichains of the construction's `T` and summarizes their
/// containers. Sample `j` draws from stream `j` of a ChaCha generator seeded
/// with `seed`.
pub fn container_stats(n: u32, seed: u64, samples: usize) -> Result<ContainerStats> {
    if n > CONTAINER_STATS_MAX_N {
        return capability(format!(
            "container statistics support n <= {CONTAINER_STATS_MAX_N}, got {n}"
        ));
    }
    let t = pipeline_t(n)?;
    let budget = fingerprint_budget(n);
    let mut max_l = 0f64;
    let mut sum_l = 0f64;
    let mut max_s = 0usize;
    let mut sum_s = 0usize;
    let mut fingerprints = HashSet::new();
    let (mut contained, mut monotone, mut dominates) = (true, true, true);
    for j in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let ant = random_antichain(&t, &mut rng);
        let res = kw_container(&ant, &t, n)?;
        let l = res.lubell(n);
        max_l = max_l.max(l);
        sum_l += l;
        max_s = max_s.max(res.fingerprint.len());
        sum_s += res.fingerprint.len();
        contained &= ant.iter().all(|x| res.container.binary_search(x).is_ok());
        monotone &= res.mass_strictly_decreasing();
        dominates &= l >= lubell_mass_masks(&ant, n) - 1e-12;
        let mut fp = res.fingerprint.clone();
        fp.sort_unstable();
        fingerprints.insert(fp);
    }
    let denom = samples.max(1) as f64;
    Ok(ContainerStats {
        n,
        seed,
        samples,
        t_size: t.len(),
        lubell_t: lubell_mass_masks(&t, n),
        max_lubell_container: max_l,
        mean_lubell_container: sum_l / denom,
        max_excess: max_l - 1.0,
        max_fingerprint: max_s,
        mean_fingerprint: sum_s as f64 / denom,
        distinct_fingerprints: fingerprints.len(),
        budget,
        within_twice_budget: max_s as f64 <= 2.0 * budget,
        all_contained: contained,
        all_monotone: monotone,
        container_dominates: dominates,
    })
}
