use std::collections::HashSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ambient::{Ambient, Grid};
use super::ast::AffineConfiguration;
use crate::error::{capability, domain, Result};

/// Most variables a configuration may have for the searches below.
pub const MAX_VARIABLES: usize = 6;
/// Largest ambient handled by [`ex_oracle`].
pub const ORACLE_MAX_POINTS: u64 = 36;

fn check_arity(c: &AffineConfiguration) -> Result<()> {
    if c.arity() > MAX_VARIABLES {
        return capability(format!(
            "configurations are limited to {MAX_VARIABLES} variables, got {}",
            c.arity()
        ));
    }
    Ok(())
}

/// Depth-first search over injective assignments of `points` to the
/// variables, pruning as soon as the partial assignment decides the body.
/// `visit` gets the point indices of every satisfying assignment and
/// returns `false` to stop the search.
fn search_assignments(
    amb: &Ambient,
    c: &AffineConfiguration,
    points: &[u64],
    visit: &mut impl FnMut(&[usize]) -> bool,
) {
    fn go(
        amb: &Ambient,
        c: &AffineConfiguration,
        points: &[u64],
        asg: &mut Vec<Option<u64>>,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        let depth = chosen.len();
        if depth == asg.len() {
            return c.body.eval(amb, asg) != Some(true) || visit(chosen);
        }
        for (i, &p) in points.iter().enumerate() {
            if used[i] {
                continue;
            }
            asg[depth] = Some(p);
            if c.body.eval(amb, asg) != Some(false) {
                used[i] = true;
                chosen.push(i);
                let keep_going = go(amb, c, points, asg, chosen, used, visit);
                chosen.pop();
                used[i] = false;
                if !keep_going {
                    asg[depth] = None;
                    return false;
                }
            }
            asg[depth] = None;
        }
        true
    }
    let mut asg = vec![None; c.arity()];
    let mut chosen = Vec::with_capacity(c.arity());
    let mut used = vec![false; points.len()];
    go(amb, c, points, &mut asg, &mut chosen, &mut used, visit);
}

fn check_points(amb: &Ambient, h: &[u64]) -> Result<Vec<u64>> {
    if let Some(&p) = h.iter().find(|&&p| !amb.contains(p)) {
        return domain(format!("point {p} is not in {}", amb.label()));
    }
    let mut pts = h.to_vec();
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

/// Returns an assignment of pairwise distinct members of `h` (one per
/// variable, in declaration order) satisfying `c`, or `None`.
pub fn contains_configuration(
    h: &[u64],
    c: &AffineConfiguration,
    amb: &Ambient,
) -> Result<Option<Vec<u64>>> {
    check_arity(c)?;
    let pts = check_points(amb, h)?;
    let mut witness = None;
    search_assignments(amb, c, &pts, &mut |idx| {
        witness = Some(idx.iter().map(|&i| pts[i]).collect());
        false
    });
    Ok(witness)
}

/// All point sets (as bitmasks over indices into `points`) that carry a
/// copy of `c`. A family avoids `c` iff it contains none of them.
pub fn forbidden_sets(amb: &Ambient, c: &AffineConfiguration, points: &[u64]) -> Result<Vec<u64>> {
    check_arity(c)?;
    if points.len() > 64 {
        return capability("forbidden sets are tracked for at most 64 points");
    }
    let mut seen = HashSet::new();
    search_assignments(amb, c, points, &mut |idx| {
        seen.insert(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        true
    });
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable_by_key(|&m| (63 - m.leading_zeros(), m));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExResult {
    pub ambient: String,
    pub config: String,
    pub value: u64,
    /// An optimal avoiding family.
    pub family: Vec<u64>,
    pub forbidden_sets: usize,
    pub nodes: u64,
}

struct Search<'a> {
    size: usize,
    /// Forbidden sets sorted by their largest index.
    forb: &'a [u64],
    /// `first[i]`: position in `forb` of the first set whose largest index
    /// is at least `i`.
    first: Vec<usize>,
    /// Forbidden sets whose largest index is exactly `i`.
    ending: Vec<Vec<u64>>,
    best: u32,
    best_set: u64,
    nodes: u64,
}

impl Search<'_> {
    /// Points still undecided minus a greedy packing of forbidden sets that
    /// each need a distinct undecided point removed.
    fn bound(&self, i: usize, chosen: u64) -> u32 {
        let rest = if i >= 64 { 0 } else { !0u64 << i } & low_mask(self.size);
        let alive = chosen | rest;
        let mut used = 0u64;
        let mut packed = 0;
        for &f in &self.forb[self.first[i]..] {
            if f & !alive == 0 {
                let open = f & rest;
                if open & used == 0 {
                    used |= open;
                    packed += 1;
                }
            }
        }
        rest.count_ones() - packed
    }

    fn run(&mut self, i: usize, chosen: u64, count: u32) {
        self.nodes += 1;
        if i == self.size {
            if count > self.best {
                self.best = count;
                self.best_set = chosen;
            }
            return;
        }
        if count + self.bound(i, chosen) <= self.best {
            return;
        }
        let with = chosen | 1 << i;
        if self.ending[i].iter().all(|&f| f & !with != 0) {
            self.run(i + 1, with, count + 1);
        }
        self.run(i + 1, chosen, count);
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

/// Points of an ambient in search order: increasing bitmask for `2^[n]`,
/// increasing index for grids.
pub fn ambient_points(amb: &Ambient) -> Vec<u64> {
    (0..amb.size()).collect()
}

/// Exact `ex(ambient, c)` by branch and bound over include/exclude
/// decisions in point order.
pub fn ex_oracle(amb: &Ambient, c: &AffineConfiguration) -> Result<ExResult> {
    check_arity(c)?;
    let size = amb.size();
    if size > ORACLE_MAX_POINTS {
        return capability(format!(
            "exact oracle handles at most {ORACLE_MAX_POINTS} points, {} has {size}",
            amb.label()
        ));
    }
    let points = ambient_points(amb);
    let forb = forbidden_sets(amb, c, &points)?;
    let size = size as usize;
    let top = |m: u64| 63 - m.leading_zeros() as usize;
    let mut ending = vec![Vec::new(); size];
    for &f in &forb {
        ending[top(f)].push(f);
    }
    let first = (0..=size)
        .map(|i| forb.partition_point(|&f| top(f) < i))
        .collect();
    let mut s = Search {
        size,
        forb: &forb,
        first,
        ending,
        best: 0,
        best_set: 0,
        nodes: 0,
    };
    s.run(0, 0, 0);
    let family = (0..size)
        .filter(|&i| s.best_set >> i & 1 == 1)
        .map(|i| points[i])
        .collect();
    Ok(ExResult {
        ambient: amb.label(),
        config: c.name.clone(),
        value: s.best as u64,
        family,
        forbidden_sets: forb.len(),
        nodes: s.nodes,
    })
}

/// Finds a corner in a family of a 2-dimensional grid by deleting the
/// leftmost point of every horizontal line and the lowest point of every
/// vertical line: any surviving point `(c, b)` is the union of the deleted
/// `(a, b)` left of it and `(c, d)` below it. Returns `[x, y, z]` with
/// `z = x ∪ y`.
pub fn corner_by_deletion(grid: &Grid, family: &[u64]) -> Result<Option<[u64; 3]>> {
    if grid.d() != 2 {
        return domain("corner deletion needs a 2-dimensional grid");
    }
    let (k1, k2) = (grid.dims()[0] as usize, grid.dims()[1] as usize);
    let mut pts = Vec::with_capacity(family.len());
    for &p in family {
        if p >= grid.size() {
            return domain(format!("point {p} outside the grid"));
        }
        let c = grid.coords(p);
        pts.push((c[0], c[1]));
    }
    pts.sort_unstable();
    pts.dedup();
    let mut leftmost = vec![u32::MAX; k2 + 1];
    let mut lowest = vec![u32::MAX; k1 + 1];
    for &(x, y) in &pts {
        leftmost[y as usize] = leftmost[y as usize].min(x);
        lowest[x as usize] = lowest[x as usize].min(y);
    }
    for &(x, y) in &pts {
        if leftmost[y as usize] < x && lowest[x as usize] < y {
            let a = grid.point(&[leftmost[y as usize], y])?;
            let b = grid.point(&[x, lowest[x as usize]])?;
            return Ok(Some([a, b, grid.point(&[x, y])?]));
        }
    }
    Ok(None)
}

/// Upper bound `k_1 + k_2` on `ex(F, corner)` from the deletion argument.
pub fn corner_deletion_bound(grid: &Grid) -> Result<u64> {
    if grid.d() != 2 {
        return domain("corner deletion needs a 2-dimensional grid");
    }
    Ok(grid.dims().iter().map(|&k| k as u64).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingReport {
    pub dims: Vec<u32>,
    pub k: u32,
    pub ex_grid: u64,
    pub ex_cube: u64,
    /// `ex(F, C) / (k_1 ... k_d)`.
    pub lhs: f64,
    /// `ex(k, d, C) / k^d`.
    pub rhs: f64,
    /// Checked in integers.
    pub ratio_holds: bool,
    pub trials: usize,
    pub mean_hits: f64,
    pub expected_hits: f64,
    pub std_error: f64,
    pub mean_ok: bool,
    pub max_hits: u64,
    /// Every sampled subgrid met the optimal family in at most
    /// `ex(k, d, C)` points.
    pub hits_bounded: bool,
    pub passed: bool,
}

/// Compares the density of `c`-avoiding families in `f` and in `[k]^d`
/// and replays the random-subgrid averaging on an optimal family of `f`.
pub fn subgrid_sampling_check(
    f: &Grid,
    c: &AffineConfiguration,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<SamplingReport> {
    let d = f.d() as u32;
    let min_dim = *f.dims().iter().min().expect("d >= 1");
    if k == 0 || k > min_dim {
        return domain(format!("k must be in 1..={min_dim}, got {k}"));
    }
    let big = ex_oracle(&Ambient::Grid(f.clone()), c)?;
    let cube = Grid::cube(k, d)?;
    let small = ex_oracle(&Ambient::Grid(cube.clone()), c)?;
    let kd = (k as u128).pow(d);
    let size = f.size() as u128;
    let ratio_holds = big.value as u128 * kd <= small.value as u128 * size;

    let optimal: HashSet<u64> = big.family.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq, mut max_hits) = (0f64, 0f64, 0u64);
    for _ in 0..trials {
        let axes: Vec<Vec<u32>> = f
            .dims()
            .iter()
            .map(|&ki| {
                sample(&mut rng, ki as usize, k as usize)
                    .into_iter()
                    .map(|x| x as u32 + 1)
                    .collect()
            })
            .collect();
        let mut hits = 0u64;
        for cell in 0..cube.size() {
            let local = cube.coords(cell);
            let coords: Vec<u32> = local
                .iter()
                .zip(&axes)
                .map(|(&j, ax)| ax[j as usize - 1])
                .collect();
            if optimal.contains(&f.point(&coords)?) {
                hits += 1;
            }
        }
        sum += hits as f64;
        sum_sq += (hits * hits) as f64;
        max_hits = max_hits.max(hits);
    }
    let expected = big.value as f64 * kd as f64 / size as f64;
    let (mean, std_error, mean_ok) = if trials == 0 {
        (f64::NAN, f64::NAN, true)
    } else {
        let t = trials as f64;
        let mean = sum / t;
        let var = if trials > 1 {
            (sum_sq - t * mean * mean).max(0.0) / (t - 1.0)
        } else {
            0.0
        };
        let se = (var / t).sqrt();
        let ok = if se == 0.0 {
            (mean - expected).abs() < 1e-9
        } else {
            (mean - expected).abs() <= 3.0 * se
        };
        (mean, se, ok)
    };
    let hits_bounded = max_hits <= small.value;
    Ok(SamplingReport {
        dims: f.dims().to_vec(),
        k,
        ex_grid: big.value,
        ex_cube: small.value,
        lhs: big.value as f64 / size as f64,
        rhs: small.value as f64 / kd as f64,
        ratio_holds,
        trials,
        mean_hits: mean,
        expected_hits: expected,
        std_error,
        mean_ok,
        max_hits,
        hits_bounded,
        passed: ratio_holds && mean_ok && hits_bounded,
    })
}
