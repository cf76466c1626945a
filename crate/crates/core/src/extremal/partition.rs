use std::collections::HashMap;

use serde::Serialize;

use super::ambient::{Ambient, Grid};
use super::ast::AffineConfiguration;
use super::oracle::ex_oracle;
use crate::error::{capability, internal, Result};
use crate::lattice::{verify_chain_decomposition, Chain, ChainDecomposition, Ground};
use crate::method::Method;
use crate::subset::{binom, full_mask, middle_binom};

pub const PARTITION_MAX_N: u32 = 24;
pub const PARTITION_MAX_D: u32 = 3;
/// Largest `n` for which [`verify_grid_partition`] checks every pair.
pub const PHI_EXHAUSTIVE_MAX_N: u32 = 10;

/// `2^[n]` as the product `2^[n_1] × ... × 2^[n_d]` of chain partitions;
/// every product of chains is a cell isomorphic to a grid.
#[derive(Clone, Debug)]
pub struct GridPartition {
    pub n: u32,
    pub d: u32,
    pub method: Method,
    /// `n_i`, each `floor(n/d)` or `ceil(n/d)`.
    pub factor_sizes: Vec<u32>,
    /// Bit offset of factor `i` inside a mask of `2^[n]`.
    pub offsets: Vec<u32>,
    /// Chains of every factor after long chains were cut.
    pub factors: Vec<Vec<Chain>>,
    /// Chains longer than this were cut, per factor.
    pub split_thresholds: Vec<f64>,
    /// Number of chains that were cut, per factor.
    pub splits: Vec<usize>,
    /// `x` restricted to factor `i` -> (chain index, 0-based position).
    lookup: Vec<HashMap<u64, (u32, u32)>>,
}

/// Cuts every chain longer than `threshold` into consecutive pieces of
/// `floor(s)` elements (the last piece may be shorter).
pub fn split_long_chains(chains: Vec<Chain>, s: f64, threshold: f64) -> (Vec<Chain>, usize) {
    let piece = (s.floor() as usize).max(1);
    let mut out = Vec::with_capacity(chains.len());
    let mut cut = 0;
    for ch in chains {
        if ch.len() as f64 > threshold {
            cut += 1;
            for part in ch.elements().chunks(piece) {
                out.push(Chain::from_raw(part.to_vec()));
            }
        } else {
            out.push(ch);
        }
    }
    (out, cut)
}

pub fn grid_partition(n: u32, d: u32, method: Method, seed: u64) -> Result<GridPartition> {
    if d == 0 || d > PARTITION_MAX_D || 2 * d > n || n > PARTITION_MAX_N {
        return capability(format!(
            "grid partitions need 1 <= d <= {PARTITION_MAX_D} and 2d <= n <= {PARTITION_MAX_N}, got n = {n}, d = {d}"
        ));
    }
    let base = n / d;
    let factor_sizes: Vec<u32> = (0..d).map(|i| base + u32::from(i < n % d)).collect();
    let mut offsets = Vec::with_capacity(d as usize);
    let mut acc = 0;
    for &ni in &factor_sizes {
        offsets.push(acc);
        acc += ni;
    }
    let nf = n as f64;
    let mut factors = Vec::new();
    let mut split_thresholds = Vec::new();
    let mut splits = Vec::new();
    let mut lookup = Vec::new();
    for (i, &ni) in factor_sizes.iter().enumerate() {
        let dec = method.decompose(ni, seed.wrapping_add(i as u64))?;
        let s = (1u128 << ni) as f64 / middle_binom(ni) as f64;
        let threshold = s * (1.0 + nf.powf(-1.0 / 20.0));
        let (chains, cut) = split_long_chains(dec.chains, s, threshold);
        let check = ChainDecomposition::new(ni, Ground::Full, chains);
        let report = verify_chain_decomposition(&check);
        if !report.passed {
            return internal(format!(
                "factor {i} is not a chain partition: {:?}",
                report.problems
            ));
        }
        let mut map = HashMap::with_capacity(1 << ni);
        for (c, ch) in check.chains.iter().enumerate() {
            for (p, &x) in ch.elements().iter().enumerate() {
                map.insert(x, (c as u32, p as u32));
            }
        }
        factors.push(check.chains);
        split_thresholds.push(threshold);
        splits.push(cut);
        lookup.push(map);
    }
    Ok(GridPartition {
        n,
        d,
        method,
        factor_sizes,
        offsets,
        factors,
        split_thresholds,
        splits,
        lookup,
    })
}

impl GridPartition {
    pub fn num_cells(&self) -> u128 {
        self.factors.iter().map(|f| f.len() as u128).product()
    }

    /// Cell indices in mixed radix, first factor fastest.
    pub fn cells(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radix: Vec<usize> = self.factors.iter().map(Vec::len).collect();
        (0..self.num_cells()).map(move |mut c| {
            radix
                .iter()
                .map(|&r| {
                    let j = (c % r as u128) as usize;
                    c /= r as u128;
                    j
                })
                .collect()
        })
    }

    /// Grid shape `[|D_1|] × ... × [|D_d|]` of a cell.
    pub fn cell_grid(&self, cell: &[usize]) -> Grid {
        Grid::new(
            cell.iter()
                .zip(&self.factors)
                .map(|(&j, f)| f[j].len() as u32)
                .collect(),
        )
        .expect("chains are non-empty")
    }

    /// The set at 1-based grid coordinates `coords` of a cell.
    pub fn cell_point(&self, cell: &[usize], coords: &[u32]) -> u64 {
        cell.iter()
            .zip(coords)
            .enumerate()
            .map(|(i, (&j, &c))| self.factors[i][j].elements()[c as usize - 1] << self.offsets[i])
            .fold(0, |a, b| a | b)
    }

    /// Cell and 1-based coordinates `φ(x)` of a set.
    pub fn locate(&self, x: u64) -> (Vec<usize>, Vec<u32>) {
        let mut cell = Vec::with_capacity(self.d as usize);
        let mut coords = Vec::with_capacity(self.d as usize);
        for (i, &ni) in self.factor_sizes.iter().enumerate() {
            let part = (x >> self.offsets[i]) & full_mask(ni);
            let &(c, p) = self.lookup[i]
                .get(&part)
                .expect("factors partition 2^[n_i]");
            cell.push(c as usize);
            coords.push(p + 1);
        }
        (cell, coords)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionReport {
    pub n: u32,
    pub d: u32,
    pub factor_sizes: Vec<u32>,
    pub chains_per_factor: Vec<usize>,
    pub splits: Vec<usize>,
    pub cells: u128,
    /// Cells cover every set exactly once.
    pub partition_ok: bool,
    /// Whether every pair inside every cell was checked.
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub phi_violations: u64,
    pub passed: bool,
}

/// Checks that the cells partition `2^[n]` and, for `n` up to
/// [`PHI_EXHAUSTIVE_MAX_N`], that inside every cell `φ` respects `⊂`, `∪`
/// and `∩` on all pairs.
pub fn verify_grid_partition(gp: &GridPartition) -> PartitionReport {
    let total: u128 = gp
        .factors
        .iter()
        .map(|f| f.iter().map(|c| c.len() as u128).sum::<u128>())
        .product();
    let mut partition_ok = total == 1u128 << gp.n;
    let exhaustive = gp.n <= PHI_EXHAUSTIVE_MAX_N;
    let (mut pairs, mut bad) = (0u64, 0u64);
    if exhaustive {
        let mut seen = vec![false; 1usize << gp.n];
        for cell in gp.cells() {
            let grid = gp.cell_grid(&cell);
            let amb = Ambient::Grid(grid.clone());
            let pts: Vec<(u64, u64)> = (0..grid.size())
                .map(|p| (gp.cell_point(&cell, &grid.coords(p)), p))
                .collect();
            for &(x, _) in &pts {
                partition_ok &= !std::mem::replace(&mut seen[x as usize], true);
            }
            for &(x, px) in &pts {
                for &(y, py) in &pts {
                    pairs += 1;
                    let leq_ok = ((x & !y) == 0) == amb.leq(px, py);
                    let (jc, jp) = gp.locate(x | y);
                    let (mc, mp) = gp.locate(x & y);
                    let join_ok = jc == cell && grid.point(&jp).ok() == Some(amb.join(px, py));
                    let meet_ok = mc == cell && grid.point(&mp).ok() == Some(amb.meet(px, py));
                    bad += u64::from(!(leq_ok && join_ok && meet_ok));
                }
            }
        }
        partition_ok &= seen.iter().all(|&s| s);
    }
    PartitionReport {
        n: gp.n,
        d: gp.d,
        factor_sizes: gp.factor_sizes.clone(),
        chains_per_factor: gp.factors.iter().map(Vec::len).collect(),
        splits: gp.splits.clone(),
        cells: gp.num_cells(),
        partition_ok,
        exhaustive,
        pairs_checked: pairs,
        phi_violations: bad,
        passed: partition_ok && bad == 0,
    }
}

/// Largest antichain of `[k_1] × ... × [k_d]`: its largest rank level.
pub fn grid_width(dims: &[u32]) -> u64 {
    let mut counts = vec![1u64];
    for &k in dims {
        let mut next = vec![0u64; counts.len() + k as usize - 1];
        for (r, &c) in counts.iter().enumerate() {
            for j in 0..k as usize {
                next[r + j] += c;
            }
        }
        counts = next;
    }
    counts.into_iter().max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateBound {
    pub config: String,
    pub cells: u128,
    /// `Σ_cells ex(cell, C)`.
    pub total: u64,
    /// Distinct cell shapes whose value was computed.
    pub shapes: usize,
}

/// Sums `ex(cell, C)` over the cells, one oracle call per cell shape (the
/// value does not depend on the order of the axes). For the comparable-pair
/// configuration the grid width is used for shapes too large for the oracle.
pub fn aggregate_bound(gp: &GridPartition, c: &AffineConfiguration) -> Result<AggregateBound> {
    let mut memo: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut total = 0u64;
    let comparable = *c == super::builtins::comparable_pair();
    for cell in gp.cells() {
        let mut dims = gp.cell_grid(&cell).dims().to_vec();
        dims.sort_unstable();
        let value = match memo.get(&dims) {
            Some(&v) => v,
            None => {
                let grid = Grid::new(dims.clone())?;
                let v = if grid.size() > super::oracle::ORACLE_MAX_POINTS && comparable {
                    grid_width(&dims)
                } else {
                    ex_oracle(&Ambient::Grid(grid), c)?.value
                };
                memo.insert(dims, v);
                v
            }
        };
        total += value;
    }
    Ok(AggregateBound {
        config: c.name.clone(),
        cells: gp.num_cells(),
        total,
        shapes: memo.len(),
    })
}

/// `binom(n, floor(n/2))`, the value the aggregate bound is compared with
/// for antichains.
pub fn sperner_value(n: u32) -> u64 {
    binom(n, n / 2) as u64
}
