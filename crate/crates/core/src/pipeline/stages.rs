use std::collections::HashMap;

use serde::Serialize;

use super::{IntervalAssignment, PipelineConstants};
use crate::error::{internal, Result};
use crate::lattice::{verify_chain_decomposition, Chain, ChainDecomposition, Ground};
use crate::matching::{
    complete_level_matching, extend_to_maximum_covering, min_chain_partition, DownGraph, Matching,
};
use crate::subset::{level, MaskSet};
use crate::symmetric::upper_shadow_chain_cover;

/// Where the initial leftovers came from. Each element is counted once, under
/// the first reason that applied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LeftoverBreakdown {
    pub top_levels: usize,
    pub small_rows: usize,
    pub shattered_rows: usize,
    pub shattered_blocks: usize,
    pub unassigned_tail: usize,
    pub rejected_chains: usize,
}

/// The leftover set `L`: everything later reattached through the chain
/// cover of the levels above `A_k`.
#[derive(Clone, Debug)]
pub struct Leftovers {
    set: MaskSet,
    count: usize,
    pub breakdown: LeftoverBreakdown,
}

impl Leftovers {
    fn new(n: u32) -> Self {
        Self {
            set: MaskSet::new(n),
            count: 0,
            breakdown: LeftoverBreakdown::default(),
        }
    }

    fn insert_all(&mut self, xs: &[u64]) -> usize {
        let mut added = 0;
        for &x in xs {
            if self.set.insert(x) {
                added += 1;
            }
        }
        self.count += added;
        added
    }

    pub fn contains(&self, x: u64) -> bool {
        self.set.contains(x)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Whether every block of row `a` goes to the leftovers.
pub fn row_dumped(a: u32, asg: &IntervalAssignment, c: &PipelineConstants) -> bool {
    a <= c.small_a_threshold || asg.is_row_shattered(a)
}

/// Initial leftovers: levels above `m + C0`, rows dumped wholesale (small
/// `a` or too many shattered blocks), individually shattered blocks and the
/// part of `T` no block reached.
pub fn collect_leftovers(asg: &IntervalAssignment, c: &PipelineConstants) -> Leftovers {
    let mut lo = Leftovers::new(c.n);
    for l in c.m + c.c0 + 1..=c.n {
        lo.breakdown.top_levels += lo.insert_all(&level(c.n, l));
    }
    for blk in &asg.blocks {
        let xs = asg.elements(blk);
        if blk.a <= c.small_a_threshold {
            lo.breakdown.small_rows += lo.insert_all(xs);
        } else if asg.is_row_shattered(blk.a) {
            lo.breakdown.shattered_rows += lo.insert_all(xs);
        } else if blk.shattered() {
            lo.breakdown.shattered_blocks += lo.insert_all(xs);
        }
    }
    lo.breakdown.unassigned_tail += lo.insert_all(asg.tail());
    lo
}

/// Matching `M_a` between `A_{a-1}` (right side) and `A_a ∪ X_{a,a}` (left
/// side, level members first).
#[derive(Clone, Debug)]
pub struct BlockMatching {
    pub a: u32,
    /// `A_{a-1}`, sorted.
    pub lower: Vec<u64>,
    /// `A_a` sorted, followed by the sorted members of `X_{a,a}` if used.
    pub upper: Vec<u64>,
    /// Number of leading `upper` entries that form `A_a`.
    pub level_len: usize,
    pub matching: Matching,
}

/// Partner of a member of `A_{a-1}` in `M_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpPartner {
    /// Index into `A_a`.
    Level(usize),
    /// A member of `X_{a,a}`.
    Block(u64),
    None,
}

impl BlockMatching {
    pub fn up(&self, lower_idx: usize) -> UpPartner {
        match self.matching.left_of(lower_idx) {
            Some(u) if (u as usize) < self.level_len => UpPartner::Level(u as usize),
            Some(u) => UpPartner::Block(self.upper[u as usize]),
            None => UpPartner::None,
        }
    }

    pub fn block_members(&self) -> &[u64] {
        &self.upper[self.level_len..]
    }

    /// Members of `X_{a,a}` that `M_a` leaves uncovered.
    pub fn uncovered_block_members(&self) -> usize {
        (self.level_len..self.upper.len())
            .filter(|&u| self.matching.right_of(u).is_none())
            .count()
    }

    pub fn covers_block_member(&self, z: u64) -> bool {
        let xs = self.block_members();
        match xs.binary_search(&z) {
            Ok(p) => self.matching.right_of(self.level_len + p).is_some(),
            Err(_) => false,
        }
    }
}

/// The block `X_{a,a}` if it takes part in gluing: present, whole, and its
/// row not dumped.
fn usable_diagonal_block(
    a: u32,
    asg: &IntervalAssignment,
    c: &PipelineConstants,
) -> Option<Vec<u64>> {
    if row_dumped(a, asg, c) {
        return None;
    }
    let blk = asg.block(a, a)?;
    if blk.shattered() {
        return None;
    }
    let mut xs = asg.elements(blk).to_vec();
    xs.sort_unstable();
    Some(xs)
}

/// Builds `M_a`: a complete matching `A_a -> A_{a-1}` extended to a maximum
/// matching of the comparability graph that also contains `X_{a,a}`.
pub fn build_block_matching(
    a: u32,
    asg: &IntervalAssignment,
    c: &PipelineConstants,
) -> Result<BlockMatching> {
    let base = complete_level_matching(c.n, a - 1)?;
    let level_len = base.upper.len();
    let mut upper = base.upper;
    if let Some(xs) = usable_diagonal_block(a, asg, c) {
        upper.extend(xs);
    }
    let lower = base.lower;
    let graph = DownGraph::new(c.n, &upper, &lower, c.m + a - 1)?;
    let pairs: Vec<(u32, u32)> = base.matching.pairs().collect();
    let start = Matching::from_pairs(upper.len(), lower.len(), &pairs)?;
    let matching = extend_to_maximum_covering(&graph, &start)?;
    if (0..level_len).any(|u| matching.right_of(u).is_none()) {
        return internal(format!("M_{a} lost a member of A_{a}"));
    }
    Ok(BlockMatching {
        a,
        lower,
        upper,
        level_len,
        matching,
    })
}

/// Per-row bookkeeping of the chain filter and the gluing step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RowCounts {
    pub a: u32,
    /// Row sent to the leftovers wholesale.
    pub dumped: bool,
    /// Number of whole blocks in the row.
    pub r: u32,
    pub block_size: u64,
    pub chains: usize,
    pub short: usize,
    pub irrelevant: usize,
    pub sad: usize,
    pub survivors: usize,
    /// `X_{a,a}` members left uncovered by `M_a`.
    pub diagonal_uncovered: usize,
    /// Chains of the level part ending in `A_{a-1}` that received nothing.
    pub incompatible: usize,
}

/// Surviving chains of one row and the elements it rejects.
#[derive(Clone, Debug, Default)]
pub struct BlockChains {
    pub survivors: Vec<Chain>,
    pub rejected: Vec<u64>,
    pub counts: RowCounts,
}

/// Minimum chain partition of `K_a` (the row's whole blocks) and the filter
/// into short, irrelevant, sad and surviving chains.
pub fn decompose_block(
    a: u32,
    asg: &IntervalAssignment,
    c: &PipelineConstants,
    bm: &BlockMatching,
) -> Result<BlockChains> {
    let mut counts = RowCounts {
        a,
        block_size: c.block_size(a),
        diagonal_uncovered: bm.uncovered_block_members(),
        ..RowCounts::default()
    };
    if row_dumped(a, asg, c) {
        counts.dumped = true;
        return Ok(BlockChains {
            counts,
            ..BlockChains::default()
        });
    }
    let whole: Vec<_> = asg.row(a).into_iter().filter(|b| !b.shattered()).collect();
    counts.r = whole.len() as u32;
    let mut k_a: Vec<u64> = Vec::new();
    for blk in &whole {
        k_a.extend_from_slice(asg.elements(blk));
    }
    let chains = min_chain_partition(&k_a, c.n)?;
    counts.chains = chains.len();
    let short_limit = counts.r as f64 - c.lambda_k();
    let diag = bm.block_members();
    let mut out = BlockChains::default();
    for ch in chains {
        let z = ch.min().expect("chains are nonempty");
        if ch.len() as f64 <= short_limit {
            counts.short += 1;
        } else if diag.binary_search(&z).is_err() {
            counts.irrelevant += 1;
        } else if !bm.covers_block_member(z) {
            counts.sad += 1;
        } else {
            out.survivors.push(ch);
            continue;
        }
        out.rejected.extend_from_slice(ch.elements());
    }
    counts.survivors = out.survivors.len();
    out.counts = counts;
    Ok(out)
}

/// Adds rejected row elements to the leftovers.
pub fn add_rejected(lo: &mut Leftovers, rows: &[BlockChains]) {
    for row in rows {
        lo.breakdown.rejected_chains += lo.insert_all(&row.rejected);
    }
}

/// Builds the level chains from `M_1, ..., M_k`, glues surviving row chains
/// onto compatible ones and hangs the leftovers on chains ending in `A_k`.
///
/// `matchings[a-1]` and `rows[a-1]` belong to row `a`. Row counts receive
/// their `incompatible` tallies here.
pub fn assemble_half_decomposition(
    c: &PipelineConstants,
    matchings: &[BlockMatching],
    rows: &mut [BlockChains],
    leftovers: &Leftovers,
) -> Result<ChainDecomposition> {
    let k = c.k as usize;
    if matchings.len() != k || rows.len() != k {
        return internal("one matching and one row result per a = 1..k expected");
    }
    let a0 = &matchings[0].lower;
    let mut chains: Vec<Chain> = Vec::with_capacity(a0.len());
    // (level index of the top, index of the top within its level)
    let mut tops: Vec<(usize, usize)> = Vec::with_capacity(a0.len());
    for (x_idx, &x) in a0.iter().enumerate() {
        let mut ch = Chain::singleton(x);
        let (mut lvl, mut idx) = (0usize, x_idx);
        while lvl < k {
            match matchings[lvl].up(idx) {
                UpPartner::Level(u) => {
                    lvl += 1;
                    idx = u;
                    ch.push(matchings[lvl - 1].upper[u]);
                }
                _ => break,
            }
        }
        chains.push(ch);
        tops.push((lvl, idx));
    }

    // Gluing.
    let by_min: Vec<HashMap<u64, usize>> = rows
        .iter()
        .map(|r| {
            r.survivors
                .iter()
                .enumerate()
                .map(|(i, ch)| (ch.min().expect("nonempty"), i))
                .collect()
        })
        .collect();
    let mut used = vec![vec![false; 0]; k];
    for (a_minus_1, row) in rows.iter().enumerate() {
        used[a_minus_1] = vec![false; row.survivors.len()];
    }
    for (ch, &(lvl, idx)) in chains.iter_mut().zip(&tops) {
        if lvl == k {
            continue;
        }
        let glued = match matchings[lvl].up(idx) {
            UpPartner::Block(z) => match by_min[lvl].get(&z) {
                Some(&i) => {
                    if used[lvl][i] {
                        return internal(format!("row {} chain glued twice", lvl + 1));
                    }
                    used[lvl][i] = true;
                    ch.extend_from(rows[lvl].survivors[i].elements());
                    true
                }
                None => false,
            },
            _ => false,
        };
        if !glued {
            rows[lvl].counts.incompatible += 1;
        }
    }
    for (a_minus_1, flags) in used.iter().enumerate() {
        if flags.iter().any(|&u| !u) {
            return internal(format!(
                "a surviving chain of row {} was not glued",
                a_minus_1 + 1
            ));
        }
    }

    // Leftover attachment along the chain cover of [n]^(>= m+k).
    let cover = upper_shadow_chain_cover(c.n, c.k)?;
    let mut attached = 0usize;
    for (ch, &(lvl, idx)) in chains.iter_mut().zip(&tops) {
        if lvl != k {
            continue;
        }
        let s = cover.chains[idx].elements();
        for &y in &s[1..] {
            if leftovers.contains(y) {
                ch.push(y);
                attached += 1;
            }
        }
    }
    if attached != leftovers.len() {
        return internal(format!(
            "attached {attached} leftovers, expected {}",
            leftovers.len()
        ));
    }

    let d = ChainDecomposition::new(c.n, Ground::UpperHalf, chains);
    let report = verify_chain_decomposition(&d);
    if !report.passed {
        return internal(format!("half decomposition invalid: {:?}", report.problems));
    }
    Ok(d)
}
