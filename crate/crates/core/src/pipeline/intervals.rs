use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PipelineConstants;
use crate::subset::level;

/// One interval `X_{a,b}` of the ordered upper levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub a: u32,
    pub b: u32,
    /// Offset of the block inside the ordered family `T`.
    pub start: usize,
    pub len: usize,
    /// Level indices `i` (of `A_i`) the block meets, ascending.
    pub phi: Vec<u32>,
    /// The block lies inside a single level.
    pub whole: bool,
    /// Whole, but reflagged because an earlier whole block of its row
    /// already occupies the same level.
    pub repaired: bool,
}

impl Block {
    /// Shattered geometrically or by row-disjointness repair.
    pub fn shattered(&self) -> bool {
        !self.whole || self.repaired
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// The random order on `T = A_{k+1} ∪ ... ∪ A_{C0}` and its cut into blocks.
#[derive(Clone, Debug)]
pub struct IntervalAssignment {
    /// `T` in the order used for cutting: levels ascending, each level
    /// shuffled.
    pub order: Vec<u64>,
    /// Blocks in the order they were cut (offset first, then row).
    pub blocks: Vec<Block>,
    /// Number of elements of `T` consumed by blocks; the rest is the tail.
    pub assigned: usize,
    /// Largest `mu <= k` whose diagonal `k - mu` is incomplete (0 if every
    /// diagonal is complete).
    pub mu: u32,
    /// Rows with at least `lambda k` shattered blocks.
    pub shattered_rows: Vec<u32>,
    pub repair_events: usize,
}

impl IntervalAssignment {
    pub fn block(&self, a: u32, b: u32) -> Option<&Block> {
        self.blocks.iter().find(|blk| blk.a == a && blk.b == b)
    }

    /// Blocks of row `a` in increasing `b`.
    pub fn row(&self, a: u32) -> Vec<&Block> {
        let mut row: Vec<&Block> = self.blocks.iter().filter(|blk| blk.a == a).collect();
        row.sort_by_key(|blk| blk.b);
        row
    }

    pub fn elements(&self, blk: &Block) -> &[u64] {
        &self.order[blk.range()]
    }

    pub fn tail(&self) -> &[u64] {
        &self.order[self.assigned..]
    }

    pub fn is_row_shattered(&self, a: u32) -> bool {
        self.shattered_rows.contains(&a)
    }

    pub fn shattered_block_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.shattered()).count()
    }
}

/// Index pairs `(a, b)`, `1 <= a <= b <= k`, by offset `b - a` then `a`.
pub fn block_index_order(k: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for offset in 0..k {
        for a in 1..=k - offset {
            out.push((a, a + offset));
        }
    }
    out
}

/// Shuffles each level of `T` with its own stream of a seeded ChaCha
/// generator, lays the levels out in increasing size and cuts the result
/// into consecutive blocks until the next block would not fit.
pub fn cut_intervals(c: &PipelineConstants, seed: u64) -> IntervalAssignment {
    let mut order = Vec::new();
    let mut level_bounds = Vec::new();
    for i in c.k + 1..=c.c0 {
        let mut lv = level(c.n, c.m + i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        lv.shuffle(&mut rng);
        let start = order.len();
        order.extend(lv);
        level_bounds.push((i, start, order.len()));
    }

    let mut blocks = Vec::new();
    let mut pos = 0usize;
    for (a, b) in block_index_order(c.k) {
        let len = c.block_size(a) as usize;
        if order.len() - pos < len || len == 0 {
            break;
        }
        let phi: Vec<u32> = level_bounds
            .iter()
            .filter(|&&(_, s, e)| s < pos + len && pos < e)
            .map(|&(i, _, _)| i)
            .collect();
        blocks.push(Block {
            a,
            b,
            start: pos,
            len,
            whole: phi.len() == 1,
            phi,
            repaired: false,
        });
        pos += len;
    }

    // Same-row whole blocks must sit in distinct levels.
    let mut repair_events = 0;
    for a in 1..=c.k {
        let mut used: Vec<u32> = Vec::new();
        let mut idx: Vec<usize> = (0..blocks.len()).filter(|&j| blocks[j].a == a).collect();
        idx.sort_by_key(|&j| blocks[j].b);
        for j in idx {
            if !blocks[j].whole {
                continue;
            }
            let lv = blocks[j].phi[0];
            if used.contains(&lv) {
                blocks[j].repaired = true;
                repair_events += 1;
            } else {
                used.push(lv);
            }
        }
    }

    let lambda_k = c.lambda_k();
    let shattered_rows = (1..=c.k)
        .filter(|&a| {
            let count = blocks.iter().filter(|b| b.a == a && b.shattered()).count();
            count as f64 >= lambda_k
        })
        .collect();

    let complete = |l: u32| blocks.iter().any(|blk| blk.a == c.k - l && blk.b == c.k);
    let mu = (1..=c.k).rev().find(|&mu| !complete(c.k - mu)).unwrap_or(0);

    IntervalAssignment {
        order,
        blocks,
        assigned: pos,
        mu,
        shattered_rows,
        repair_events,
    }
}
