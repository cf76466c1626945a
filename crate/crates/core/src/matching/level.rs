use super::{maximum_matching, Adjacency, Matching};
use crate::error::{domain, internal, Result};
use crate::subset::{for_each_subset_removing, for_each_superset_adding, level, LevelIndex};

/// Implicit comparability graph from a family of "upper" sets (left side)
/// down to one full or partial level (right side). Neighbors of `x` are the
/// right members contained in `x`, found by removing elements from `x` and
/// looking the result up in a colex index.
pub struct DownGraph<'a> {
    upper: &'a [u64],
    lower: &'a [u64],
    lower_level: u32,
    index: LevelIndex,
}

impl<'a> DownGraph<'a> {
    /// `lower` must be sorted ascending and lie in level `lower_level`; every
    /// member of `upper` must have more than `lower_level` elements.
    pub fn new(n: u32, upper: &'a [u64], lower: &'a [u64], lower_level: u32) -> Result<Self> {
        if lower.iter().any(|x| x.count_ones() != lower_level) {
            return domain("lower side is not contained in a single level");
        }
        if lower.windows(2).any(|w| w[0] >= w[1]) {
            return domain("lower side must be sorted and duplicate free");
        }
        if upper.iter().any(|x| x.count_ones() <= lower_level) {
            return domain("upper side must lie strictly above the lower level");
        }
        Ok(Self {
            upper,
            lower,
            lower_level,
            index: LevelIndex::from_members(n, lower_level, lower),
        })
    }

    pub fn upper(&self) -> &[u64] {
        self.upper
    }

    pub fn lower(&self) -> &[u64] {
        self.lower
    }
}

impl Adjacency for DownGraph<'_> {
    fn left_len(&self) -> usize {
        self.upper.len()
    }

    fn right_len(&self) -> usize {
        self.lower.len()
    }

    fn neighbors(&self, u: usize, out: &mut Vec<u32>) {
        out.clear();
        let x = self.upper[u];
        let drop = x.count_ones() - self.lower_level;
        for_each_subset_removing(x, drop, |y| {
            if let Some(i) = self.index.get(y) {
                out.push(i);
            }
        });
        out.sort_unstable();
    }
}

/// A matching between two consecutive levels `A_{i+1}` (upper) and `A_i`.
#[derive(Clone, Debug)]
pub struct LevelMatching {
    pub upper: Vec<u64>,
    pub lower: Vec<u64>,
    pub matching: Matching,
}

impl LevelMatching {
    /// Partner in the lower level of `upper[u]`.
    pub fn down(&self, u: usize) -> Option<u64> {
        self.matching.right_of(u).map(|r| self.lower[r as usize])
    }

    /// Partner in the upper level of `lower[r]`.
    pub fn up(&self, r: usize) -> Option<u64> {
        self.matching.left_of(r).map(|u| self.upper[u as usize])
    }
}

/// Matching from `A_{i+1} = [n]^(m+i+1)` into `A_i = [n]^(m+i)` covering all
/// of `A_{i+1}`, with `m = ceil(n/2)`.
pub fn complete_level_matching(n: u32, i: u32) -> Result<LevelMatching> {
    let m = n.div_ceil(2);
    if i >= n - m {
        return domain(format!("level index {i} must be below n - m = {}", n - m));
    }
    let upper = level(n, m + i + 1);
    let lower = level(n, m + i);
    let g = DownGraph::new(n, &upper, &lower, m + i)?;
    let matching = maximum_matching(&g);
    if !matching.covers_all_left() {
        return internal(format!(
            "level matching A_{} -> A_{i} for n = {n} left {} vertices uncovered",
            i + 1,
            upper.len() - matching.size()
        ));
    }
    Ok(LevelMatching {
        upper,
        lower,
        matching,
    })
}

/// Normalized matching inequality `|X|/|A_i| <= |N(X)|/|A_j|` where `N(X)`
/// is the set of members of `A_j` comparable with some member of `X`.
pub fn lym_check(x: &[u64], i: u32, j: u32, n: u32) -> Result<bool> {
    let m = n.div_ceil(2);
    if i == j || i > n - m || j > n - m {
        return domain(format!(
            "levels ({i}, {j}) must be distinct and at most {}",
            n - m
        ));
    }
    let li = m + i;
    let lj = m + j;
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.iter().any(|&v| v.count_ones() != li || v >> n != 0) {
        return domain("X must lie inside A_i");
    }
    let mut nbrs: Vec<u64> = Vec::new();
    for &v in &xs {
        if lj < li {
            for_each_subset_removing(v, li - lj, |y| nbrs.push(y));
        } else {
            for_each_superset_adding(v, n, lj - li, |y| nbrs.push(y));
        }
    }
    nbrs.sort_unstable();
    nbrs.dedup();
    let a_i = crate::subset::binom(n, li);
    let a_j = crate::subset::binom(n, lj);
    Ok(xs.len() as u128 * a_j <= nbrs.len() as u128 * a_i)
}
