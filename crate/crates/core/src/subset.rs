//! Subsets of `[n]` as machine-word bitmasks, plus the binomial and
//! colex-ranking machinery every level-based routine relies on.
//!
//! Element `i` of `[n] = {1, ..., n}` is stored in bit `i - 1`. Within a
//! level, colex order coincides with increasing numeric order of the masks,
//! so the colex rank of a `k`-subset is also its position in the sorted level.

use std::fmt;

use crate::error::{domain, Error, Result};

/// Largest supported ground-set size.
pub const MAX_N: u32 = 63;

/// An element of `2^[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: u64,
    n: u32,
}

impl Subset {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return domain(format!("ground-set size {n} outside 1..={MAX_N}"));
        }
        if bits & !full_mask(n) != 0 {
            return domain(format!("mask {bits:#x} has bits outside [{n}]"));
        }
        Ok(Self { bits, n })
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements(elements: &[u32], n: u32) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return domain(format!("element {e} outside [{n}]"));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(bits, n)
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn size(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_subset_of(self, other: Subset) -> Result<bool> {
        check_dims(self, other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn complement(self) -> Subset {
        Subset {
            bits: !self.bits & full_mask(self.n),
            n: self.n,
        }
    }

    /// 1-based labels of the members, ascending.
    pub fn elements(self) -> Vec<u32> {
        BitIter(self.bits).map(|b| b + 1).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_dims(x: Subset, y: Subset) -> Result<()> {
    if x.n != y.n {
        return Err(Error::Dimension {
            expected: x.n,
            found: y.n,
        });
    }
    Ok(())
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn popcount(x: u64) -> u32 {
    x.count_ones()
}

#[inline]
pub fn is_subset(x: u64, y: u64) -> bool {
    x & !y == 0
}

/// Iterator over set-bit positions (0-based), ascending.
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `binom(n, floor(n/2))`, the width of `2^[n]`.
pub fn middle_binom(n: u32) -> u128 {
    binom(n, n / 2)
}

/// Pascal table of `u64` binomials for `0 <= n, k <= 64`.
#[derive(Clone)]
pub struct Binomials {
    table: Vec<[u64; 65]>,
}

impl Binomials {
    pub fn new() -> Self {
        let mut table = vec![[0u64; 65]; 65];
        for n in 0..65 {
            table[n][0] = 1;
            for k in 1..=n {
                table[n][k] = table[n - 1][k - 1].saturating_add(table[n - 1][k]);
            }
        }
        Self { table }
    }

    #[inline]
    pub fn get(&self, n: u32, k: u32) -> u64 {
        if k > n || n > 64 {
            0
        } else {
            self.table[n as usize][k as usize]
        }
    }

    /// Colex rank of `bits` among subsets of the same size.
    #[inline]
    pub fn colex_rank(&self, bits: u64) -> u64 {
        let mut rank = 0u64;
        for (i, pos) in BitIter(bits).enumerate() {
            rank += self.get(pos, i as u32 + 1);
        }
        rank
    }
}

impl Default for Binomials {
    fn default() -> Self {
        Self::new()
    }
}

/// Shared table; cheap to build but used from many places.
pub fn binomials() -> &'static Binomials {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Binomials> = OnceLock::new();
    TABLE.get_or_init(Binomials::new)
}

/// All `l`-subsets of `[n]` in increasing mask (= colex) order.
pub fn level(n: u32, l: u32) -> Vec<u64> {
    if l > n {
        return Vec::new();
    }
    let count = binom(n, l) as usize;
    let mut out = Vec::with_capacity(count);
    if l == 0 {
        out.push(0);
        return out;
    }
    let limit = 1u64 << n;
    let mut x: u64 = (1u64 << l) - 1;
    while x < limit {
        out.push(x);
        // Gosper's hack: next mask with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Calls `f` with every superset of `x` inside `[n]` that has exactly
/// `extra` more elements than `x`.
pub fn for_each_superset_adding(x: u64, n: u32, extra: u32, mut f: impl FnMut(u64)) {
    let free = full_mask(n) & !x;
    for_each_submask_of_size(free, extra, |add| f(x | add));
}

/// Calls `f` with every subset of `x` that has exactly `drop` fewer elements.
pub fn for_each_subset_removing(x: u64, drop: u32, mut f: impl FnMut(u64)) {
    for_each_submask_of_size(x, drop, |rem| f(x & !rem));
}

/// Enumerates the `size`-element submasks of `mask`.
pub fn for_each_submask_of_size(mask: u64, size: u32, mut f: impl FnMut(u64)) {
    let positions: Vec<u32> = BitIter(mask).collect();
    let avail = positions.len() as u32;
    if size > avail {
        return;
    }
    if size == 0 {
        f(0);
        return;
    }
    // Walk index combinations via Gosper over `avail` bits, then scatter.
    let limit = 1u64 << avail;
    let mut c: u64 = (1u64 << size) - 1;
    while c < limit {
        let mut out = 0u64;
        for i in BitIter(c) {
            out |= 1u64 << positions[i as usize];
        }
        f(out);
        let low = c & c.wrapping_neg();
        let r = c + low;
        c = (((r ^ c) >> 2) / low) | r;
    }
}

/// A set of masks over `2^[n]` stored as a dense bitmap (`n <= 32`).
#[derive(Clone, Debug)]
pub struct MaskSet {
    words: Vec<u64>,
}

impl MaskSet {
    pub fn new(n: u32) -> Self {
        assert!(n <= 32, "dense mask set limited to n <= 32");
        let len = ((1u64 << n) as usize).div_ceil(64);
        Self {
            words: vec![0; len.max(1)],
        }
    }

    #[inline]
    pub fn insert(&mut self, x: u64) -> bool {
        let (w, b) = ((x >> 6) as usize, x & 63);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        let (w, b) = ((x >> 6) as usize, x & 63);
        self.words.get(w).is_some_and(|v| v >> b & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Membership index over one level: dense colex-rank slots holding a
/// position in some caller-defined list.
#[derive(Clone, Debug)]
pub struct LevelIndex {
    slots: Vec<u32>,
}

impl LevelIndex {
    pub const ABSENT: u32 = u32::MAX;

    pub fn new(n: u32, l: u32) -> Self {
        Self {
            slots: vec![Self::ABSENT; binom(n, l) as usize],
        }
    }

    /// Index where `members[i]` maps to `i`.
    pub fn from_members(n: u32, l: u32, members: &[u64]) -> Self {
        let mut idx = Self::new(n, l);
        let t = binomials();
        for (i, &x) in members.iter().enumerate() {
            idx.slots[t.colex_rank(x) as usize] = i as u32;
        }
        idx
    }

    #[inline]
    pub fn set(&mut self, x: u64, value: u32) {
        let r = binomials().colex_rank(x) as usize;
        self.slots[r] = value;
    }

    #[inline]
    pub fn get(&self, x: u64) -> Option<u32> {
        let r = binomials().colex_rank(x) as usize;
        match self.slots.get(r) {
            Some(&v) if v != Self::ABSENT => Some(v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_is_sorted_and_ranked() {
        let t = binomials();
        for n in 1..=10 {
            for l in 0..=n {
                let lv = level(n, l);
                assert_eq!(lv.len() as u128, binom(n, l));
                assert!(lv.windows(2).all(|w| w[0] < w[1]));
                for (i, &x) in lv.iter().enumerate() {
                    assert_eq!(popcount(x), l);
                    assert_eq!(t.colex_rank(x), i as u64);
                }
            }
        }
    }

    #[test]
    fn binomials_agree() {
        let t = binomials();
        for n in 0..=63 {
            for k in 0..=n {
                assert_eq!(t.get(n, k) as u128, binom(n, k));
            }
        }
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(63, 31), 916_312_070_471_295_267);
    }

    #[test]
    fn superset_enumeration_counts() {
        let mut seen = Vec::new();
        for_each_superset_adding(0b0011, 5, 2, |y| seen.push(y));
        assert_eq!(seen.len(), 3);
        assert!(seen.iter().all(|&y| popcount(y) == 4 && y & 0b11 == 0b11));
        let mut subs = 0;
        for_each_subset_removing(0b1_1110, 2, |_| subs += 1);
        assert_eq!(subs, 6);
    }

    #[test]
    fn subset_validation() {
        assert!(Subset::new(0b100, 2).is_err());
        let x = Subset::from_elements(&[1, 3], 3).unwrap();
        assert_eq!(x.bits(), 0b101);
        assert_eq!(x.complement().elements(), vec![2]);
        let y = Subset::from_elements(&[1], 4).unwrap();
        assert!(matches!(x.is_subset_of(y), Err(Error::Dimension { .. })));
    }

    #[test]
    fn mask_set_roundtrip() {
        let mut s = MaskSet::new(6);
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert!(s.contains(5) && !s.contains(4));
        assert_eq!(s.len(), 1);
    }
}
