//! Chains, chain decompositions and the basic measurements on `2^[n]`.

mod stats;
mod verify;

pub use stats::{uniformity_stats, UniformityStats};
pub use verify::{verify_chain_decomposition, VerificationReport};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capability, domain, Error, Result};
use crate::subset::{binom, check_dims, full_mask, is_subset, Subset};

/// Strictly increasing (under proper containment) sequence of masks.
///
/// Gaps between consecutive levels are allowed. `Chain::new` validates;
/// `from_raw` does not, so that untrusted input can still be handed to the
/// verifier and reported on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    elements: Vec<u64>,
}

impl Chain {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        let chain = Self { elements };
        if !chain.is_valid() {
            return domain("elements do not form a nonempty strictly increasing chain");
        }
        Ok(chain)
    }

    pub fn from_raw(elements: Vec<u64>) -> Self {
        Self { elements }
    }

    pub fn singleton(x: u64) -> Self {
        Self { elements: vec![x] }
    }

    pub fn is_valid(&self) -> bool {
        !self.elements.is_empty()
            && self
                .elements
                .windows(2)
                .all(|w| w[0] != w[1] && is_subset(w[0], w[1]))
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<u64> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub(crate) fn push(&mut self, x: u64) {
        self.elements.push(x);
    }

    pub(crate) fn extend_from(&mut self, other: &[u64]) {
        self.elements.extend_from_slice(other);
    }
}

/// The family a decomposition is supposed to partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ground {
    /// All of `2^[n]`.
    Full,
    /// `[n]^(>= ceil(n/2))`.
    UpperHalf,
    /// All sets with at least this many elements.
    LevelsFrom(u32),
    /// A sorted, deduplicated explicit family.
    Explicit(Vec<u64>),
}

impl Ground {
    pub fn explicit(mut members: Vec<u64>) -> Self {
        members.sort_unstable();
        members.dedup();
        Ground::Explicit(members)
    }

    pub fn size(&self, n: u32) -> u128 {
        match self {
            Ground::Full => 1u128 << n,
            Ground::UpperHalf => (n.div_ceil(2)..=n).map(|l| binom(n, l)).sum(),
            Ground::LevelsFrom(l) => (*l..=n).map(|i| binom(n, i)).sum(),
            Ground::Explicit(v) => v.len() as u128,
        }
    }

    pub fn contains(&self, n: u32, x: u64) -> bool {
        if x & !full_mask(n) != 0 {
            return false;
        }
        match self {
            Ground::Full => true,
            Ground::UpperHalf => x.count_ones() >= n.div_ceil(2),
            Ground::LevelsFrom(l) => x.count_ones() >= *l,
            Ground::Explicit(v) => v.binary_search(&x).is_ok(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Ground::Full => "full",
            Ground::UpperHalf => "upper-half",
            Ground::LevelsFrom(_) => "upper-levels",
            Ground::Explicit(_) => "explicit",
        }
    }
}

/// A claimed partition of a ground family into chains.
#[derive(Clone, Debug)]
pub struct ChainDecomposition {
    pub n: u32,
    pub ground: Ground,
    pub chains: Vec<Chain>,
}

impl ChainDecomposition {
    pub fn new(n: u32, ground: Ground, chains: Vec<Chain>) -> Self {
        Self { n, ground, chains }
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn element_count(&self) -> usize {
        self.chains.iter().map(Chain::len).sum()
    }

    pub fn profile(&self) -> SizeProfile {
        SizeProfile::new(self.chains.iter().map(Chain::len).collect())
    }

    /// Sorts chains by their minimum element (the dump order).
    pub fn sort_by_min(&mut self) {
        self.chains.sort_by_key(|c| c.min().unwrap_or(u64::MAX));
    }
}

/// Chain sizes sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeProfile {
    sizes: Vec<usize>,
}

impl SizeProfile {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `(size, count)` pairs sorted by size ascending.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &s in self.sizes.iter().rev() {
            match out.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

pub fn is_comparable(x: Subset, y: Subset) -> Result<bool> {
    check_dims(x, y)?;
    Ok(is_subset(x.bits(), y.bits()) || is_subset(y.bits(), x.bits()))
}

/// Sum of `1 / binom(n, |x|)` over the family.
pub fn lubell_mass(family: &[Subset], n: u32) -> Result<f64> {
    let mut per_level = vec![0u128; n as usize + 1];
    for x in family {
        if x.n() != n {
            return Err(Error::Dimension {
                expected: n,
                found: x.n(),
            });
        }
        per_level[x.size() as usize] += 1;
    }
    Ok(lubell_from_level_counts(n, &per_level))
}

/// Lubell mass from per-level member counts; one division per level.
pub fn lubell_from_level_counts(n: u32, counts: &[u128]) -> f64 {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(l, &c)| c as f64 / binom(n, l as u32) as f64)
        .sum()
}

/// Lubell mass of raw masks (no dimension checks).
pub fn lubell_mass_masks(family: &[u64], n: u32) -> f64 {
    let mut per_level = vec![0u128; n as usize + 1];
    for &x in family {
        per_level[x.count_ones() as usize] += 1;
    }
    lubell_from_level_counts(n, &per_level)
}

/// Largest `n` accepted by the exhaustive comparability-edge count.
pub const EDGE_COUNT_MAX_N: u32 = 20;

/// Counts strictly comparable unordered pairs of `2^[n]` by enumerating
/// every proper submask of every set.
pub fn comparability_edge_count(n: u32) -> Result<u128> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if n > EDGE_COUNT_MAX_N {
        return capability(format!(
            "exhaustive edge count supports n <= {EDGE_COUNT_MAX_N}, got {n}"
        ));
    }
    let total: u64 = (0u64..1 << n)
        .into_par_iter()
        .map(|y| {
            let mut count = 0u64;
            let mut sub = y;
            while sub != 0 {
                sub = (sub - 1) & y;
                count += 1;
            }
            count
        })
        .sum();
    Ok(total as u128)
}

/// True iff every prefix sum of `reference` is at least the matching prefix
/// sum of `candidate`.
pub fn dominance_check(candidate: &SizeProfile, reference: &SizeProfile) -> Result<bool> {
    if candidate.total() != reference.total() {
        return domain(format!(
            "profiles have different totals: {} vs {}",
            candidate.total(),
            reference.total()
        ));
    }
    let len = candidate.len().max(reference.len());
    let (mut c_sum, mut r_sum) = (0usize, 0usize);
    for i in 0..len {
        c_sum += candidate.sizes().get(i).copied().unwrap_or(0);
        r_sum += reference.sizes().get(i).copied().unwrap_or(0);
        if r_sum < c_sum {
            return Ok(false);
        }
    }
    Ok(true)
}
