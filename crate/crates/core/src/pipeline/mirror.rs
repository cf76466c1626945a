use crate::error::{domain, internal, Result};
use crate::lattice::{Chain, ChainDecomposition, Ground};
use crate::matching::{maximum_matching, DownGraph};
use crate::subset::{full_mask, level, LevelIndex};

/// Extends a chain partition of the upper half `[n]^(>= ceil(n/2))` whose
/// chains all start in the middle level `A_0` to a partition of `2^[n]`
/// with the same number of chains.
///
/// The chain through `x ∈ A_0` is prefixed by the complements of a partner
/// chain, listed in reverse. For even `n` the partner of `x` is the chain
/// through `x^c` (whose complemented minimum is `x` itself, so it is
/// skipped); for odd `n` it is the chain through `τ(x)^c`, where `τ` is a
/// perfect matching from `A_0` down to level `(n-1)/2` with `τ(x) ⊂ x`.
pub fn mirror_to_full_lattice(half: &ChainDecomposition, n: u32) -> Result<ChainDecomposition> {
    let m = n.div_ceil(2);
    if half.n != n {
        return domain(format!(
            "decomposition is over n = {}, expected {n}",
            half.n
        ));
    }
    let a0 = level(n, m);
    if half.chains.len() != a0.len() {
        return domain(format!(
            "expected {} chains, one per middle-level set, got {}",
            a0.len(),
            half.chains.len()
        ));
    }
    let index = LevelIndex::from_members(n, m, &a0);
    let mut by_start: Vec<Option<&Chain>> = vec![None; a0.len()];
    for ch in &half.chains {
        let x = match ch.min() {
            Some(x) if x.count_ones() == m && x & !full_mask(n) == 0 => x,
            _ => return domain("every chain must start in the middle level A_0"),
        };
        let i = index.get(x).expect("member of A_0") as usize;
        if by_start[i].replace(ch).is_some() {
            return domain("two chains start at the same set");
        }
    }
    let by_start: Vec<&Chain> = by_start
        .into_iter()
        .map(|c| c.expect("all filled"))
        .collect();
    let full = full_mask(n);

    // Partner index in A_0 and whether the partner's complemented minimum
    // coincides with x.
    let partner: Vec<(usize, bool)> = if n % 2 == 0 {
        a0.iter()
            .map(|&x| {
                (
                    index.get(!x & full).expect("complement in A_0") as usize,
                    true,
                )
            })
            .collect()
    } else {
        let below = level(n, m - 1);
        let g = DownGraph::new(n, &a0, &below, m - 1)?;
        let tau = maximum_matching(&g);
        if !tau.covers_all_left() || tau.size() != below.len() {
            return internal("no perfect matching between the two middle levels");
        }
        (0..a0.len())
            .map(|u| {
                let t = below[tau.right_of(u).expect("perfect") as usize];
                (
                    index.get(!t & full).expect("complement in A_0") as usize,
                    false,
                )
            })
            .collect()
    };

    let mut chains = Vec::with_capacity(a0.len());
    for (i, ch) in by_start.iter().enumerate() {
        let (p, skip_min) = partner[i];
        let lower = by_start[p].elements();
        let take = if skip_min { &lower[1..] } else { lower };
        let mut elems: Vec<u64> = take.iter().rev().map(|&y| !y & full).collect();
        elems.extend_from_slice(ch.elements());
        chains.push(Chain::from_raw(elems));
    }
    let mut d = ChainDecomposition::new(n, Ground::Full, chains);
    d.sort_by_min();
    Ok(d)
}
