//! Symmetric chain decompositions by bracket matching, the resulting size
//! profile, and chain covers of the upper levels built from level matchings.
//!
//! Reading the bits of a set from position 0 upward, a `0` is an opening
//! bracket and a `1` a closing one. Matched pairs never change along a chain;
//! the chain starts from the set whose unmatched positions are all `0` and
//! turns them into `1`s from left to right.

use crate::error::{capability, domain, Result};
use crate::lattice::{Chain, ChainDecomposition, Ground, SizeProfile};
use crate::matching::complete_level_matching;
use crate::subset::{binom, level, middle_binom};

/// Largest `n` for which decompositions are materialized.
pub const SYMMETRIC_MAX_N: u32 = 24;

/// Largest `n` for which the profile vectors are materialized.
pub const PROFILE_MAX_N: u32 = 30;

/// Positions (as a mask) of unmatched `1`s and unmatched `0`s of `x`.
fn unmatched(x: u64, n: u32) -> (u64, u64) {
    let mut open_stack = 0u32;
    // Positions of currently unmatched zeros, as a stack encoded in a mask;
    // the most recent one is the highest set bit.
    let mut open = 0u64;
    let mut unmatched_ones = 0u64;
    for i in 0..n {
        if x >> i & 1 == 0 {
            open |= 1 << i;
            open_stack += 1;
        } else if open_stack > 0 {
            open &= !(1u64 << (63 - open.leading_zeros()));
            open_stack -= 1;
        } else {
            unmatched_ones |= 1 << i;
        }
    }
    (unmatched_ones, open)
}

/// The symmetric chain through a chain start `x` (a set without unmatched
/// ones).
fn chain_from_start(x: u64, free: u64) -> Chain {
    let mut elems = Vec::with_capacity(free.count_ones() as usize + 1);
    let mut cur = x;
    elems.push(cur);
    let mut rest = free;
    while rest != 0 {
        cur |= rest & rest.wrapping_neg();
        rest &= rest - 1;
        elems.push(cur);
    }
    Chain::from_raw(elems)
}

/// Symmetric chain decomposition of `2^[n]`; chains sorted by minimum.
pub fn symmetric_decomposition(n: u32) -> Result<ChainDecomposition> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if n > SYMMETRIC_MAX_N {
        return capability(format!(
            "symmetric decomposition supports n <= {SYMMETRIC_MAX_N}, got {n}"
        ));
    }
    let mut chains = Vec::with_capacity(middle_binom(n) as usize);
    for x in 0..1u64 << n {
        let (ones, zeros) = unmatched(x, n);
        if ones == 0 {
            chains.push(chain_from_start(x, zeros));
        }
    }
    Ok(ChainDecomposition::new(n, Ground::Full, chains))
}

/// Sizes of a symmetric chain decomposition and their halves `ceil(σ/2)`,
/// which are the chain sizes it induces on the upper half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricProfile {
    pub sigma: SizeProfile,
    pub sigma_prime: SizeProfile,
}

/// Exactly `binom(n,k) - binom(n,k-1)` chains of size `n - 2k + 1`.
pub fn sigma_profile(n: u32) -> Result<SymmetricProfile> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if n > PROFILE_MAX_N {
        return capability(format!(
            "profile materialization supports n <= {PROFILE_MAX_N}"
        ));
    }
    let mut sigma = Vec::with_capacity(middle_binom(n) as usize);
    for k in 0..=n / 2 {
        let count = binom(n, k) - if k > 0 { binom(n, k - 1) } else { 0 };
        let size = (n - 2 * k + 1) as usize;
        sigma.extend(std::iter::repeat_n(size, count as usize));
    }
    let sigma_prime = sigma.iter().map(|s| s.div_ceil(2)).collect();
    Ok(SymmetricProfile {
        sigma: SizeProfile::new(sigma),
        sigma_prime: SizeProfile::new(sigma_prime),
    })
}

/// Partition of `[n]^(>= m+k)` into `binom(n, m+k)` saturated chains, one
/// starting at each member of `A_k`, obtained by composing complete
/// matchings `A_{i+1} -> A_i` for `i = k, ..., n-m-1`.
///
/// Chains are sorted by minimum, so chain `j` starts at the `j`-th set of
/// `A_k` in colex order.
pub fn upper_shadow_chain_cover(n: u32, k: u32) -> Result<ChainDecomposition> {
    if n == 0 || n > SYMMETRIC_MAX_N {
        return capability(format!(
            "upper shadow cover supports 1 <= n <= {SYMMETRIC_MAX_N}"
        ));
    }
    let m = n.div_ceil(2);
    if k > n - m {
        return domain(format!("k = {k} exceeds n - m = {}", n - m));
    }
    let starts = level(n, m + k);
    let mut chains: Vec<Chain> = starts.iter().map(|&x| Chain::singleton(x)).collect();
    // `tip[j]` is the index within the current level of chain j's top, if
    // the chain is still growing.
    let mut tip: Vec<Option<u32>> = (0..chains.len() as u32).map(Some).collect();
    for i in k..n - m {
        let lm = complete_level_matching(n, i)?;
        // Which chain owns each member of A_i.
        let mut owner = vec![u32::MAX; lm.lower.len()];
        for (j, t) in tip.iter().enumerate() {
            if let Some(pos) = *t {
                owner[pos as usize] = j as u32;
            }
        }
        let mut next_tip = vec![None; chains.len()];
        for (r, &j) in owner.iter().enumerate() {
            if j == u32::MAX {
                continue;
            }
            if let Some(u) = lm.matching.left_of(r) {
                chains[j as usize].push(lm.upper[u as usize]);
                next_tip[j as usize] = Some(u);
            }
        }
        tip = next_tip;
    }
    Ok(ChainDecomposition::new(
        n,
        Ground::LevelsFrom(m + k),
        chains,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::verify_chain_decomposition;

    #[test]
    fn small_cases() {
        let d = symmetric_decomposition(1).unwrap();
        assert_eq!(d.chains.len(), 1);
        assert_eq!(d.chains[0].elements(), &[0, 1]);
        let d = symmetric_decomposition(4).unwrap();
        assert!(verify_chain_decomposition(&d).passed);
        assert_eq!(d.profile().sizes(), &[5, 3, 3, 3, 1, 1]);
        let d = symmetric_decomposition(6).unwrap();
        assert_eq!(d.num_chains(), 20);
        assert_eq!(
            d.profile().histogram(),
            vec![(1, 5), (3, 9), (5, 5), (7, 1)]
        );
    }

    #[test]
    fn chains_are_symmetric_and_saturated() {
        for n in 1..=10 {
            let d = symmetric_decomposition(n).unwrap();
            for c in &d.chains {
                let e = c.elements();
                let lo = e[0].count_ones();
                let hi = e[e.len() - 1].count_ones();
                assert_eq!(lo + hi, n);
                for w in e.windows(2) {
                    assert_eq!(w[1] & w[0], w[0]);
                    assert_eq!(w[1].count_ones(), w[0].count_ones() + 1);
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let p = sigma_profile(2).unwrap();
        assert_eq!(p.sigma.sizes(), &[3, 1]);
        let p = sigma_profile(4).unwrap();
        assert_eq!(p.sigma.sizes(), &[5, 3, 3, 3, 1, 1]);
        assert_eq!(p.sigma_prime.sizes(), &[3, 2, 2, 2, 1, 1]);
        let p = sigma_profile(5).unwrap();
        assert_eq!(p.sigma.sizes(), &[6, 4, 4, 4, 4, 2, 2, 2, 2, 2]);
        assert_eq!(p.sigma_prime.sizes(), &[3, 2, 2, 2, 2, 1, 1, 1, 1, 1]);
        for n in 1..=16 {
            let p = sigma_profile(n).unwrap();
            assert_eq!(p.sigma.total() as u128, 1u128 << n);
            assert_eq!(p.sigma_prime.total() as u128, Ground::UpperHalf.size(n));
        }
    }

    #[test]
    fn upper_shadow_examples() {
        let d = upper_shadow_chain_cover(4, 2).unwrap();
        assert_eq!(d.chains.len(), 1);
        assert_eq!(d.chains[0].elements(), &[0b1111]);
        let d = upper_shadow_chain_cover(6, 2).unwrap();
        assert_eq!(d.chains.len(), 6);
        assert_eq!(d.element_count(), 7);
        assert_eq!(d.profile().sizes(), &[2, 1, 1, 1, 1, 1]);
        let d = upper_shadow_chain_cover(8, 1).unwrap();
        assert_eq!(d.chains.len(), 56);
        assert!(verify_chain_decomposition(&d).passed);
        assert!(upper_shadow_chain_cover(4, 3).is_err());
    }
}
