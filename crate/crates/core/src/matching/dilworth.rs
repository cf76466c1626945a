use super::{maximum_matching, Adjacency};
use crate::error::{capability, domain, Result};
use crate::lattice::Chain;
use crate::subset::{binom, for_each_superset_adding, full_mask};

/// Largest family accepted by [`min_chain_partition`].
pub const DILWORTH_MAX_FAMILY: usize = 10_000_000;

/// Split graph of a family under strict containment: left copy `u` is joined
/// to right copy `v` iff `family[u] ⊊ family[v]`. Both sides use the same
/// indexing, the family sorted by mask.
pub struct ContainmentDag {
    n: u32,
    family: Vec<u64>,
    /// Per level: `(mask, index)` sorted by mask.
    by_level: Vec<Vec<(u64, u32)>>,
}

impl ContainmentDag {
    pub fn new(family: &[u64], n: u32) -> Result<Self> {
        let mut family = family.to_vec();
        family.sort_unstable();
        if family.windows(2).any(|w| w[0] == w[1]) {
            return domain("family contains duplicates");
        }
        if family.iter().any(|&x| x & !full_mask(n) != 0) {
            return domain(format!("family has members outside [{n}]"));
        }
        let mut by_level = vec![Vec::new(); n as usize + 1];
        for (i, &x) in family.iter().enumerate() {
            by_level[x.count_ones() as usize].push((x, i as u32));
        }
        Ok(Self {
            n,
            family,
            by_level,
        })
    }

    pub fn family(&self) -> &[u64] {
        &self.family
    }
}

impl Adjacency for ContainmentDag {
    fn left_len(&self) -> usize {
        self.family.len()
    }

    fn right_len(&self) -> usize {
        self.family.len()
    }

    fn neighbors(&self, u: usize, out: &mut Vec<u32>) {
        out.clear();
        let x = self.family[u];
        let size = x.count_ones();
        let free = self.n - size;
        for l in size + 1..=self.n {
            let members = &self.by_level[l as usize];
            if members.is_empty() {
                continue;
            }
            // Enumerate candidate supersets or scan the level, whichever is
            // fewer operations.
            let enum_cost = binom(free, l - size);
            if enum_cost < members.len() as u128 {
                for_each_superset_adding(x, self.n, l - size, |y| {
                    if let Ok(p) = members.binary_search_by_key(&y, |&(m, _)| m) {
                        out.push(members[p].1);
                    }
                });
            } else {
                out.extend(
                    members
                        .iter()
                        .filter(|&&(m, _)| m & x == x)
                        .map(|&(_, i)| i),
                );
            }
        }
        out.sort_unstable();
    }
}

/// Partition `family` into the fewest chains under strict containment.
///
/// Chains follow the successor map of a maximum matching in the split graph,
/// so their number is `|family| - matching size`. They are returned sorted by
/// minimum element.
pub fn min_chain_partition(family: &[u64], n: u32) -> Result<Vec<Chain>> {
    if family.len() > DILWORTH_MAX_FAMILY {
        return capability(format!(
            "family of {} sets exceeds the {DILWORTH_MAX_FAMILY} limit",
            family.len()
        ));
    }
    let dag = ContainmentDag::new(family, n)?;
    let matching = maximum_matching(&dag);
    let fam = dag.family();
    let mut chains = Vec::with_capacity(fam.len() - matching.size());
    for start in 0..fam.len() {
        if matching.left_of(start).is_some() {
            continue;
        }
        let mut chain = Chain::singleton(fam[start]);
        let mut cur = start;
        while let Some(next) = matching.right_of(cur) {
            cur = next as usize;
            chain.push(fam[cur]);
        }
        chains.push(chain);
    }
    chains.sort_by_key(|c| c.min());
    Ok(chains)
}
