//! Comparability subgraphs whose independence number is the width of
//! `2^[n]`.
//!
//! Given a partition of `2^[n]` into `binom(n, n/2)` chains, join two sets
//! when they share a chain. The chains are cliques covering every vertex, so
//! no independent set is larger than the number of chains, while the middle
//! level stays independent. The edge count `Σ binom(|C|, 2)` is all that is
//! stored; explicit edges are only produced for small `n`.

use serde::Serialize;

use crate::error::{capability, domain, Result};
use crate::lattice::{verify_chain_decomposition, ChainDecomposition, Ground};
use crate::subset::{is_subset, middle_binom};

/// Largest `n` for which [`SpernerGraph::edges`] lists edges.
pub const EDGE_LIST_MAX_N: u32 = 12;

#[derive(Clone, Debug)]
pub struct SpernerGraph {
    pub n: u32,
    pub num_edges: u128,
    /// Clique size of every chain, in decomposition order.
    pub clique_sizes: Vec<usize>,
    decomposition: ChainDecomposition,
}

/// Checks that `d` partitions `2^[n]` into exactly `binom(n, floor(n/2))`
/// chains and derives the edge count.
pub fn build_sperner_graph(d: &ChainDecomposition) -> Result<SpernerGraph> {
    if d.ground != Ground::Full {
        return domain(format!(
            "decomposition must cover 2^[n], got ground {}",
            d.ground.label()
        ));
    }
    let width = middle_binom(d.n);
    if d.num_chains() as u128 != width {
        return domain(format!(
            "{} chains would allow independent sets larger than {width}",
            d.num_chains()
        ));
    }
    let report = verify_chain_decomposition(d);
    if !report.passed {
        return domain(format!("not a chain partition: {:?}", report.problems));
    }
    let clique_sizes: Vec<usize> = d.chains.iter().map(|c| c.len()).collect();
    let num_edges = clique_sizes
        .iter()
        .map(|&c| (c as u128) * (c as u128).saturating_sub(1) / 2)
        .sum();
    Ok(SpernerGraph {
        n: d.n,
        num_edges,
        clique_sizes,
        decomposition: d.clone(),
    })
}

impl SpernerGraph {
    pub fn decomposition(&self) -> &ChainDecomposition {
        &self.decomposition
    }

    /// Every edge `(x, y)` with `x ⊂ y`, chain by chain.
    pub fn edges(&self) -> Result<impl Iterator<Item = (u64, u64)> + '_> {
        if self.n > EDGE_LIST_MAX_N {
            return capability(format!(
                "edge lists are produced for n <= {EDGE_LIST_MAX_N}, got {}",
                self.n
            ));
        }
        Ok(self.decomposition.chains.iter().flat_map(|c| {
            let e = c.elements();
            (0..e.len()).flat_map(move |i| (i + 1..e.len()).map(move |j| (e[i], e[j])))
        }))
    }

    /// `|E| / (2^n sqrt(n))`.
    pub fn normalized_edges(&self) -> f64 {
        self.num_edges as f64 / ((1u128 << self.n) as f64 * (self.n as f64).sqrt())
    }

    /// `|E|` is at least the Turán bound, checked in integers as
    /// `2M|E| >= 4^n - 2^n M`.
    pub fn meets_turan(&self) -> bool {
        let m = middle_binom(self.n);
        let v = 1u128 << self.n;
        2 * m * self.num_edges + v * m >= v * v
    }

    /// Sums of `|C|^2` over the long, medium and short chain classes.
    pub fn class_sums(&self) -> ClassSums {
        let nf = self.n as f64;
        let long = nf.sqrt() * nf.ln();
        let s = (1u128 << self.n) as f64 / middle_binom(self.n) as f64;
        let medium = s + nf.powf(0.5 - 1.0 / 20.0);
        let mut out = ClassSums {
            long_threshold: long,
            medium_threshold: medium,
            ..ClassSums::default()
        };
        for &c in &self.clique_sizes {
            let sq = (c * c) as u128;
            let cf = c as f64;
            if cf >= long {
                out.long += sq;
                out.long_count += 1;
            } else if cf > medium {
                out.medium += sq;
                out.medium_count += 1;
            } else {
                out.short += sq;
                out.short_count += 1;
            }
        }
        out
    }
}

/// Chains split by size: long `|C| >= sqrt(n) ln n`, medium
/// `s + n^(1/2 - 1/20) < |C| < sqrt(n) ln n`, short otherwise.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClassSums {
    pub long_threshold: f64,
    pub medium_threshold: f64,
    pub long: u128,
    pub medium: u128,
    pub short: u128,
    pub long_count: usize,
    pub medium_count: usize,
    pub short_count: usize,
}

/// Two-sided certificate for `α(G) = binom(n, floor(n/2))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaCertificate {
    pub alpha: u128,
    /// Number of cliques in the clique cover.
    pub clique_cover: u128,
    /// Size of the explicit independent set (the middle level).
    pub witness_size: u128,
    /// Cover checked: the chains are cliques partitioning every vertex.
    pub upper_certified: bool,
    /// Witness checked: pairwise incomparable and on distinct chains.
    pub lower_certified: bool,
}

impl AlphaCertificate {
    pub fn certified(&self) -> bool {
        self.upper_certified && self.lower_certified && self.clique_cover == self.witness_size
    }
}

pub fn certify_alpha(g: &SpernerGraph) -> AlphaCertificate {
    let d = &g.decomposition;
    let report = verify_chain_decomposition(d);
    let upper_certified = report.passed && d.chains.iter().all(|c| c.is_valid());

    let mid = g.n / 2;
    let mut witness_size = 0u128;
    let mut lower_certified = true;
    for ch in &d.chains {
        let hits: Vec<u64> = ch
            .elements()
            .iter()
            .copied()
            .filter(|x| x.count_ones() == mid)
            .collect();
        // Two members of the witness in one chain would be an edge.
        lower_certified &= hits.len() <= 1;
        witness_size += hits.len() as u128;
    }
    // Same-size distinct sets are incomparable; spot the claim directly on
    // the smallest cases where a full scan is cheap.
    if g.n <= EDGE_LIST_MAX_N {
        let witness: Vec<u64> = d
            .chains
            .iter()
            .flat_map(|c| c.elements().iter().copied())
            .filter(|x| x.count_ones() == mid)
            .collect();
        for (i, &x) in witness.iter().enumerate() {
            for &y in &witness[i + 1..] {
                lower_certified &= x != y && !is_subset(x, y) && !is_subset(y, x);
            }
        }
    }
    lower_certified &= witness_size == middle_binom(g.n);
    AlphaCertificate {
        alpha: d.num_chains() as u128,
        clique_cover: d.num_chains() as u128,
        witness_size,
        upper_certified,
        lower_certified,
    }
}

/// `4^n / (2M) - 2^n / 2` with `M = binom(n, floor(n/2))`.
pub fn turan_lower_bound(n: u32) -> f64 {
    let v = (1u128 << n) as f64;
    v * v / (2.0 * middle_binom(n) as f64) - v / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpernerSummary {
    pub n: u32,
    pub num_edges: u128,
    pub turan_bound: f64,
    pub meets_turan: bool,
    pub alpha: u128,
    pub alpha_certified: bool,
    pub normalized_edges: f64,
    pub class_sums: ClassSums,
}

pub fn sperner_summary(g: &SpernerGraph) -> SpernerSummary {
    let cert = certify_alpha(g);
    SpernerSummary {
        n: g.n,
        num_edges: g.num_edges,
        turan_bound: turan_lower_bound(g.n),
        meets_turan: g.meets_turan(),
        alpha: cert.alpha,
        alpha_certified: cert.certified(),
        normalized_edges: g.normalized_edges(),
        class_sums: g.class_sums(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Chain;
    use crate::symmetric::symmetric_decomposition;

    #[test]
    fn symmetric_n4() {
        let g = build_sperner_graph(&symmetric_decomposition(4).unwrap()).unwrap();
        assert_eq!(g.num_edges, 19);
        assert!(g.meets_turan());
        let cert = certify_alpha(&g);
        assert_eq!(cert.alpha, 6);
        assert!(cert.certified());
        assert_eq!(g.edges().unwrap().count(), 19);
    }

    #[test]
    fn n1_is_tight() {
        let g = build_sperner_graph(&symmetric_decomposition(1).unwrap()).unwrap();
        assert_eq!(g.num_edges, 1);
        assert_eq!(turan_lower_bound(1), 1.0);
        assert!(certify_alpha(&g).certified());
    }

    #[test]
    fn turan_n4() {
        assert!((turan_lower_bound(4) - (256.0 / 12.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn singleton_chains_rejected() {
        let chains = (0u64..8).map(Chain::singleton).collect();
        let d = ChainDecomposition::new(3, Ground::Full, chains);
        assert!(build_sperner_graph(&d).is_err());
    }
}
