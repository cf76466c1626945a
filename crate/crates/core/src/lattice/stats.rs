use serde::Serialize;

use super::ChainDecomposition;
use crate::subset::middle_binom;

/// How close a decomposition is to having all chains of the average size
/// `s = 2^n / binom(n, floor(n/2))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityStats {
    pub s: f64,
    pub epsilon: f64,
    pub num_chains: usize,
    /// Fraction of chains whose size lies in `[s(1-eps), s(1+eps)]`.
    pub near_uniform_fraction: f64,
    /// Fraction of ground elements that sit in such chains.
    pub coverage_fraction: f64,
    /// `(size, count)` pairs, ascending by size.
    pub histogram: Vec<(usize, usize)>,
}

pub fn uniformity_stats(d: &ChainDecomposition, epsilon: f64) -> UniformityStats {
    let n = d.n;
    let s = (1u128 << n) as f64 / middle_binom(n) as f64;
    let lo = s * (1.0 - epsilon);
    let hi = s * (1.0 + epsilon);
    let histogram = d.profile().histogram();
    let (mut good_chains, mut good_elems, mut total_chains, mut total_elems) = (0, 0, 0, 0);
    for &(size, count) in &histogram {
        total_chains += count;
        total_elems += size * count;
        if (size as f64) >= lo && (size as f64) <= hi {
            good_chains += count;
            good_elems += size * count;
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    UniformityStats {
        s,
        epsilon,
        num_chains: total_chains,
        near_uniform_fraction: ratio(good_chains, total_chains),
        coverage_fraction: ratio(good_elems, total_elems),
        histogram,
    }
}
