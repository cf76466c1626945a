use serde::Serialize;

use crate::error::{capability, internal, Result};
use crate::subset::binom;

/// Smallest and largest `n` the full construction is run for.
pub const PIPELINE_MIN_N: u32 = 6;
pub const PIPELINE_MAX_N: u32 = 24;

/// Scalars that drive the construction, with `A_i = [n]^(m+i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConstants {
    pub n: u32,
    /// `ceil(n/2)`.
    pub m: u32,
    /// `binom(n, m)`, the number of chains.
    pub big_m: u64,
    /// Average chain size `2^n / M`.
    pub s: f64,
    /// `ceil(s/2)`: number of levels above `A_0` handled by level matchings.
    pub k: u32,
    /// Highest level index `C0` still cut into blocks.
    pub c0: u32,
    /// `n^(-1/16)`.
    pub lambda: f64,
    /// Rows `a` up to this value are sent to the leftovers wholesale.
    pub small_a_threshold: u32,
}

impl PipelineConstants {
    /// `|A_i|`.
    pub fn level_size(&self, i: u32) -> u64 {
        binom(self.n, self.m + i) as u64
    }

    /// Block size `|A_{a-1}| - |A_a|` for every block of row `a`.
    pub fn block_size(&self, a: u32) -> u64 {
        self.level_size(a - 1) - self.level_size(a)
    }

    /// `lambda * k`, rounded up to at least one.
    pub fn lambda_k(&self) -> f64 {
        (self.lambda * self.k as f64).max(1.0)
    }

    /// `|B| = |[n]^(>= m)|`.
    pub fn upper_half_size(&self) -> u128 {
        (self.m..=self.n).map(|l| binom(self.n, l)).sum()
    }
}

pub fn compute_constants(n: u32) -> Result<PipelineConstants> {
    if !(PIPELINE_MIN_N..=PIPELINE_MAX_N).contains(&n) {
        return capability(format!(
            "the construction runs for {PIPELINE_MIN_N} <= n <= {PIPELINE_MAX_N}, got {n}"
        ));
    }
    let m = n.div_ceil(2);
    let big_m = binom(n, m);
    let s = (1u128 << n) as f64 / big_m as f64;
    let k = (s / 2.0).ceil() as u32;
    let nf = n as f64;
    let c0_raw = (nf * nf.ln() / 3.0).sqrt().ceil() as u32;
    let c0 = c0_raw.min(n - m);
    let lambda = nf.powf(-1.0 / 16.0);
    let small_a_threshold = nf.powf(0.1).floor() as u32;
    let c = PipelineConstants {
        n,
        m,
        big_m: big_m as u64,
        s,
        k,
        c0,
        lambda,
        small_a_threshold,
    };
    let b = c.upper_half_size();
    let (lo, hi) = ((k as u128 - 1) * big_m, (k as u128 + 1) * big_m);
    if !(lo < b && b < hi) {
        return internal(format!("|B| = {b} outside ({lo}, {hi}) for n = {n}"));
    }
    if c0 < 1 || k > n - m {
        return internal(format!(
            "degenerate constants for n = {n}: k = {k}, C0 = {c0}"
        ));
    }
    Ok(c)
}
