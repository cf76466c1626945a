use serde::Serialize;

use crate::error::{capability, domain, Result};
use crate::subset::{full_mask, is_subset};

/// Largest number of points a grid may have.
pub const GRID_MAX_POINTS: u64 = 1 << 32;

/// `[k_1] × ... × [k_d]` with the coordinatewise order. Points are
/// identified by their mixed-radix index, first coordinate fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Grid {
    dims: Vec<u32>,
}

impl Grid {
    pub fn new(dims: Vec<u32>) -> Result<Grid> {
        if dims.is_empty() || dims.contains(&0) {
            return domain(format!(
                "grid needs d >= 1 and every k_i >= 1, got {dims:?}"
            ));
        }
        let size = dims
            .iter()
            .try_fold(1u64, |acc, &k| acc.checked_mul(k as u64));
        match size {
            Some(s) if s <= GRID_MAX_POINTS => Ok(Grid { dims }),
            _ => capability(format!("grid {dims:?} has too many points")),
        }
    }

    pub fn cube(k: u32, d: u32) -> Result<Grid> {
        Grid::new(vec![k; d as usize])
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn size(&self) -> u64 {
        self.dims.iter().map(|&k| k as u64).product()
    }

    /// 1-based coordinates of a point.
    pub fn coords(&self, mut p: u64) -> Vec<u32> {
        self.dims
            .iter()
            .map(|&k| {
                let c = (p % k as u64) as u32 + 1;
                p /= k as u64;
                c
            })
            .collect()
    }

    /// Index of the point with 1-based coordinates `c`.
    pub fn point(&self, c: &[u32]) -> Result<u64> {
        if c.len() != self.dims.len() {
            return domain(format!(
                "expected {} coordinates, got {}",
                self.dims.len(),
                c.len()
            ));
        }
        let mut idx = 0u64;
        for (i, (&x, &k)) in c.iter().zip(&self.dims).enumerate().rev() {
            if x == 0 || x > k {
                return domain(format!("coordinate {i} = {x} outside [1, {k}]"));
            }
            idx = idx * k as u64 + (x - 1) as u64;
        }
        Ok(idx)
    }

    fn combine(&self, a: u64, b: u64, pick: impl Fn(u64, u64) -> u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut stride) = (0u64, 1u64);
        for &k in &self.dims {
            let k = k as u64;
            out += pick(a % k, b % k) * stride;
            a /= k;
            b /= k;
            stride *= k;
        }
        out
    }

    pub fn leq(&self, a: u64, b: u64) -> bool {
        let (mut a, mut b) = (a, b);
        for &k in &self.dims {
            let k = k as u64;
            if a % k > b % k {
                return false;
            }
            a /= k;
            b /= k;
        }
        true
    }
}

/// The structure configurations are evaluated in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    /// `2^[n]`, points are bitmasks.
    Lattice {
        n: u32,
    },
    Grid(Grid),
}

impl Ambient {
    pub fn size(&self) -> u64 {
        match self {
            Ambient::Lattice { n } => 1u64 << n,
            Ambient::Grid(g) => g.size(),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            Ambient::Lattice { n } => p & !full_mask(*n) == 0,
            Ambient::Grid(g) => p < g.size(),
        }
    }

    pub fn leq(&self, a: u64, b: u64) -> bool {
        match self {
            Ambient::Lattice { .. } => is_subset(a, b),
            Ambient::Grid(g) => g.leq(a, b),
        }
    }

    pub fn meet(&self, a: u64, b: u64) -> u64 {
        match self {
            Ambient::Lattice { .. } => a & b,
            Ambient::Grid(g) => g.combine(a, b, u64::min),
        }
    }

    pub fn join(&self, a: u64, b: u64) -> u64 {
        match self {
            Ambient::Lattice { .. } => a | b,
            Ambient::Grid(g) => g.combine(a, b, u64::max),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Ambient::Lattice { n } => format!("2^[{n}]"),
            Ambient::Grid(g) => g
                .dims()
                .iter()
                .map(|k| format!("[{k}]"))
                .collect::<Vec<_>>()
                .join("×"),
        }
    }
}
