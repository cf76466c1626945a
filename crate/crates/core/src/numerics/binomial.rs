use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

/// Largest `n` handled at all; beyond this only log-gamma would be usable
/// and the parameter grids get too long.
pub const ESTIMATE_MAX_N: u64 = 1_000_000;
/// Rows up to this `n` use exact big-integer binomials.
pub const EXACT_MAX_N: u64 = 200;
/// Asymptotic parts are asserted from this `n` on and only reported below.
pub const ASSERT_FROM_N: u64 = 10_000;

/// One binomial row, exact or in logarithms, with tail sums
/// `Σ_{i >= j} binom(n, i) / 2^n`.
struct Row {
    n: u64,
    /// `binom(n, i) / 2^n`.
    scaled: Vec<f64>,
    /// Suffix sums of `scaled`.
    tails: Vec<f64>,
    exact: Option<Vec<BigUint>>,
}

impl Row {
    fn new(n: u64) -> Row {
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let exact = (n <= EXACT_MAX_N).then(|| {
            let mut row = vec![BigUint::one()];
            for _ in 0..n {
                let mut next = Vec::with_capacity(row.len() + 1);
                next.push(BigUint::one());
                for w in row.windows(2) {
                    next.push(&w[0] + &w[1]);
                }
                next.push(BigUint::one());
                row = next;
            }
            row
        });
        let scaled: Vec<f64> = match &exact {
            Some(row) => {
                let denom = BigUint::one() << n;
                let dn = denom.to_f64().expect("2^200 fits in f64");
                row.iter().map(|b| b.to_f64().expect("fits") / dn).collect()
            }
            None => {
                let lg = ln_gamma(n as f64 + 1.0);
                (0..=n)
                    .map(|i| {
                        (lg - ln_gamma(i as f64 + 1.0) - ln_gamma((n - i) as f64 + 1.0) - ln2n)
                            .exp()
                    })
                    .collect()
            }
        };
        let mut tails = vec![0.0; scaled.len() + 1];
        for i in (0..scaled.len()).rev() {
            tails[i] = tails[i + 1] + scaled[i];
        }
        Row {
            n,
            scaled,
            tails,
            exact,
        }
    }

    fn m(&self) -> u64 {
        self.n.div_ceil(2)
    }

    fn at(&self, i: u64) -> f64 {
        self.scaled.get(i as usize).copied().unwrap_or(0.0)
    }

    fn tail_from(&self, i: u64) -> f64 {
        self.tails.get(i as usize).copied().unwrap_or(0.0)
    }

    fn exact_at(&self, i: u64) -> Option<BigUint> {
        self.exact
            .as_ref()
            .map(|r| r.get(i as usize).cloned().unwrap_or_else(BigUint::zero))
    }
}

/// Per-`n` outcome. `ratio` is the part-specific quantity described on
/// [`binomial_estimate_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub n: u64,
    pub l_min: u64,
    pub l_max: u64,
    pub checked: usize,
    pub violations: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Largest `|ratio - 1|` (parts 1 and 2).
    pub max_deviation: f64,
    pub exact: bool,
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub part: u32,
    pub statement: &'static str,
    pub tolerance: &'static str,
    pub rows: Vec<EstimateRow>,
    pub max_deviation: f64,
    /// Violations in asserted rows.
    pub violations: usize,
    pub passed: bool,
}

struct Acc {
    row: EstimateRow,
}

impl Acc {
    fn new(n: u64, exact: bool, asserted: bool) -> Acc {
        Acc {
            row: EstimateRow {
                n,
                l_min: u64::MAX,
                l_max: 0,
                checked: 0,
                violations: 0,
                min_ratio: f64::INFINITY,
                max_ratio: f64::NEG_INFINITY,
                max_deviation: 0.0,
                exact,
                asserted,
            },
        }
    }

    fn push(&mut self, l: u64, ratio: f64, ok: bool) {
        let r = &mut self.row;
        r.l_min = r.l_min.min(l);
        r.l_max = r.l_max.max(l);
        r.checked += 1;
        r.min_ratio = r.min_ratio.min(ratio);
        r.max_ratio = r.max_ratio.max(ratio);
        r.max_deviation = r.max_deviation.max((ratio - 1.0).abs());
        r.violations += usize::from(!ok);
    }
}

fn isqrt_below(n: u64) -> u64 {
    // Largest l with l^2 < n.
    let mut l = (n as f64).sqrt() as u64;
    while l * l >= n && l > 0 {
        l -= 1;
    }
    while (l + 1) * (l + 1) < n {
        l += 1;
    }
    l
}

/// Checks one part of the binomial estimates over `n_grid`.
///
/// * 1: ratio `M sqrt(n) / 2^n / sqrt(2/pi)`, asserted within `1e-4`.
/// * 2: ratio `binom(n, m+l) / (M e^{-2l^2/n})` for `1 <= l <= n^0.6`,
///   asserted within 5%.
/// * 3: ratio of `Σ_{i>m+l} binom(n,i)` to `2^n e^{-2l^2/n}` for every
///   `l >= 1`; a violation is a ratio above 1.
/// * 4: both bounds `M(1 - 2l^2/n) <= binom(n, m+l) < M(1 - l^2/(4n))` for
///   `0 < l < sqrt(n)`, in integers when exact; ratio `binom(n,m+l)/M`.
/// * 5: ratio `(binom(n,m+l) - binom(n,m+l+1)) / (l 2^n n^{-3/2})` for
///   `1 <= l < 10 sqrt(n)`, asserted inside `[0.5, 2.1]`.
/// * 6: ratio of `Σ_{i>=m+l} binom(n,i)` to
///   `e^{-7} 2^n e^{-2l^2/n} sqrt(n)/l` for `sqrt(n) <= l <= n^0.6`;
///   a violation is a ratio not above 1.
///
/// Parts 3 and 4 are asserted at every `n`; the others from
/// [`ASSERT_FROM_N`] on.
pub fn binomial_estimate_check(part: u32, n_grid: &[u64]) -> Result<EstimateReport> {
    let (statement, tolerance) = match part {
        1 => (
            "M = (sqrt(2/pi) + o(1)) 2^n / sqrt(n)",
            "relative error < 1e-4",
        ),
        2 => (
            "binom(n, m+l) = (1 + o(1)) M e^{-2l^2/n}, l = o(n^{2/3})",
            "relative error <= 0.05 for l <= n^0.6",
        ),
        3 => (
            "sum_{i>m+l} binom(n,i) <= 2^n e^{-2l^2/n}, l > 0",
            "exact inequality",
        ),
        4 => (
            "M(1 - 2l^2/n) <= binom(n,m+l) < M(1 - l^2/(4n)), 0 < l < sqrt(n)",
            "exact inequality",
        ),
        5 => (
            "binom(n,m+l) - binom(n,m+l+1) = Theta(l 2^n n^{-3/2}), l < 10 sqrt(n)",
            "ratio in [0.5, 2.1]",
        ),
        6 => (
            "sum_{i>=m+l} binom(n,i) >= (e^{-7} + o(1)) 2^n e^{-2l^2/n} sqrt(n)/l",
            "strict inequality, sqrt(n) <= l <= n^0.6",
        ),
        _ => return domain(format!("part must be 1..=6, got {part}")),
    };
    if n_grid.is_empty() {
        return domain("empty n grid");
    }
    if let Some(&bad) = n_grid.iter().find(|&&n| n == 0 || n > ESTIMATE_MAX_N) {
        return domain(format!("n must be in 1..={ESTIMATE_MAX_N}, got {bad}"));
    }
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        rows.push(check_row(part, n));
    }
    let violations = rows
        .iter()
        .filter(|r| r.asserted)
        .map(|r| r.violations)
        .sum();
    let max_deviation = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    Ok(EstimateReport {
        part,
        statement,
        tolerance,
        rows,
        max_deviation,
        violations,
        passed: violations == 0,
    })
}

fn check_row(part: u32, n: u64) -> EstimateRow {
    let row = Row::new(n);
    let nf = n as f64;
    let m = row.m();
    let asymptotic = n >= ASSERT_FROM_N;
    let mut acc = Acc::new(n, row.exact.is_some(), matches!(part, 3 | 4) || asymptotic);
    let big_m = row.at(m);
    match part {
        1 => {
            let ratio = big_m * nf.sqrt() / (2.0 / std::f64::consts::PI).sqrt();
            acc.push(0, ratio, (ratio - 1.0).abs() < 1e-4);
        }
        2 => {
            let top = nf.powf(0.6).floor() as u64;
            for l in 1..=top.min(n - m) {
                let ratio = row.at(m + l) / (big_m * (-2.0 * (l * l) as f64 / nf).exp());
                acc.push(l, ratio, (ratio - 1.0).abs() <= 0.05);
            }
        }
        3 => {
            for l in 1..=n - m {
                let bound = (-2.0 * (l * l) as f64 / nf).exp();
                let ratio = row.tail_from(m + l + 1) / bound;
                acc.push(l, ratio, ratio <= 1.0);
            }
        }
        4 => {
            for l in 1..=isqrt_below(n).min(n - m) {
                let ratio = row.at(m + l) / big_m;
                let ok = match (row.exact_at(m), row.exact_at(m + l)) {
                    (Some(bm), Some(b)) => {
                        // n b >= M (n - 2l^2)  and  4 n b < M (4n - l^2)
                        let (nn, l2) = (BigUint::from(n), BigUint::from(l * l));
                        let lower = if 2 * l * l >= n {
                            true
                        } else {
                            &nn * &b >= &bm * (&nn - BigUint::from(2u32) * &l2)
                        };
                        let upper = BigUint::from(4u32) * &nn * &b
                            < &bm * (BigUint::from(4u32) * &nn - &l2);
                        lower && upper
                    }
                    _ => {
                        let x = (l * l) as f64 / nf;
                        ratio >= 1.0 - 2.0 * x && ratio < 1.0 - x / 4.0
                    }
                };
                acc.push(l, ratio, ok);
            }
        }
        5 => {
            let top = (10.0 * nf.sqrt()).ceil() as u64;
            for l in (1..top).filter(|&l| (l as f64) < 10.0 * nf.sqrt() && m + l < n) {
                let diff = match (row.exact_at(m + l), row.exact_at(m + l + 1)) {
                    (Some(a), Some(b)) => {
                        (a - b).to_f64().expect("fits")
                            / (BigUint::one() << n).to_f64().expect("fits")
                    }
                    // binom(n, j) - binom(n, j+1) = binom(n, j) (2j + 1 - n) / (j + 1)
                    _ => {
                        let j = (m + l) as f64;
                        row.at(m + l) * (2.0 * j + 1.0 - nf) / (j + 1.0)
                    }
                };
                let ratio = diff / (l as f64 * nf.powf(-1.5));
                acc.push(l, ratio, (0.5..=2.1).contains(&ratio));
            }
        }
        6 => {
            let lo = (nf.sqrt()).ceil() as u64;
            let hi = nf.powf(0.6).floor() as u64;
            for l in lo..=hi.min(n - m) {
                let lf = l as f64;
                let bound = (-7.0f64).exp() * (-2.0 * lf * lf / nf).exp() * nf.sqrt() / lf;
                let ratio = row.tail_from(m + l) / bound;
                acc.push(l, ratio, ratio > 1.0);
            }
        }
        _ => unreachable!("part validated by caller"),
    }
    let mut out = acc.row;
    if out.checked == 0 {
        out.l_min = 0;
        out.min_ratio = f64::NAN;
        out.max_ratio = f64::NAN;
    }
    out
}

/// Parameter grid used when none is given.
pub fn default_grid(part: u32) -> Vec<u64> {
    match part {
        3 | 4 => (1..=EXACT_MAX_N).collect(),
        _ => vec![100, 1_000, 10_000],
    }
}
