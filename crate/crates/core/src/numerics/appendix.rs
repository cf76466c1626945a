use serde::Serialize;

use super::quadrature::integrate;
use crate::error::{domain, Result};

/// Lower end `sqrt(pi/8)` of the domain of `f`.
pub fn r0() -> f64 {
    (std::f64::consts::PI / 8.0).sqrt()
}

pub const SOLVE_F_MAX_R: f64 = 4.0;

const INTEGRAL_TOL: f64 = 1e-12;

fn gauss(x: f64) -> f64 {
    (-2.0 * x * x).exp()
}

/// `∫_r^∞ e^{-2x^2} dx`; the integrand is below `e^{-128}` past `r + 8`.
fn tail(r: f64, rel_tol: f64) -> Result<f64> {
    integrate(gauss, r, r + 8.0, 0.0, rel_tol)
}

/// `∫_0^u (1 - e^{-2x^2}) dx`, accurate relative to its own size for small u.
fn defect(u: f64, rel_tol: f64) -> Result<f64> {
    integrate(|x| -(-2.0 * x * x).exp_m1(), 0.0, u, 0.0, rel_tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPointSolution {
    pub r: f64,
    pub f: f64,
    /// `sqrt(pi/8) - f(r)`, kept separately because it is tiny for large r.
    pub gap: f64,
    /// `|f - ∫_{sqrt(pi/8)-f}^r e^{-2x^2} dx|`.
    pub residual: f64,
}

impl FixedPointSolution {
    /// `L(r) = e^{-2r^2}`.
    pub fn l(&self) -> f64 {
        gauss(self.r)
    }

    /// `1 - e^{-2 (sqrt(pi/8) - f)^2}`.
    pub fn drop_term(&self) -> f64 {
        -(-2.0 * self.gap * self.gap).exp_m1()
    }

    /// `R(r) = 0.98 (1 - e^{-2 (sqrt(pi/8) - f)^2})`.
    pub fn big_r(&self) -> f64 {
        0.98 * self.drop_term()
    }

    /// `df/dr = e^{-2r^2} / (1 - e^{-2 (sqrt(pi/8) - f)^2})`.
    pub fn slope(&self) -> f64 {
        self.l() / self.drop_term()
    }
}

/// Solves `f = ∫_{sqrt(pi/8)-f}^r e^{-2x^2} dx` for `f`.
///
/// Since the Gaussian integrates to `sqrt(pi/8)` over the half line, the
/// equation is equivalent to `∫_0^u (1 - e^{-2x^2}) dx = ∫_r^∞ e^{-2x^2} dx`
/// with `u = sqrt(pi/8) - f`; the left side increases in `u`, so `u` is found
/// by bisection on `[0, sqrt(pi/8)]`. Working with `u` keeps full relative
/// precision when `f` is within `1e-5` of its cap.
pub fn solve_f(r: f64) -> Result<FixedPointSolution> {
    solve_f_with_tol(r, INTEGRAL_TOL)
}

pub fn solve_f_with_tol(r: f64, tol: f64) -> Result<FixedPointSolution> {
    let a = r0();
    if !(r >= a - 1e-15 && r <= SOLVE_F_MAX_R) {
        return domain(format!(
            "solve_f needs sqrt(pi/8) <= r <= {SOLVE_F_MAX_R}, got {r}"
        ));
    }
    let target = tail(r, tol)?;
    let (mut lo, mut hi) = (0.0f64, a);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if defect(mid, tol)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gap = 0.5 * (lo + hi);
    let f = a - gap;
    let direct = integrate(gauss, gap, r, INTEGRAL_TOL, 0.0)?;
    Ok(FixedPointSolution {
        r,
        f,
        gap,
        residual: (f - direct).abs(),
    })
}

/// One printed table entry, kept as text so its precision is known.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Printed {
    pub text: &'static str,
    pub value: f64,
    /// One unit in the last printed digit.
    pub unit: f64,
}

impl Printed {
    pub fn parse(text: &'static str) -> Printed {
        let (mantissa, exp) = match text.split_once('e') {
            Some((m, e)) => (m, e.parse::<i32>().expect("exponent")),
            None => (text, 0),
        };
        let decimals = mantissa.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
        Printed {
            text,
            value: text.parse().expect("printed value"),
            unit: 10f64.powi(exp - decimals),
        }
    }

    pub fn matches(&self, computed: f64) -> bool {
        (computed - self.value).abs() <= self.unit * (1.0 + 1e-9)
    }
}

/// `(r_i, printed L(r_i), printed R-column)`; row 0 is `sqrt(pi/8)`.
const TABLE: [(Option<f64>, Option<&str>, Option<&str>); 13] = [
    (None, Some("0.4559"), None),
    (Some(0.709375), Some("0.3655"), Some("0.4653")),
    (Some(0.809451), Some("0.2697"), Some("0.3742")),
    (Some(0.928680), Some("0.1781"), Some("0.2771")),
    (Some(1.069430), Some("0.1015"), Some("0.1838")),
    (Some(1.235140), Some("0.0473"), Some("0.1052")),
    (Some(1.430872), Some("0.01666"), Some("0.04931")),
    (Some(1.663845), Some("0.003939"), Some("0.01747")),
    (Some(1.943875), Some("0.0005222"), Some("0.004161")),
    (Some(2.283642), Some("2.953e-5"), Some("5.566e-4")),
    (Some(2.698861), Some("4.713e-7"), Some("3.181e-5")),
    (Some(3.208593), Some("1.142e-9"), Some("5.145e-7")),
    (Some(3.835987), None, Some("1.27e-9")),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixRow {
    pub i: usize,
    pub r: f64,
    pub f: f64,
    pub residual: f64,
    pub l: f64,
    /// `R(r_i)` including the factor 0.98.
    pub big_r: f64,
    /// `R(r_i) / 0.98`, the quantity the printed column agrees with.
    pub drop_term: f64,
    pub printed_l: Option<Printed>,
    pub printed_r: Option<Printed>,
    pub l_ok: bool,
    pub r_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLink {
    pub i: usize,
    pub l_i: f64,
    pub r_next: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixReport {
    pub rows: Vec<AppendixRow>,
    pub chaining: Vec<ChainLink>,
    pub rows_ok: usize,
    pub links_ok: usize,
    pub max_residual: f64,
    pub passed: bool,
}

/// Recomputes every table row and the chaining inequalities
/// `L(r_i) < R(r_{i+1})`, with `R` including the factor 0.98.
pub fn appendix_table_check() -> Result<AppendixReport> {
    let mut rows = Vec::with_capacity(TABLE.len());
    for (i, &(r, pl, pr)) in TABLE.iter().enumerate() {
        let sol = solve_f(r.unwrap_or_else(r0))?;
        let printed_l = pl.map(Printed::parse);
        let printed_r = pr.map(Printed::parse);
        rows.push(AppendixRow {
            i,
            r: sol.r,
            f: sol.f,
            residual: sol.residual,
            l: sol.l(),
            big_r: sol.big_r(),
            drop_term: sol.drop_term(),
            l_ok: printed_l.as_ref().is_none_or(|p| p.matches(sol.l())),
            r_ok: printed_r
                .as_ref()
                .is_none_or(|p| p.matches(sol.drop_term())),
            printed_l,
            printed_r,
        });
    }
    let chaining: Vec<ChainLink> = rows
        .windows(2)
        .map(|w| ChainLink {
            i: w[0].i,
            l_i: w[0].l,
            r_next: w[1].big_r,
            holds: w[0].l < w[1].big_r,
        })
        .collect();
    let rows_ok = rows.iter().filter(|r| r.l_ok && r.r_ok).count();
    let links_ok = chaining.iter().filter(|c| c.holds).count();
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(AppendixReport {
        passed: rows_ok == rows.len() && links_ok == chaining.len() && max_residual <= 1e-10,
        rows,
        chaining,
        rows_ok,
        links_ok,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_vanishes_at_left_end() {
        let s = solve_f(r0()).unwrap();
        assert!(s.f.abs() < 1e-12);
        assert!((s.l() - 0.4559).abs() < 1e-4);
    }

    #[test]
    fn printed_units() {
        assert_eq!(Printed::parse("0.4559").unit, 1e-4);
        assert!((Printed::parse("2.953e-5").unit - 1e-8).abs() < 1e-20);
        assert!((Printed::parse("0.0005222").unit - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn row_one_and_five() {
        let s = solve_f(0.709375).unwrap();
        assert!((s.drop_term() - 0.4653).abs() < 1e-4);
        let s = solve_f(1.235140).unwrap();
        assert!((s.l() - 0.0473).abs() < 1e-4);
        assert!((s.drop_term() - 0.1052).abs() <= 1e-4);
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(solve_f(0.5).is_err());
        assert!(solve_f(4.5).is_err());
    }
}
