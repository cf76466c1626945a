use std::f64::consts::PI;

use crate::error::{domain, Result};

/// `c (2d / (pi n))^(alpha/2) 2^n`, the upper bound on `ex(n, C)` obtained
/// from `ex(k, d, C) <= c k^(d - alpha)`.
pub fn theorem32_bound(n: u32, d: u32, c: f64, alpha: f64) -> Result<f64> {
    if n == 0 || d == 0 {
        return domain("n and d must be positive");
    }
    if !(c > 0.0) || !(alpha > 0.0 && alpha <= d as f64) {
        return domain(format!(
            "need c > 0 and 0 < alpha <= d, got c = {c}, alpha = {alpha}"
        ));
    }
    Ok(c * (2.0 * d as f64 / (PI * n as f64)).powf(alpha / 2.0) * 2f64.powi(n as i32))
}

/// Coefficient of `2^n n^(-1/4)` in the refined bound for the
/// 2-dimensional Boolean algebra, `(2/pi)^(1/4)`.
pub fn refined_boolean_coefficient() -> f64 {
    (2.0 / PI).powf(0.25)
}

/// `(2 / (pi n))^(1/4) 2^n`, from the asymmetric split
/// `n_1 = floor(n^(2/3))`.
pub fn refined_boolean_bound(n: u32) -> Result<f64> {
    if n == 0 {
        return domain("n must be positive");
    }
    Ok((2.0 / (PI * n as f64)).powf(0.25) * 2f64.powi(n as i32))
}

/// The split `(n_1, n - n_1)` with `n_1 = floor(n^(2/3))` used by the
/// refined bound.
pub fn refined_split(n: u32) -> (u32, u32) {
    let n1 = (n as f64).powf(2.0 / 3.0).floor() as u32;
    // Guard against cube roots landing just below an integer.
    let n1 = if (n1 + 1).pow(3) <= n * n { n1 + 1 } else { n1 };
    (n1, n - n1)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn sperner_instance() {
        let n = 100;
        let b = theorem32_bound(n, 1, 1.0, 1.0).unwrap();
        assert!((b / ((2.0 / (PI * n as f64)).sqrt() * 2f64.powi(100)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn union_free_coefficient() {
        let n = 1000;
        let b = theorem32_bound(n, 2, 2.0, 1.0).unwrap();
        let ratio = b / ((2.0 / (PI * n as f64)).sqrt() * 2f64.powi(n as i32));
        assert!((ratio - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn boolean_coefficients() {
        assert!((refined_boolean_coefficient() - 0.8932).abs() < 1e-4);
        let n = 64;
        let plain = theorem32_bound(n, 2, 1.0, 0.5).unwrap();
        assert!((plain / ((4.0 / (PI * n as f64)).powf(0.25) * 2f64.powi(64)) - 1.0).abs() < 1e-12);
        assert!(refined_boolean_bound(n).unwrap() < plain);
        assert_eq!(refined_split(27), (9, 18));
    }

    #[test]
    fn preconditions() {
        assert!(theorem32_bound(10, 2, 0.0, 1.0).is_err());
        assert!(theorem32_bound(10, 1, 1.0, 1.5).is_err());
    }
}
