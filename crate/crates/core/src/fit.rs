//! Least-squares helpers for exponents and phase slopes.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope·x + intercept`. Needs at least two
/// distinct abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mean_x, yi - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: mean_y - slope * mean_x, r_squared })
}

/// Exponent `k` of `y ∝ x^k` from a log-log fit. Non-positive points are skipped.
pub fn power_law_exponent(x: &[f64], y: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    linear_fit(&lx, &ly).map(|f| f.slope)
}

/// Removes `2π` jumps between consecutive phases.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &ph in phases {
        if let Some(p) = prev {
            let mut jump = ph + offset - p;
            while jump > PI {
                offset -= 2.0 * PI;
                jump -= 2.0 * PI;
            }
            while jump <= -PI {
                offset += 2.0 * PI;
                jump += 2.0 * PI;
            }
        }
        let v = ph + offset;
        out.push(v);
        prev = Some(v);
    }
    out
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!((f.intercept - 1.0).abs() < 1e-15);
        assert!((f.r_squared - 1.0).abs() < 1e-15);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn power_law() {
        let x = log_space(1e-3, 1e-1, 20);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-2.0)).collect();
        assert!((power_law_exponent(&x, &y).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let raw: Vec<f64> = (0..50).map(|k| {
            let t = -0.9 * k as f64;
            (t + PI).rem_euclid(2.0 * PI) - PI
        }).collect();
        let un = unwrap_phases(&raw);
        for (k, v) in un.iter().enumerate() {
            assert!((v - (-0.9 * k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn spacing() {
        let g = log_space(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(lin_space(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
