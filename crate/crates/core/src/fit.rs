//! Least-squares helpers for log-log slope estimates.

use crate::error::{Error, Result};

/// Ordinary least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::domain("linear fit needs two or more paired points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("linear fit: all x identical"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of ln y against ln x. Non-positive entries are rejected.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::domain("log-log fit needs strictly positive data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.0)
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Log-log slope of `f` over the decade starting at `start`, sampled at
/// `points` logarithmically spaced abscissae.
pub fn decade_slope(start: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    if points < 20 {
        return Err(Error::domain("decade slope fits use at least 20 points"));
    }
    let xs = logspace(start, 10.0 * start, points);
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    loglog_slope(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_slope_is_exact() {
        let s = decade_slope(3.0, 25, |x| 7.0 * x.powf(-1.5)).unwrap();
        assert!((s + 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_short_or_nonpositive() {
        assert!(decade_slope(1.0, 10, |x| x).is_err());
        assert!(loglog_slope(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn spacing_endpoints() {
        let l = logspace(1e-2, 1e2, 5);
        assert!((l[0] - 1e-2).abs() < 1e-15 && (l[4] / 1e2 - 1.0).abs() < 1e-12);
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }
}
