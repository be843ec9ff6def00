//! Tridiagonal solve by Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Solves `A x = b` for tridiagonal `A` given by its sub-diagonal `dl`,
/// diagonal `d` and super-diagonal `du`. All inputs are overwritten; the
/// solution is left in `b`.
pub fn solve_tridiagonal(dl: &mut [f64], d: &mut [f64], du: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = d.len();
    if dl.len() + 1 != n.max(1) || du.len() + 1 != n.max(1) || b.len() != n {
        return Err(Error::domain("tridiagonal bands have inconsistent lengths"));
    }
    if n == 0 {
        return Ok(());
    }
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(Error::Singular(format!("zero pivot in row {i}")));
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            // dl now holds the second super-diagonal of U.
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        return Err(Error::Singular(format!("zero pivot in row {}", n - 1)));
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(dl: &[f64], d: &[f64], du: &[f64], x: &[f64]) -> Vec<f64> {
        let n = d.len();
        (0..n)
            .map(|i| {
                let mut s = d[i] * x[i];
                if i > 0 {
                    s += dl[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += du[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    #[test]
    fn solves_system_needing_pivoting() {
        let dl = vec![5.0, -1.0, 7.0, 0.5];
        let d = vec![0.0, 1e-3, 2.0, -3.0, 1.0];
        let du = vec![1.0, 4.0, -2.0, 6.0];
        let x: Vec<f64> = vec![1.0, -2.0, 3.0, 0.5, -1.5];
        let mut b = apply(&dl, &d, &du, &x);
        let (mut a, mut bb, mut c) = (dl.clone(), d.clone(), du.clone());
        solve_tridiagonal(&mut a, &mut bb, &mut c, &mut b).unwrap();
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12, "{u} vs {v}");
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let (mut dl, mut d, mut du) = (vec![0.0], vec![0.0, 1.0], vec![0.0]);
        let mut b = vec![1.0, 1.0];
        assert!(matches!(
            solve_tridiagonal(&mut dl, &mut d, &mut du, &mut b),
            Err(Error::Singular(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn random_systems(seed in proptest::collection::vec(-1.0f64..1.0, 3 * 12 + 12)) {
            let n = 12;
            let dl: Vec<f64> = seed[..n - 1].to_vec();
            let d: Vec<f64> = seed[n..2 * n].iter().map(|v| v + 3.0 * v.signum()).collect();
            let du: Vec<f64> = seed[2 * n..3 * n - 1].to_vec();
            let x: Vec<f64> = seed[3 * n..].to_vec();
            let mut b = apply(&dl, &d, &du, &x);
            let (mut a, mut bb, mut c) = (dl.clone(), d.clone(), du.clone());
            solve_tridiagonal(&mut a, &mut bb, &mut c, &mut b).unwrap();
            for (u, v) in b.iter().zip(&x) {
                proptest::prop_assert!((u - v).abs() < 1e-10);
            }
        }
    }
}
