//! Thomas algorithm for tridiagonal systems.
//!
//! `sub[0]` and `sup[n-1]` are ignored.

use crate::error::{Error, Result};

/// Solves `T x = rhs` in place. `scratch` must hold `n` values.
pub fn solve_in_place(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n || scratch.len() < n {
        return Err(Error::Shape {
            expected: n,
            found: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(());
    }
    let mut beta = diag[0];
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Solver("zero pivot in row 0".into()));
    }
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * scratch[i];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Solver(format!("zero pivot in row {i}")));
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Ok(())
}

pub fn solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; diag.len()];
    solve_in_place(sub, diag, sup, &mut x, &mut scratch)?;
    Ok(x)
}

/// `y = T x`.
pub fn matvec(sub: &[f64], diag: &[f64], sup: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut y = diag[i] * x[i];
            if i > 0 {
                y += sub[i] * x[i - 1];
            }
            if i + 1 < n {
                y += sup[i] * x[i + 1];
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solves_small_system() {
        let sub = [0.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0];
        let sup = [-1.0, -1.0, 0.0];
        let x = solve(&sub, &diag, &sup, &[1.0, 0.0, 1.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let r = solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(r, Err(Error::Solver(_))));
    }

    proptest! {
        #[test]
        fn residual_is_small(
            off in proptest::collection::vec(-1.0..1.0f64, 8),
            rhs in proptest::collection::vec(-5.0..5.0f64, 8),
        ) {
            let n = 8;
            let sub: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { off[i] }).collect();
            let sup: Vec<f64> = (0..n).map(|i| if i + 1 == n { 0.0 } else { off[(i + 3) % n] }).collect();
            let diag: Vec<f64> = (0..n).map(|i| 3.0 + off[i].abs()).collect();
            let x = solve(&sub, &diag, &sup, &rhs).unwrap();
            let y = matvec(&sub, &diag, &sup, &x);
            for (a, b) in y.iter().zip(&rhs) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
