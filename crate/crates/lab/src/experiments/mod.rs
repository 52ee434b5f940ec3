//! The experiments and the small statistics they share.

pub mod clt;
pub mod ldp;
pub mod mdp;
pub mod range_conv;
pub mod sigma_plus;
pub mod szego;
pub mod taylor;

use momentspace::numeric::linalg::cholesky_solve;
use momentspace::numeric::symmetric_tridiagonal_eigen;
use momentspace::sampling::SeededStream;
use momentspace::{Error, Result};

/// Stream of trial `trial` in grid block `block`; blocks never overlap.
pub(crate) fn stream(seed: u64, block: usize, trial: u64) -> SeededStream {
    SeededStream::new(seed, ((block as u64) << 40) | trial)
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub(crate) fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    }
}

/// Least-squares coefficients of `y` on the columns of `x`.
pub(crate) fn least_squares(x: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let p = x[0].len();
    let mut gram = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..p {
            rhs[i] += row[i] * yi;
            for j in 0..p {
                gram[i][j] += row[i] * row[j];
            }
        }
    }
    cholesky_solve(&gram, &rhs)
        .ok_or_else(|| Error::InvalidInput("regressors are collinear on this grid".into()))
}

/// Gauss rule with `m` nodes for `Beta(a, a)` on `[0,1]`, from the
/// Gegenbauer recurrence in `t = 2x − 1` (weight `(1−t²)^{a−1}`).
pub(crate) fn symmetric_beta_rule(a: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let lambda = a - 0.5;
    let diag = vec![0.5; m];
    let off: Vec<f64> = (1..m)
        .map(|j| {
            let j = j as f64;
            let beta = j * (j + 2.0 * lambda - 1.0) / (4.0 * (j + lambda) * (j + lambda - 1.0));
            // x = (1 + t)/2 halves the off-diagonal
            0.5 * beta.sqrt()
        })
        .collect();
    let spectrum = symmetric_tridiagonal_eigen(&diag, &off)?;
    Ok((spectrum.eigenvalues, spectrum.first_weights))
}
