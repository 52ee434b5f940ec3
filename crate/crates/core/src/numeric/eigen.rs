//! Symmetric tridiagonal eigenproblem via implicit QL with Wilkinson-type
//! shifts, tracking only the first component of each eigenvector.

use crate::error::NumericError;

const MAX_SWEEPS: usize = 60;

/// Spectrum of a symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSpectrum {
    /// Eigenvalues in increasing order.
    pub eigenvalues: Vec<f64>,
    /// Squared first component of each normalized eigenvector.
    pub first_weights: Vec<f64>,
}

/// Eigenvalues and squared first eigenvector components of the matrix with
/// diagonal `diag` and strictly positive off-diagonal `offdiag`
/// (`offdiag.len() == diag.len() - 1`).
pub fn symmetric_tridiagonal_eigen(
    diag: &[f64],
    offdiag: &[f64],
) -> Result<TridiagonalSpectrum, NumericError> {
    let n = diag.len();
    if n == 0 || offdiag.len() + 1 != n {
        return Err(NumericError::Shape(format!(
            "tridiagonal with {} diagonal and {} off-diagonal entries",
            n,
            offdiag.len()
        )));
    }
    if let Some((i, &v)) = offdiag.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(NumericError::NonPositiveOffDiagonal { index: i, value: v });
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(NumericError::EigenNotConverged { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zi1 = z[i + 1];
                z[i + 1] = s * z[i] + c * zi1;
                z[i] = c * z[i] - s * zi1;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(TridiagonalSpectrum {
        eigenvalues: order.iter().map(|&i| d[i]).collect(),
        first_weights: order.iter().map(|&i| z[i] * z[i]).collect(),
    })
}
