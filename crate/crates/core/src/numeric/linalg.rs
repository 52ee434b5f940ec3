//! Small dense linear algebra.

use num::{BigInt, One, Zero};

use super::scalar::{Rational, Scalar};

/// Gaussian elimination with partial pivoting.
pub fn det_partial_pivot(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for row in col + 1..n {
            let factor = a[row][col] / p;
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) determinant of a rational matrix.
///
/// Each row is first cleared of denominators by its own least common
/// multiple, so the elimination runs over the integers and every division
/// is exact.
pub fn det_rational_bareiss(rows: Vec<Vec<Rational>>) -> Rational {
    let n = rows.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in rows {
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()));
        m.push(
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect(),
        );
        scale *= l;
    }
    let det = bareiss(m);
    Rational::new(det, scale)
}

/// Bareiss elimination with row swaps on zero pivots.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Solves `S y = b` for a symmetric positive-definite `S` via an `L D Lᵀ`
/// factorization. Square-root free, so it is exact over the rationals.
/// Returns `None` when a pivot is not strictly positive.
pub fn ldlt_solve<S: Scalar>(s: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = s.len();
    let mut l = vec![vec![S::zero(); n]; n];
    let mut d = vec![S::zero(); n];
    for j in 0..n {
        let mut dj = s[j][j].clone();
        for k in 0..j {
            dj = dj - l[j][k].clone() * l[j][k].clone() * d[k].clone();
        }
        if dj <= S::zero() {
            return None;
        }
        d[j] = dj;
        l[j][j] = S::one();
        for i in j + 1..n {
            let mut v = s[i][j].clone();
            for k in 0..j {
                v = v - l[i][k].clone() * l[j][k].clone() * d[k].clone();
            }
            l[i][j] = v / d[j].clone();
        }
    }
    // forward: L z = b
    let mut z = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            z[i] = z[i].clone() - l[i][k].clone() * z[k].clone();
        }
    }
    for i in 0..n {
        z[i] = z[i].clone() / d[i].clone();
    }
    // back: Lᵀ y = z
    for i in (0..n).rev() {
        for k in i + 1..n {
            z[i] = z[i].clone() - l[k][i].clone() * z[k].clone();
        }
    }
    Some(z)
}

/// Inverse of a symmetric positive-definite matrix, column by column.
pub fn spd_inverse<S: Scalar>(s: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = s.len();
    let mut inv = vec![vec![S::zero(); n]; n];
    for j in 0..n {
        let mut e = vec![S::zero(); n];
        e[j] = S::one();
        let col = ldlt_solve(s, &e)?;
        for i in 0..n {
            inv[i][j] = col[i].clone();
        }
    }
    Some(inv)
}

/// `A Bᵀ` for dense matrices.
pub fn mul_transpose<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    a.iter()
        .map(|ra| {
            b.iter()
                .map(|rb| {
                    ra.iter()
                        .zip(rb)
                        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
                })
                .collect()
        })
        .collect()
}

/// Cholesky solve in floating point; `None` if the matrix is not numerically
/// positive definite.
pub fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[j][j] = d;
        for i in j + 1..n {
            let mut v = a[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k];
            }
            l[i][j] = v / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i][k] * y[k];
        }
        y[i] /= l[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k][i] * y[k];
        }
        y[i] /= l[i][i];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![q("2"), q("1/3"), q("-1")],
            vec![q("1/2"), q("4"), q("2/5")],
            vec![q("3"), q("-7/2"), q("1")],
        ];
        // cofactor expansion along the first row
        let det = |a: &Vec<Vec<Rational>>| {
            a[0][0].clone() * (a[1][1].clone() * a[2][2].clone() - a[1][2].clone() * a[2][1].clone())
                - a[0][1].clone() * (a[1][0].clone() * a[2][2].clone() - a[1][2].clone() * a[2][0].clone())
                + a[0][2].clone() * (a[1][0].clone() * a[2][1].clone() - a[1][1].clone() * a[2][0].clone())
        };
        assert_eq!(det_rational_bareiss(m.clone()), det(&m));
    }

    #[test]
    fn bareiss_handles_zero_pivot_and_singular() {
        let m = vec![vec![q("0"), q("1")], vec![q("1"), q("0")]];
        assert_eq!(det_rational_bareiss(m), q("-1"));
        let s = vec![vec![q("1"), q("2")], vec![q("1/2"), q("1")]];
        assert_eq!(det_rational_bareiss(s), q("0"));
        assert_eq!(det_rational_bareiss(vec![]), q("1"));
    }

    #[test]
    fn float_det_agrees_with_exact() {
        let m = vec![
            vec![q("1"), q("1/2"), q("3/8")],
            vec![q("1/2"), q("3/8"), q("5/16")],
            vec![q("3/8"), q("5/16"), q("35/128")],
        ];
        let exact = det_rational_bareiss(m.clone());
        let f: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_float()).collect())
            .collect();
        assert!((det_partial_pivot(f) - exact.to_float()).abs() < 1e-15);
    }

    #[test]
    fn ldlt_solves_exactly() {
        let s = vec![vec![q("1/8"), q("1/8")], vec![q("1/8"), q("17/128")]];
        let y = ldlt_solve(&s, &[q("1"), q("0")]).unwrap();
        // explicit 2x2 inverse: det = 17/1024 - 16/1024 = 1/1024
        assert_eq!(y, vec![q("136"), q("-128")]);
        assert!(ldlt_solve(&[vec![q("0")]], &[q("1")]).is_none());
    }

    #[test]
    fn cholesky_matches_ldlt() {
        let s = vec![
            vec![4.0, 2.0, 0.6],
            vec![2.0, 5.0, 1.0],
            vec![0.6, 1.0, 3.0],
        ];
        let b = [1.0, -2.0, 0.5];
        let a = cholesky_solve(&s, &b).unwrap();
        let c = ldlt_solve(&s, &b).unwrap();
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(cholesky_solve(&[vec![-1.0]], &[1.0]).is_none());
    }
}
