//! Moderate-deviation data: the linearization `A_k` of the canonical-to-moment
//! map at the arcsine point, the covariance `Σ_k = ½ A_k A_kᵀ`, and the
//! quadratic rate `J_k(x) = ½ xᵀ Σ_k⁻¹ x`.

use num::BigInt;

use crate::error::{Error, Result};
use crate::numeric::linalg::{ldlt_solve, mul_transpose, spd_inverse};
use crate::numeric::special::binomial;
use crate::numeric::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MdCoefficients<S> {
    /// Lower triangular, `a_ij = 2^{−2i+1} C(2i, i−j)` (1-based).
    pub a: Vec<Vec<S>>,
    pub sigma: Vec<Vec<S>>,
    pub sigma_inv: Vec<Vec<S>>,
}

/// `a_ij` with 1-based indices; zero above the diagonal.
pub fn md_coefficient<S: Scalar>(i: usize, j: usize) -> S {
    if j > i || j == 0 {
        return S::zero();
    }
    let num = binomial(2 * i as u64, (i - j) as u64);
    let den = BigInt::from(1) << (2 * i - 1);
    S::from_rational(&Rational::new(num, den))
}

pub fn md_coefficients<S: Scalar>(k: usize) -> Result<MdCoefficients<S>> {
    if k == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let a: Vec<Vec<S>> = (1..=k)
        .map(|i| (1..=k).map(|j| md_coefficient(i, j)).collect())
        .collect();
    let sigma: Vec<Vec<S>> = mul_transpose(&a, &a)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v * S::half()).collect())
        .collect();
    let sigma_inv = spd_inverse(&sigma)
        .ok_or_else(|| Error::Construction("covariance is not positive definite".into()))?;
    Ok(MdCoefficients { a, sigma, sigma_inv })
}

/// `½ xᵀ Σ_k⁻¹ x` with `k = x.len()`, via an `L D Lᵀ` solve.
pub fn rate_jk<S: Scalar>(x: &[S]) -> Result<S> {
    if x.is_empty() {
        return Ok(S::zero());
    }
    let md = md_coefficients::<S>(x.len())?;
    let y = ldlt_solve(&md.sigma, x)
        .ok_or_else(|| Error::Construction("covariance is not positive definite".into()))?;
    let quad = x
        .iter()
        .zip(&y)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    Ok(quad * S::half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn small_dimensions() {
        let m1 = md_coefficients::<Rational>(1).unwrap();
        assert_eq!(m1.a, vec![vec![q("1/2")]]);
        assert_eq!(m1.sigma, vec![vec![q("1/8")]]);
        let m2 = md_coefficients::<Rational>(2).unwrap();
        assert_eq!(m2.a, vec![vec![q("1/2"), q("0")], vec![q("1/2"), q("1/8")]]);
        assert_eq!(
            m2.sigma,
            vec![vec![q("1/8"), q("1/8")], vec![q("1/8"), q("17/128")]]
        );
        // 2×2 inverse: det = 17/1024 − 16/1024, adjugate over det
        assert_eq!(
            m2.sigma_inv,
            vec![vec![q("136"), q("-128")], vec![q("-128"), q("128")]]
        );
    }

    #[test]
    fn quadratic_rate() {
        assert_eq!(rate_jk::<Rational>(&[q("0")]).unwrap(), q("0"));
        assert_eq!(rate_jk(&[q("1")]).unwrap(), q("4"));
        assert_eq!(rate_jk(&[q("3/7")]).unwrap(), q("4") * q("9/49"));
        assert_eq!(rate_jk(&[q("1"), q("0")]).unwrap(), q("68"));
        assert!((rate_jk(&[0.3f64]).unwrap() - 0.36).abs() < 1e-15);
    }

    #[test]
    fn a_is_lower_triangular_with_positive_diagonal() {
        let m = md_coefficients::<Rational>(6).unwrap();
        for i in 0..6 {
            assert_eq!(m.a[i][i], Rational::new(1.into(), BigInt::from(1) << (2 * i + 1)));
            for j in i + 1..6 {
                assert_eq!(m.a[i][j], q("0"));
            }
        }
    }
}
