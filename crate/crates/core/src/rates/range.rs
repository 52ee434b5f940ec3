//! Size of the next-moment range `r_{k+1}(c) = c⁺_{k+1} − c⁻_{k+1}` and its
//! exponential description through the minimal reversed Kullback information:
//!
//! ```text
//! r_{k+1}(c) = exp(−inf{I(μ) : μ has moments c} − k ln 4).
//! ```

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{classify, moment_range, Classification, MomentVector};
use crate::numeric::{integrate_nu, Scalar};
use crate::rates::dual::dual_hk_maximize;
use crate::rates::measure::{MeasureSpec, Polynomial};

/// Quadrature tolerance for the moments of `ν / P`.
const MOMENT_TOLERANCE: f64 = 1e-14;

/// `r_{k+1}(c)`; zero on the boundary, an error outside the moment space.
pub fn range_size<S: Scalar>(c: &MomentVector<S>) -> Result<S> {
    match classify(c) {
        Classification::Interior => Ok(moment_range(c)?.width),
        Classification::Boundary { .. } => Ok(S::zero()),
        Classification::Outside { index } => Err(Error::Outside { index }),
    }
}

/// The range size next to its prediction from the dual optimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeSizeCheck {
    pub width: f64,
    /// `inf I` over measures with moments `c`, from dual ascent.
    pub minimal_information: f64,
    /// `exp(−inf I − k ln 4)`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Computes `r_{k+1}(c)` and compares it with the dual prediction.
pub fn range_size_checked<S: Scalar>(c: &MomentVector<S>, tol: f64) -> Result<RangeSizeCheck> {
    let width = range_size(c)?.to_float();
    let dual = dual_hk_maximize(c, tol)?;
    let predicted = (-dual.value - 2.0 * LN_2 * c.len() as f64).exp();
    Ok(RangeSizeCheck {
        width,
        minimal_information: dual.value,
        predicted,
        relative_error: ((width - predicted) / predicted).abs(),
    })
}

/// Moments of `ν / P` together with the predicted and computed range size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialCaseRange {
    /// `d_i = ∫ x^i dν / P`, `i = 1..j`.
    pub moments: Vec<f64>,
    /// `∫ ln P dν`, which is `I(ν / P)`.
    pub log_integral: f64,
    /// `exp(−j ln 4 − ∫ ln P dν)`.
    pub predicted: f64,
    /// `r_{j+1}` of the computed moments.
    pub computed: f64,
}

/// For `μ = ν / P` the range-size formula is exact once `j ≥ deg P`:
/// `r_{j+1}(d^{(j)}) = exp(−j ln 4 − ∫ ln P dν)`.
pub fn polynomial_case_range(p: &Polynomial, j: usize) -> Result<PolynomialCaseRange> {
    if j < p.degree().max(1) {
        return Err(Error::InvalidInput(format!(
            "order {j} is below the polynomial degree {}",
            p.degree()
        )));
    }
    let mu = MeasureSpec::reciprocal_polynomial(p)?;
    let moments = mu.moments(j, MOMENT_TOLERANCE)?;
    let poly = p.clone();
    let log_integral = integrate_nu(move |x| poly.eval(x).ln(), MOMENT_TOLERANCE)?;
    let predicted = (-2.0 * LN_2 * j as f64 - log_integral).exp();
    let computed = range_size(&MomentVector::new(moments.clone()))?;
    Ok(PolynomialCaseRange { moments, log_integral, predicted, computed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_rational, Rational};
    use crate::rates::ldp::rate_ik;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn arcsine_prefix() {
        let q = |s: &str| parse_rational(s).unwrap();
        let c = MomentVector::new(vec![q("1/2"), q("3/8")]);
        assert_eq!(range_size(&c).unwrap(), q("1/16"));
        let check = range_size_checked(&c, 1e-9).unwrap();
        assert!(check.relative_error < 1e-12);
    }

    #[test]
    fn single_moment() {
        let c = MomentVector::new(vec![0.6]);
        assert!((range_size(&c).unwrap() - 0.24).abs() < 1e-15);
        assert!(((-rate_ik(&c) - 4f64.ln()).exp() - 0.24).abs() < 1e-15);
        let check = range_size_checked(&c, 1e-10).unwrap();
        assert!(check.relative_error < 1e-8, "{check:?}");
    }

    #[test]
    fn boundary_and_outside() {
        let q = |s: &str| parse_rational(s).unwrap();
        assert_eq!(range_size(&MomentVector::new(vec![q("1/2"), q("1/2")])).unwrap(), q("0"));
        assert_eq!(
            range_size(&MomentVector::<Rational>::new(vec![q("1/2"), q("3/5")])),
            Err(Error::Outside { index: 2 })
        );
    }

    #[test]
    fn constant_polynomial_is_the_arcsine_law() {
        for j in 1..=6 {
            let r = polynomial_case_range(&Polynomial::new(vec![1.0]), j).unwrap();
            let exact = 4f64.powi(-(j as i32));
            assert!((r.predicted - exact).abs() < 1e-14 * exact);
            assert!((r.computed - exact).abs() < 1e-10 * exact, "j={j}: {r:?}");
        }
    }

    #[test]
    fn golden_ratio_polynomial() {
        let p = Polynomial::new(vec![GOLDEN, -1.0]);
        for j in 1..=8 {
            let r = polynomial_case_range(&p, j).unwrap();
            let exact = 4f64.powi(-(j as i32)) * 4.0 / (2.0 + 5f64.sqrt());
            assert!((r.predicted - exact).abs() < 1e-12 * exact);
            assert!((r.computed - exact).abs() < 1e-8 * exact, "j={j}: {r:?}");
        }
    }

    #[test]
    fn quadratic_polynomial() {
        // P = x − x² + β, with β fixed by ∫ dν/P = 1 (bisection; the integral
        // decreases in β)
        let mass = |b: f64| integrate_nu(|x| 1.0 / (x - x * x + b), 1e-15).unwrap();
        let (mut lo, mut hi) = (0.5, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mass(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let p = Polynomial::new(vec![0.5 * (lo + hi), 1.0, -1.0]);
        for j in 2..=10 {
            let r = polynomial_case_range(&p, j).unwrap();
            assert!(((r.computed - r.predicted) / r.predicted).abs() < 1e-8, "j={j}: {r:?}");
        }
        // the dual optimum at order 2 recovers the same information
        let d = polynomial_case_range(&p, 2).unwrap();
        let dual = dual_hk_maximize(&MomentVector::new(d.moments), 1e-10).unwrap();
        assert!((dual.value - d.log_integral).abs() < 1e-8);
    }

    #[test]
    fn rejects_unnormalized_and_low_order() {
        let p = Polynomial::new(vec![2.0, -1.0]);
        assert!(matches!(polynomial_case_range(&p, 2), Err(Error::Normalization { .. })));
        let q = Polynomial::new(vec![1.0, 0.1, -0.1]);
        assert!(matches!(polynomial_case_range(&q, 1), Err(Error::InvalidInput(_))));
    }
}
