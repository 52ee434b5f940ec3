//! Limits of tilted moment laws. For a continuous tilt `f₀` with maximum
//! `λ̄` at `x₀`, the tilted rate `I(μ) − ∫ f₀ dμ` is minimized by
//!
//! * `dμ = dν / (λ* − f₀)` with `∫ dν / (λ* − f₀) = 1`, when
//!   `χ₀ = ∫ dν / (λ̄ − f₀) ≥ 1`;
//! * `dμ = dν / (λ̄ − f₀) + (1 − χ₀) δ_{x₀}`, when `χ₀ < 1`.
//!
//! The minimal value is `−K_F`, with `K_F = sup{∫ f₀ dμ − I(μ)}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, NumericError, Result};
use crate::numeric::integrate_nu_split;
use crate::principal::Atom;
use crate::rates::expr::RealFn;
use crate::rates::measure::{reversed_kullback, MeasureSpec};

const GRID_POINTS: usize = 2001;
/// Grid values this close to the maximum count as competing maximizers.
const TIE_TOLERANCE: f64 = 1e-12;
/// `J(λ̄ + ε)` is probed at `ε = 10^{-1}, …, 10^{-PROBES}`.
const PROBES: i32 = 12;
const DIVERGENCE_RATIO: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltCase {
    AbsolutelyContinuous,
    AtomAtMaximizer,
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltSolution {
    pub lambda_bar: f64,
    pub maximizer: f64,
    /// `∫ dν / (λ̄ − f₀)`, `+∞` when it diverges.
    pub chi0: f64,
    /// Normalizing level; equals `λ̄` in the atomic case.
    pub lambda_star: f64,
    pub case: TiltCase,
    /// `∫ f₀ dμ − I(μ)` at the limit `μ`.
    pub k_f: f64,
    #[serde(skip)]
    pub limit: MeasureSpec,
}

/// Maximum of `f₀` on `[0,1]`: grid search, then golden-section refinement
/// around the best grid point. Also returns the grid points away from the
/// refined maximizer that tie with the maximum.
fn maximize(f0: &RealFn) -> (f64, f64, Vec<f64>) {
    let h = 1.0 / (GRID_POINTS - 1) as f64;
    let values: Vec<f64> = (0..GRID_POINTS).map(|i| f0(i as f64 * h)).collect();
    let best = (0..GRID_POINTS)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    let mut lo = best.saturating_sub(1) as f64 * h;
    let mut hi = ((best + 1).min(GRID_POINTS - 1)) as f64 * h;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f0(a), f0(b));
    while hi - lo > 1e-15 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f0(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f0(a);
        }
    }
    let mut candidates = vec![(best as f64 * h, values[best]), (lo, f0(lo)), (hi, f0(hi))];
    candidates.sort_by(|p, q| q.1.total_cmp(&p.1));
    let (x0, lambda_bar) = candidates[0];
    let tied = (0..GRID_POINTS)
        .map(|i| i as f64 * h)
        .zip(&values)
        .filter(|&(x, &v)| (x - x0).abs() > 2.0 * h && v >= lambda_bar - TIE_TOLERANCE)
        .map(|(x, _)| x)
        .collect();
    (x0, lambda_bar, tied)
}

/// `∫ h dν` to a relative tolerance, falling back to a looser absolute
/// tolerance when the integral is large.
fn integrate_relative(h: impl Fn(f64) -> f64, rel: f64, breaks: &[f64]) -> Result<f64> {
    match integrate_nu_split(&h, rel, breaks) {
        Ok(v) => Ok(v),
        Err(NumericError::QuadratureNotConverged { last, .. }) if last.abs() > 1.0 => {
            Ok(integrate_nu_split(&h, rel * last.abs(), breaks)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// Rough `∫ h dν` for divergence probes, where only the magnitude matters;
/// an unconverged estimate is returned as is.
fn integrate_rough(h: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
    match integrate_nu_split(&h, 1e-6, breaks) {
        Ok(v) => Ok(v),
        Err(NumericError::QuadratureNotConverged { last, .. }) => Ok(last),
        Err(e) => Err(e.into()),
    }
}

struct Tilt {
    f0: RealFn,
    lambda_bar: f64,
    breaks: Vec<f64>,
    tol: f64,
}

impl Tilt {
    /// `J(λ) = ∫ dν / (λ − f₀)`, decreasing in `λ > λ̄`.
    fn j(&self, lambda: f64) -> Result<f64> {
        let f0 = &self.f0;
        integrate_relative(|x| 1.0 / (lambda - f0(x)), self.tol, &self.breaks)
    }

    fn j_rough(&self, lambda: f64) -> Result<f64> {
        let f0 = &self.f0;
        integrate_rough(|x| 1.0 / (lambda - f0(x)), &self.breaks)
    }

    /// `χ₀ = J(λ̄)`; the singular point `x₀` is a break, and nodes where
    /// rounding makes `λ̄ − f₀` nonpositive are treated as carrying no mass.
    fn chi0(&self) -> Result<f64> {
        let f0 = &self.f0;
        let lb = self.lambda_bar;
        integrate_relative(
            |x| {
                let d = lb - f0(x);
                if d > 0.0 {
                    1.0 / d
                } else {
                    0.0
                }
            },
            self.tol,
            &self.breaks,
        )
    }

    /// `∫ ln(λ − f₀) dν`.
    fn log_integral(&self, lambda: f64) -> Result<f64> {
        let f0 = &self.f0;
        integrate_relative(
            |x| {
                let d = lambda - f0(x);
                if d > 0.0 {
                    d.ln()
                } else {
                    0.0
                }
            },
            self.tol,
            &self.breaks,
        )
    }
}

/// Identifies the limit of the tilted laws for the tilt `f₀`.
///
/// `λ̄` is the largest value `f₀` takes at a floating-point argument, so a
/// cusp maximum should sit at a representable point; otherwise `λ̄` falls
/// short of the supremum by the rounding error of `f₀` there.
pub fn tilt_limit(f0: RealFn, tol: f64) -> Result<TiltSolution> {
    let (x0, lambda_bar, tied) = maximize(&f0);
    if !lambda_bar.is_finite() {
        return Err(Error::InvalidInput(format!("tilt is not finite near x = {x0}")));
    }
    // every maximizer is a singular point of the integrands below
    let breaks: Vec<f64> = std::iter::once(x0)
        .chain(tied.iter().copied())
        .filter(|&x| x > 0.0 && x < 1.0)
        .collect();
    let tilt = Tilt { f0: f0.clone(), lambda_bar, breaks: breaks.clone(), tol };

    let scale = lambda_bar.abs().max(1.0);
    let mut above_one: Option<f64> = None;
    for e in 1..=PROBES {
        let lambda = lambda_bar + scale * 10f64.powi(-e);
        if tilt.j_rough(lambda)? >= 1.0 {
            above_one = Some(lambda);
            break;
        }
    }
    let near = tilt.j_rough(lambda_bar + scale * 1e-12)?;
    let far = tilt.j_rough(lambda_bar + scale * 1e-10)?;
    let chi0 = if near - far > DIVERGENCE_RATIO * near.max(1.0) {
        f64::INFINITY
    } else {
        tilt.chi0()?
    };

    let (lambda_star, case, limit) = if let Some(mut lo) = above_one {
        // J(lo) ≥ 1 ≥ J(λ̄ + 1) because λ̄ + 1 − f₀ ≥ 1
        let mut hi = lambda_bar + 1.0;
        while hi - lo > tol * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if tilt.j(mid)? >= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda_star = 0.5 * (lo + hi);
        let g = f0.clone();
        let density: RealFn = Arc::new(move |x| 1.0 / (lambda_star - g(x)));
        let limit = MeasureSpec::new(Some(density), Vec::new(), breaks.clone())?;
        (lambda_star, TiltCase::AbsolutelyContinuous, limit)
    } else if chi0.is_infinite() {
        return Err(Error::NotConverged(format!(
            "χ₀ diverges but ∫ dν/(λ − f₀) stays below 1 down to λ − λ̄ = {:e}",
            scale * 10f64.powi(-PROBES)
        )));
    } else if chi0 >= 1.0 {
        return Err(Error::NotConverged(format!(
            "χ₀ = {chi0} ≥ 1 but no level above λ̄ reaches 1"
        )));
    } else {
        if !tied.is_empty() {
            return Err(Error::Unsupported(format!(
                "the maximum {lambda_bar} of the tilt is attained at more than one point and χ₀ = {chi0} < 1"
            )));
        }
        let g = f0.clone();
        let density: RealFn = Arc::new(move |x| {
            let d = lambda_bar - g(x);
            if d > 0.0 {
                1.0 / d
            } else {
                0.0
            }
        });
        let atom = Atom { x: x0, w: 1.0 - chi0 };
        let limit = MeasureSpec::new(Some(density), vec![atom], breaks.clone())?;
        (lambda_bar, TiltCase::AtomAtMaximizer, limit)
    };

    let g = f0.clone();
    let f_of_limit = limit.integrate(move |x| g(x), tol)?;
    let information = reversed_kullback(&limit, tol)?;
    Ok(TiltSolution {
        lambda_bar,
        maximizer: x0,
        chi0,
        lambda_star,
        case,
        k_f: f_of_limit - information,
        limit,
    })
}

impl TiltSolution {
    /// `λ − 1 − ∫ ln(λ − f₀) dν` at the returned level, the closed form of
    /// `K_F` obtained by substituting the limit density.
    pub fn k_f_closed_form(&self, f0: &RealFn, tol: f64) -> Result<f64> {
        let breaks = if self.maximizer > 0.0 && self.maximizer < 1.0 {
            vec![self.maximizer]
        } else {
            Vec::new()
        };
        let tilt = Tilt { f0: f0.clone(), lambda_bar: self.lambda_bar, breaks, tol };
        Ok(self.lambda_star - 1.0 - tilt.log_integral(self.lambda_star)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::ln_beta;
    use crate::rates::measure::Polynomial;
    use std::f64::consts::PI;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    fn f(h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
        Arc::new(h)
    }

    #[test]
    fn zero_tilt_gives_the_arcsine_law() {
        let s = tilt_limit(f(|_| 0.0), 1e-12).unwrap();
        assert_eq!(s.case, TiltCase::AbsolutelyContinuous);
        assert!((s.lambda_star - 1.0).abs() < 1e-10);
        assert_eq!(s.chi0, f64::INFINITY);
        assert!(s.k_f.abs() < 1e-9);
    }

    #[test]
    fn linear_tilt_normalizes_at_the_golden_ratio() {
        // ∫ dν/(λ − x) = 1/√(λ² − λ) = 1 at λ = φ
        let f0 = f(|x| x);
        let s = tilt_limit(f0.clone(), 1e-12).unwrap();
        assert_eq!(s.case, TiltCase::AbsolutelyContinuous);
        assert!((s.maximizer - 1.0).abs() < 1e-12);
        assert_eq!(s.chi0, f64::INFINITY);
        assert!((s.lambda_star - GOLDEN).abs() < 1e-10, "{}", s.lambda_star);
        assert!((s.limit.total_mass(1e-12).unwrap() - 1.0).abs() < 1e-9);
        // I(limit) − F(limit) + K_F vanishes, and K_F has its closed form
        let closed = s.k_f_closed_form(&f0, 1e-12).unwrap();
        let expected = GOLDEN - 1.0 - ((2.0 + 5f64.sqrt()).ln() - 4f64.ln());
        assert!((closed - expected).abs() < 1e-9, "{closed} vs {expected}");
        assert!((s.k_f - closed).abs() < 1e-8, "{} vs {closed}", s.k_f);
    }

    #[test]
    fn cusp_tilt_puts_an_atom_at_the_maximizer() {
        // ∫ |x − ½|^{-1/2} dν = √2 B(½, ¼) / π, so this c gives χ₀ = ½
        let k = 2f64.sqrt() * ln_beta(0.5, 0.25).exp() / PI;
        let c = 2.0 * k;
        let f0 = f(move |x| -c * (x - 0.5).abs().sqrt());
        let s = tilt_limit(f0.clone(), 1e-10).unwrap();
        assert_eq!(s.case, TiltCase::AtomAtMaximizer);
        assert!((s.maximizer - 0.5).abs() < 1e-12);
        assert!(s.lambda_bar.abs() < 1e-6);
        assert!((s.chi0 - 0.5).abs() < 1e-6, "{}", s.chi0);
        assert_eq!(s.limit.atoms().len(), 1);
        assert!((s.limit.atoms()[0].w - 0.5).abs() < 1e-6);
        assert!((s.limit.total_mass(1e-10).unwrap() - 1.0).abs() < 1e-9);
        assert!((s.k_f - s.k_f_closed_form(&f0, 1e-10).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn two_maximizers_with_small_chi0_are_unsupported() {
        // cusps at ¼ and ¾, smooth elsewhere
        let f0 = f(|x| -40.0 * ((x - 0.25) * (x - 0.75)).abs().sqrt());
        let r = tilt_limit(f0, 1e-10);
        assert!(matches!(r, Err(Error::Unsupported(_))), "{:?}", r.map(|s| (s.case, s.chi0, s.lambda_star)));
    }

    #[test]
    fn k_f_dominates_other_measures() {
        let f0 = f(|x| x);
        let s = tilt_limit(f0, 1e-12).unwrap();
        // μ = ν: F − I = ½
        assert!(s.k_f >= 0.5);
        let mu = MeasureSpec::reciprocal_polynomial(&Polynomial::new(vec![GOLDEN, -1.0])).unwrap();
        let gap = mu.integrate(|x| x, 1e-12).unwrap() - reversed_kullback(&mu, 1e-12).unwrap();
        // that measure is the maximizer itself
        assert!((s.k_f - gap).abs() < 1e-8);
    }
}
