//! Probability measures given by a density with respect to the arcsine law
//! plus finitely many atoms, and the reversed Kullback information
//! `I(μ) = K(ν, μ) = −∫ ln(dμ/dν) dν`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::error::NumericError;
use crate::numeric::integrate_nu_split;
use crate::principal::Atom;

use super::expr::{Expr, RealFn};

/// Default absolute tolerance for integrals against `ν`.
pub const DEFAULT_QUADRATURE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the total mass of a [`MeasureSpec`] from 1.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Allowed defect of `∫ dν / P` for reciprocal-polynomial measures.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Real polynomial with coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    /// Comma-separated coefficients, lowest degree first; each may be a
    /// constant expression such as `(1+sqrt(5))/2`.
    pub fn parse(src: &str) -> Result<Self> {
        let coeffs = src
            .split(',')
            .map(|s| Expr::parse(s)?.constant())
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(coeffs))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Smallest value over a fine grid of `[0,1]` including both endpoints.
    pub fn grid_minimum(&self, points: usize) -> f64 {
        (0..=points)
            .map(|i| self.eval(i as f64 / points as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// `μ = g ν + Σ w_i δ_{x_i}` with total mass 1.
#[derive(Clone)]
pub struct MeasureSpec {
    density: Option<RealFn>,
    atoms: Vec<Atom<f64>>,
    /// Interior points where `g` may be singular or non-smooth.
    breaks: Vec<f64>,
}

impl fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("has_density", &self.density.is_some())
            .field("atoms", &self.atoms)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl MeasureSpec {
    /// Validates that the total mass is 1 within [`MASS_TOLERANCE`].
    pub fn new(density: Option<RealFn>, atoms: Vec<Atom<f64>>, breaks: Vec<f64>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..=1.0).contains(&a.x) || !(a.w > 0.0) {
                return Err(Error::InvalidMeasure(format!("bad atom {a:?}")));
            }
        }
        let spec = MeasureSpec { density, atoms, breaks };
        // singular densities only resolve to about 1e-11; the check needs 1e-9
        let mass = spec.total_mass(0.1 * MASS_TOLERANCE)?;
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("total mass is {mass}, expected 1")));
        }
        Ok(spec)
    }

    /// The arcsine law itself, `g ≡ 1`.
    pub fn arcsine() -> Self {
        MeasureSpec {
            density: Some(Arc::new(|_| 1.0)),
            atoms: Vec::new(),
            breaks: Vec::new(),
        }
    }

    /// `ν / P`; rejects `P` that is not positive on `[0,1]` or does not
    /// normalize.
    pub fn reciprocal_polynomial(p: &Polynomial) -> Result<Self> {
        let min = p.grid_minimum(10_000);
        if !(min > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "polynomial {p} is not positive on [0,1] (grid minimum {min})"
            )));
        }
        let poly = p.clone();
        let spec = MeasureSpec {
            density: Some(Arc::new(move |x| 1.0 / poly.eval(x))),
            atoms: Vec::new(),
            breaks: Vec::new(),
        };
        let integral = spec.density_mass(DEFAULT_QUADRATURE_TOLERANCE)?;
        if (integral - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Normalization { integral });
        }
        Ok(spec)
    }

    /// Measure with no density part.
    pub fn purely_atomic(atoms: Vec<Atom<f64>>) -> Result<Self> {
        MeasureSpec::new(None, atoms, Vec::new())
    }

    pub fn density(&self) -> Option<&RealFn> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &[Atom<f64>] {
        &self.atoms
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn density_mass(&self, tol: f64) -> Result<f64> {
        match &self.density {
            Some(g) => Ok(integrate_nu_split(|x| g(x), tol, &self.breaks)?),
            None => Ok(0.0),
        }
    }

    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        Ok(self.density_mass(tol)? + self.atoms.iter().map(|a| a.w).sum::<f64>())
    }

    /// `∫ h dμ`.
    pub fn integrate(&self, h: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
        let continuous = match &self.density {
            Some(g) => integrate_nu_split(|x| h(x) * g(x), tol, &self.breaks)?,
            None => 0.0,
        };
        Ok(continuous + self.atoms.iter().map(|a| a.w * h(a.x)).sum::<f64>())
    }

    /// `(c_1, …, c_k)` by quadrature.
    pub fn moments(&self, k: usize, tol: f64) -> Result<Vec<f64>> {
        (1..=k)
            .map(|j| self.integrate(|x| x.powi(j as i32), tol))
            .collect()
    }
}

/// `I(μ) = −∫ ln g dν` for `dμ = g dν + atoms`. Atoms are `ν`-null and do not
/// contribute; a missing density, or a density that vanishes at a quadrature
/// node, gives `+∞`.
pub fn reversed_kullback(mu: &MeasureSpec, tol: f64) -> Result<f64> {
    let g = match mu.density() {
        Some(g) => g,
        None => return Ok(f64::INFINITY),
    };
    match integrate_nu_split(|x| -g(x).ln(), tol, mu.breaks()) {
        Ok(v) => Ok(v),
        Err(NumericError::NonFiniteIntegrand { value, .. }) if value == f64::INFINITY => {
            Ok(f64::INFINITY)
        }
        Err(e) => Err(e.into()),
    }
}
