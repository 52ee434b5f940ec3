//! Concave dual of the minimal reversed Kullback information over measures
//! with prescribed moments:
//!
//! ```text
//! H_k(λ₀, λ, c) = λ₀ + ⟨λ, c⟩ + ∫ ln(1 − λ₀ − ⟨λ, φ_k(x)⟩) dν(x),
//! ```
//!
//! `φ_k(x) = (x, …, x^k)`. At the maximizer `ν / P` with
//! `P = 1 − λ₀ − ⟨λ, φ_k⟩` has moments `c`, and the maximum is `I(ν / P)`.
//!
//! The polynomial `1 − P` is parametrized internally in the shifted
//! Chebyshev basis `T_j(2x − 1)`, which is orthogonal under `ν`, so the
//! Newton system starts out perfectly conditioned. Integrals use the
//! Chebyshev rule for `ν`; its order doubles, warm-started, until the value
//! settles.

use crate::error::{Error, Result};
use crate::moments::{classify, Classification, MomentVector};
use crate::numeric::linalg::cholesky_solve;
use crate::numeric::{nu_quadrature, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub lambda0: f64,
    /// Coefficients of `x, …, x^k`.
    pub lambda: Vec<f64>,
    pub value: f64,
    /// ∞-norm of the gradient at exit.
    pub gradient_norm: f64,
    pub quadrature_order: usize,
    pub iterations: usize,
}

impl DualSolution {
    /// `P(x) = 1 − λ₀ − ⟨λ, φ_k(x)⟩`.
    pub fn polynomial(&self, x: f64) -> f64 {
        let tail = self.lambda.iter().rev().fold(0.0, |acc, l| (acc + l) * x);
        1.0 - self.lambda0 - tail
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualOptions {
    /// Exit threshold for the gradient ∞-norm.
    pub tol: f64,
    /// Successive quadrature levels must agree to this many units in value.
    pub value_tol: f64,
    pub initial_order: usize,
    pub max_order: usize,
    pub max_iterations: usize,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            tol: 1e-9,
            value_tol: 1e-10,
            initial_order: 128,
            max_order: 1 << 20,
            max_iterations: 200,
        }
    }
}

/// Coefficients (increasing powers of `x`) of `T_j(2x − 1)` for `j ≤ k`.
pub(crate) fn shifted_chebyshev<S: Scalar>(k: usize) -> Vec<Vec<S>> {
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut row = vec![S::zero(); k + 1];
        match j {
            0 => row[0] = S::one(),
            1 => {
                row[0] = -S::one();
                row[1] = S::from_i64(2);
            }
            _ => {
                // T_j = 2(2x − 1) T_{j−1} − T_{j−2}
                let (prev, prev2) = (&rows[j - 1], &rows[j - 2]);
                for i in 0..=k {
                    let mut v = -prev2[i].clone() - S::from_i64(2) * prev[i].clone();
                    if i > 0 {
                        v = v + S::from_i64(4) * prev[i - 1].clone();
                    }
                    row[i] = v;
                }
            }
        }
        rows.push(row);
    }
    rows
}

/// Node data of one quadrature level.
struct Level {
    /// `psi[l][j] = T_j(2 x_l − 1)`.
    psi: Vec<Vec<f64>>,
    weight: f64,
}

impl Level {
    fn new(order: usize, k: usize) -> Self {
        let rule = nu_quadrature(order);
        let psi = rule
            .nodes
            .iter()
            .map(|&x| {
                let y = 2.0 * x - 1.0;
                let mut row = vec![1.0; k + 1];
                if k >= 1 {
                    row[1] = y;
                }
                for j in 2..=k {
                    row[j] = 2.0 * y * row[j - 1] - row[j - 2];
                }
                row
            })
            .collect();
        Level { psi, weight: 1.0 / order as f64 }
    }

    /// `P` at every node, or `None` if it is not positive somewhere.
    fn p_values(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.psi.len());
        for row in &self.psi {
            let p = 1.0 - row.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>();
            if !(p > 0.0) {
                return None;
            }
            out.push(p);
        }
        Some(out)
    }

    fn value(&self, theta: &[f64], m: &[f64]) -> Option<f64> {
        let p = self.p_values(theta)?;
        let lin: f64 = theta.iter().zip(m).map(|(a, b)| a * b).sum();
        Some(lin + self.weight * p.iter().map(|v| v.ln()).sum::<f64>())
    }

    /// Gradient and negated Hessian at a feasible point.
    fn derivatives(&self, theta: &[f64], m: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = theta.len();
        let p = self.p_values(theta).expect("feasible point");
        let mut grad = m.to_vec();
        let mut hess = vec![vec![0.0; n]; n];
        for (row, pl) in self.psi.iter().zip(&p) {
            let inv = 1.0 / pl;
            let inv2 = inv * inv * self.weight;
            for i in 0..n {
                grad[i] -= self.weight * row[i] * inv;
                for j in 0..=i {
                    hess[i][j] += row[i] * row[j] * inv2;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                hess[j][i] = hess[i][j];
            }
        }
        (grad, hess)
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

enum LevelOutcome {
    Converged { theta: Vec<f64>, value: f64, gradient_norm: f64, iterations: usize },
    Failed { theta: Vec<f64>, value: f64, gradient_norm: f64 },
}

fn newton(level: &Level, start: Vec<f64>, m: &[f64], opts: &DualOptions) -> LevelOutcome {
    // pull an infeasible warm start back towards the origin, where P ≡ 1
    let mut theta = start;
    let mut shrink = 0;
    while level.p_values(&theta).is_none() {
        theta.iter_mut().for_each(|t| *t *= 0.5);
        shrink += 1;
        if shrink > 60 {
            theta.iter_mut().for_each(|t| *t = 0.0);
        }
    }
    let mut value = level.value(&theta, m).expect("feasible");
    let mut gradient_norm = f64::INFINITY;
    let mut previous_norm = f64::INFINITY;
    for it in 0..opts.max_iterations {
        let (grad, hess) = level.derivatives(&theta, m);
        gradient_norm = inf_norm(&grad);
        if gradient_norm <= opts.tol {
            return LevelOutcome::Converged { theta, value, gradient_norm, iterations: it };
        }
        let step = match cholesky_solve(&hess, &grad) {
            Some(s) => s,
            None => break,
        };
        let slope: f64 = grad.iter().zip(&step).map(|(a, b)| a * b).sum();
        // when P nearly vanishes the gradient stalls at rounding level above
        // tol; stop once it no longer shrinks and the Newton decrement, which
        // bounds the remaining gain, is at rounding level too
        let stalled = gradient_norm > 0.5 * previous_norm;
        if stalled && slope <= 4.0 * f64::EPSILON * value.abs().max(1.0) {
            return LevelOutcome::Converged { theta, value, gradient_norm, iterations: it };
        }
        previous_norm = gradient_norm;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..80 {
            let trial: Vec<f64> = theta.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            if let Some(v) = level.value(&trial, m) {
                if v >= value + 1e-4 * t * slope || (v - value).abs() <= 1e-15 * value.abs().max(1.0) {
                    theta = trial;
                    value = v;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    LevelOutcome::Failed { theta, value, gradient_norm }
}

fn theta_to_monomial(theta: &[f64], cheb: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let k = theta.len() - 1;
    let mut coeffs = vec![0.0; k + 1];
    for (j, t) in theta.iter().enumerate() {
        for i in 0..=k {
            coeffs[i] += t * cheb[j][i];
        }
    }
    (coeffs[0], coeffs[1..].to_vec())
}

/// Maximizes `H_k(·, ·, c)` for an interior `c`, exiting when the gradient
/// ∞-norm is at most `tol` or the Newton decrement reaches rounding level.
/// The reported `gradient_norm` is the one actually attained.
pub fn dual_hk_maximize<S: Scalar>(c: &MomentVector<S>, tol: f64) -> Result<DualSolution> {
    dual_hk_maximize_with(c, &DualOptions { tol, ..DualOptions::default() })
}

pub fn dual_hk_maximize_with<S: Scalar>(c: &MomentVector<S>, opts: &DualOptions) -> Result<DualSolution> {
    match classify(c) {
        Classification::Interior => {}
        Classification::Boundary { index } => return Err(Error::Boundary { index }),
        Classification::Outside { index } => return Err(Error::Outside { index }),
    }
    let k = c.len();
    let cheb_exact = shifted_chebyshev::<S>(k);
    let full = c.with_mass();
    // Chebyshev moments of c, formed in the input's own arithmetic
    let m: Vec<f64> = cheb_exact
        .iter()
        .map(|row| {
            row.iter()
                .zip(&full)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
                .to_float()
        })
        .collect();
    let cheb: Vec<Vec<f64>> = cheb_exact
        .iter()
        .map(|row| row.iter().map(Scalar::to_float).collect())
        .collect();

    let mut order = opts.initial_order.max(k + 1);
    let mut theta = vec![0.0; k + 1];
    let mut last_converged = theta.clone();
    let mut previous: Option<f64> = None;
    let mut best: Option<(Vec<f64>, f64, f64, usize)> = None;
    let mut total_iterations = 0;
    while order <= opts.max_order {
        let level = Level::new(order, k);
        match newton(&level, theta.clone(), &m, opts) {
            LevelOutcome::Converged { theta: t, value, gradient_norm, iterations } => {
                total_iterations += iterations;
                theta = t;
                last_converged = theta.clone();
                best = Some((theta.clone(), value, gradient_norm, order));
                if let Some(prev) = previous {
                    if (value - prev).abs() <= opts.value_tol {
                        let (lambda0, lambda) = theta_to_monomial(&theta, &cheb);
                        return Ok(DualSolution {
                            lambda0,
                            lambda,
                            value,
                            gradient_norm,
                            quadrature_order: order,
                            iterations: total_iterations,
                        });
                    }
                }
                previous = Some(value);
            }
            LevelOutcome::Failed { theta: t, value, gradient_norm } => {
                // too few nodes to carry the moments, or a stall; retry finer
                // from the last converged point
                total_iterations += opts.max_iterations;
                if best.is_none() || gradient_norm < best.as_ref().map_or(f64::INFINITY, |b| b.2) {
                    best = Some((t, value, gradient_norm, order));
                }
                theta = last_converged.clone();
                previous = None;
            }
        }
        order *= 2;
    }
    let (t, value, gradient_norm, order) = best.unwrap_or((theta, f64::NAN, f64::INFINITY, order));
    let (lambda0, lambda) = theta_to_monomial(&t, &cheb);
    Err(Error::DualNotConverged {
        lambda0,
        lambda,
        value,
        gradient_norm,
        quadrature_order: order,
    })
}
