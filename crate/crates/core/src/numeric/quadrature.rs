//! Integration against the arcsine law `ν(dx) = dx / (π √(x(1−x)))`.
//!
//! Under `x = cos²(t/2)` the arcsine law becomes the uniform law on the
//! angle `t ∈ [0, π]`, so `∫ f dν = (1/π) ∫_0^π f(cos²(t/2)) dt`. Both
//! integrators below work in that angle variable and never place a node on
//! an endpoint of `[0,1]`.
//!
//! * [`nu_quadrature`] is the Chebyshev–Gauss rule (midpoint rule in the
//!   angle). With `m` nodes it is exact for polynomials of degree `2m−1`.
//! * [`integrate_nu`] is adaptive. Polynomial exactness is useless for
//!   endpoint singularities such as `ln x` (the `m`-node rule is off by
//!   exactly `ln 2 / m` there), so it runs a tanh–sinh rule in the angle,
//!   halving the step until successive estimates agree.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::NumericError;

/// Equal-weight Chebyshev rule for `ν`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Point `cos²(t/2)` for an angle in `[0, π]`, computed from whichever end
/// of the interval is closer so small distances keep full relative accuracy.
fn angle_to_point(t: f64) -> f64 {
    if t <= FRAC_PI_2 {
        let c = (0.5 * t).cos();
        c * c
    } else {
        let s = (0.5 * (PI - t)).sin();
        s * s
    }
}

/// `m`-node rule: nodes `(1 + cos((2j−1)π/(2m)))/2`, weights `1/m`,
/// returned in increasing order.
pub fn nu_quadrature(order: usize) -> QuadratureRule {
    assert!(order >= 1, "quadrature order must be positive");
    let m = order as f64;
    let mut nodes: Vec<f64> = (1..=order)
        .map(|j| angle_to_point((2 * j - 1) as f64 * PI / (2.0 * m)))
        .collect();
    nodes.reverse();
    QuadratureRule {
        nodes,
        weights: vec![1.0 / m; order],
    }
}

/// Largest refinement level of the adaptive rule (step `0.5 · 2^{-level}`).
pub const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
const HALF_WIDTH: f64 = 4.0;

/// Adaptive `∫ f dν` to absolute tolerance `tol`.
pub fn integrate_nu(f: impl Fn(f64) -> f64, tol: f64) -> Result<f64, NumericError> {
    integrate_nu_split(f, tol, &[])
}

/// Like [`integrate_nu`], but splits the domain at the given points of
/// `(0,1)` so that interior singularities or kinks sit on piece endpoints.
pub fn integrate_nu_split(
    f: impl Fn(f64) -> f64,
    tol: f64,
    breaks: &[f64],
) -> Result<f64, NumericError> {
    integrate_nu_pair(|x, _| f(x), tol, breaks)
}

/// Adaptive `∫ f dν` where the integrand receives both `x` and `1 − x`,
/// each with full relative accuracy. Use this when `f` is singular at 1,
/// since `x` itself cannot resolve distances to 1 below `1e-16`.
pub fn integrate_nu_pair(
    f: impl Fn(f64, f64) -> f64,
    tol: f64,
    breaks: &[f64],
) -> Result<f64, NumericError> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .filter(|&&x| x > 0.0 && x < 1.0)
        .map(|&x| 2.0 * x.sqrt().acos())
        .collect();
    cuts.push(0.0);
    cuts.push(PI);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = cuts.len() - 1;
    let piece_tol = tol / pieces as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += tanh_sinh_piece(&f, w[0], w[1], piece_tol * PI)?;
    }
    Ok(total / PI)
}

/// A node of the tanh–sinh rule on the angle interval `[a, b]`, with the
/// point given as `(x, 1 − x)`.
struct Node {
    x: f64,
    y: f64,
    weight: f64,
}

fn node(a: f64, b: f64, u: f64) -> Option<Node> {
    let len = b - a;
    let s = FRAC_PI_2 * u.sinh();
    let q = (-2.0 * s.abs()).exp();
    // distances from the nearer end, free of cancellation
    let (from_a, from_b) = if s >= 0.0 {
        (len / (1.0 + q), len * q / (1.0 + q))
    } else {
        (len * q / (1.0 + q), len / (1.0 + q))
    };
    let weight = len * FRAC_PI_2 * u.cosh() * 2.0 * q / ((1.0 + q) * (1.0 + q));
    if weight == 0.0 || !weight.is_finite() {
        return None;
    }
    let t = if from_a <= from_b { a + from_a } else { b - from_b };
    // x = cos²(t/2), 1 − x = sin²(t/2); near t = 0 or π use the offset directly
    let (x, y) = if a == 0.0 && from_a <= from_b {
        let h = 0.5 * from_a;
        (h.cos().powi(2), h.sin().powi(2))
    } else if b == PI && from_b < from_a {
        let h = 0.5 * from_b;
        (h.sin().powi(2), h.cos().powi(2))
    } else {
        let h = 0.5 * t;
        (h.cos().powi(2), h.sin().powi(2))
    };
    if x <= 0.0 || y <= 0.0 {
        return None;
    }
    // x rounds up to 1 long before 1 − x underflows; keep x inside (0,1)
    let x = if x >= 1.0 { 1.0 - f64::EPSILON / 2.0 } else { x };
    // interior breakpoints carry no mass; a node that rounds onto one is dropped
    let on_interior_break = (a > 0.0 && x == angle_to_point(a)) || (b < PI && x == angle_to_point(b));
    if on_interior_break {
        return None;
    }
    Some(Node { x, y, weight })
}

fn tanh_sinh_piece(
    f: &impl Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, NumericError> {
    let eval = |u: f64| -> Result<f64, NumericError> {
        match node(a, b, u) {
            None => Ok(0.0),
            Some(nd) => {
                let v = f(nd.x, nd.y);
                if v.is_finite() {
                    Ok(nd.weight * v)
                } else {
                    Err(NumericError::NonFiniteIntegrand { x: nd.x, value: v })
                }
            }
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while k as f64 * h <= HALF_WIDTH {
        let u = k as f64 * h;
        sum += eval(u)? + eval(-u)?;
        k += 1;
    }
    let mut estimate = h * sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= HALF_WIDTH {
            let u = k as f64 * h;
            sum += eval(u)? + eval(-u)?;
            k += 2;
        }
        let next = h * sum;
        if level >= MIN_LEVEL && (next - estimate).abs() < tol {
            return Ok(next);
        }
        if level == MAX_LEVEL {
            return Err(NumericError::QuadratureNotConverged {
                previous: estimate / PI,
                last: next / PI,
            });
        }
        estimate = next;
    }
    unreachable!("loop returns at MAX_LEVEL")
}
