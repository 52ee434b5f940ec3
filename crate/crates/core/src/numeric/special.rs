//! Binomials, arcsine-law moments, and Beta-law tail probabilities.

use std::f64::consts::PI;

use num::{BigInt, One, Zero};

use super::scalar::{Rational, Scalar};

/// `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1)
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `k`-th moment of the arcsine law on `[0,1]`: `C(2k,k) / 4^k`.
pub fn arcsine_moment<S: Scalar>(k: u32) -> S {
    let num = binomial(2 * k as u64, k as u64);
    let den = BigInt::one() << (2 * k as usize);
    S::from_rational(&Rational::new(num, den))
}

/// The first `n` arcsine moments `(c̄_1, …, c̄_n)`.
pub fn arcsine_moments<S: Scalar>(n: usize) -> Vec<S> {
    (1..=n as u32).map(arcsine_moment).collect()
}

/// Density of the arcsine law, `1 / (π √(x(1−x)))` on `(0,1)`.
pub fn arcsine_density(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    1.0 / (PI * (x * (1.0 - x)).sqrt())
}

/// Distribution function of the arcsine law, `(2/π) asin(√x)`.
pub fn arcsine_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        2.0 / PI * x.sqrt().asin()
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `ln I_x(a,b)` evaluated directly by the continued fraction; accurate when
/// `x` lies below the mode region, `x < (a+1)/(a+b+2)`.
fn ln_incbeta_direct(a: f64, b: f64, x: f64) -> f64 {
    let front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b) - a.ln();
    front + beta_cf(a, b, x).ln()
}

fn ln_one_minus_exp(l: f64) -> f64 {
    // ln(1 - e^l) for l <= 0
    if l > -std::f64::consts::LN_2 {
        (-l.exp_m1()).ln()
    } else {
        (-l.exp()).ln_1p()
    }
}

/// `ln P(X ≤ x)` for `X ~ Beta(a, b)`, without underflow for deep tails.
pub fn ln_beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "Beta parameters must be positive");
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x >= 1.0 {
        return 0.0;
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_incbeta_direct(a, b, x)
    } else {
        ln_one_minus_exp(ln_incbeta_direct(b, a, 1.0 - x))
    }
}

/// `ln P(X ≥ x)` for `X ~ Beta(a, b)`.
pub fn ln_beta_sf(a: f64, b: f64, x: f64) -> f64 {
    ln_beta_cdf(b, a, 1.0 - x)
}

/// Regularized incomplete beta function `I_x(a, b) = P(X ≤ x)`, `X ~ Beta(a,b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "Beta parameters must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_incbeta_direct(a, b, x).exp()
    } else {
        1.0 - ln_incbeta_direct(b, a, 1.0 - x).exp()
    }
}
