//! Large deviations of the first moment. Under the uniform law on `M_n`,
//! `c₁ = p₁ ~ Beta(n, n)`, so `P(c₁ ≥ t)` is an exact Beta tail whose
//! exponential rate is `Î(t) = −ln(4t(1−t))`.

use rayon::prelude::*;

use momentspace::numeric::special::{ln_beta_sf, regularized_incomplete_beta};
use momentspace::rates::rate_i1_beta;
use momentspace::sampling::beta_sample;
use momentspace::Result;

use super::{least_squares, stream};
use crate::config::{ExperimentConfig, LdpConfig};
use crate::report::ExperimentReport;

/// Fitted slope of `−ln P(Beta(n,n) ≥ t)` against `n`, optionally with a
/// `ln n` regressor absorbing the polynomial prefactor.
pub fn fitted_slope(t: f64, grid: &[u64], log_regressor: bool) -> Result<f64> {
    let mut x = Vec::with_capacity(grid.len());
    let mut y = Vec::with_capacity(grid.len());
    for &n in grid {
        let nf = n as f64;
        y.push(-ln_beta_sf(nf, nf, t));
        if log_regressor {
            x.push(vec![1.0, nf, nf.ln()]);
        } else {
            x.push(vec![1.0, nf]);
        }
    }
    Ok(least_squares(&x, &y)?[1])
}

pub fn run(config: &ExperimentConfig, params: &LdpConfig) -> Result<ExperimentReport> {
    let t = params.threshold;
    let rate = rate_i1_beta(t);
    let mut report = ExperimentReport::new(config, &["n", "ln_tail", "rate_estimate", "limit_rate"]);
    for &n in &params.n_grid {
        let nf = n as f64;
        let ln_p = ln_beta_sf(nf, nf, t);
        report.push_row(vec![n.into(), ln_p.into(), (-ln_p / nf).into(), rate.into()]);
    }
    let slope = fitted_slope(t, &params.n_grid, params.log_regressor)?;
    report.summarize("fitted_slope", slope);
    report.summarize("limit_rate", rate);
    let (ok, detail) = if rate > 0.0 {
        let rel = ((slope - rate) / rate).abs();
        report.summarize("relative_error", rel);
        (
            rel <= params.slope_tolerance,
            format!("slope {slope:.7} vs rate {rate:.7}: relative error {rel:.4} (tolerance {})", params.slope_tolerance),
        )
    } else {
        (
            slope.abs() <= params.slope_tolerance * 1e-2,
            format!("slope {slope:.3e} for a zero rate (tolerance {:.1e})", params.slope_tolerance * 1e-2),
        )
    };
    report.check("slope", ok, detail);

    if let Some(n) = params.monte_carlo_n {
        let nf = n as f64;
        let trials = params.monte_carlo_trials;
        let hits = (0..trials)
            .into_par_iter()
            .filter(|&i| beta_sample(nf, nf, &mut stream(config.seed, 0, i).rng()) >= t)
            .count() as f64;
        let exact = 1.0 - regularized_incomplete_beta(nf, nf, t);
        let estimate = hits / trials as f64;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        report.summarize("monte_carlo_estimate", estimate);
        report.summarize("monte_carlo_exact", exact);
        report.summarize("monte_carlo_std_error", sigma);
        report.summarize("monte_carlo_trials", trials as f64);
        report.check(
            "monte_carlo",
            (estimate - exact).abs() <= 3.0 * sigma.max(f64::MIN_POSITIVE),
            format!("n = {n}: {hits} of {trials} draws ≥ {t}, estimate {estimate:.3e} vs exact {exact:.3e} (3σ = {:.1e})", 3.0 * sigma),
        );
    }
    report.note("tails are exact regularized incomplete beta values; no Monte Carlo error enters the slope");
    Ok(report)
}
