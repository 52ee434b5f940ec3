//! Concentration of the random measure `σ_n⁺(Z_n)` around the arcsine law:
//! median Kolmogorov distance to the arcsine CDF over independent uniform
//! draws of `Z_n`, per `n`.

use rayon::prelude::*;

use momentspace::numeric::special::arcsine_cdf;
use momentspace::principal::{principal_from_canonical, Side};
use momentspace::sampling::sample_uniform_moment_body;
use momentspace::Result;

use crate::config::{ExperimentConfig, SigmaPlusConfig};
use crate::report::ExperimentReport;

use super::{mean, median, stream};

/// Kolmogorov distance of `σ_n⁺(Z_n)` to the arcsine law, or `None` when
/// the construction fails.
pub fn sigma_plus_distance(n: usize, seed: u64, block: usize, trial: u64) -> Option<f64> {
    let sample = sample_uniform_moment_body(n, stream(seed, block, trial));
    principal_from_canonical(&sample.canonical, Side::Upper)
        .ok()
        .map(|mu| mu.kolmogorov_distance(arcsine_cdf))
}

pub fn run(config: &ExperimentConfig, params: &SigmaPlusConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        config,
        &["n", "median_distance", "mean_distance", "failures", "trials"],
    );
    let mut medians = Vec::new();
    let mut failures_total = 0usize;
    // block 0 is the n = 1 sanity row
    for (block, &n) in params.n_grid.iter().enumerate() {
        let distances: Vec<Option<f64>> = (0..params.trials)
            .into_par_iter()
            .map(|t| sigma_plus_distance(n as usize, config.seed, block + 1, t))
            .collect();
        let ok: Vec<f64> = distances.iter().flatten().copied().collect();
        let failures = distances.len() - ok.len();
        failures_total += failures;
        let med = if ok.is_empty() { f64::NAN } else { median(&ok) };
        medians.push(med);
        report.push_row(vec![
            n.into(),
            med.into(),
            mean(&ok).into(),
            failures.into(),
            params.trials.into(),
        ]);
    }
    let attempted = params.trials as usize * params.n_grid.len();
    let rate = failures_total as f64 / attempted.max(1) as f64;
    report.summarize("failure_rate", rate);
    report.check(
        "median_decreasing",
        medians.windows(2).all(|w| w[1] < w[0]),
        format!("median Kolmogorov distances {medians:.4?}"),
    );
    report.check(
        "construction_failures",
        rate < params.max_failure_rate,
        format!("{failures_total} of {attempted} constructions failed"),
    );

    // n = 1: σ₁⁺ puts 1 − c₁ on 0 and c₁ on 1, so the distance is at most ½ + |c₁ − ½|
    let sanity: Vec<(f64, f64, bool)> = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_uniform_moment_body(1, stream(config.seed, 0, t));
            let c1 = sample.moments.moment(1);
            match principal_from_canonical(&sample.canonical, Side::Upper) {
                Ok(mu) => {
                    let endpoints = mu.atoms().iter().all(|a| a.x.min(1.0 - a.x) < 1e-12);
                    (c1, mu.kolmogorov_distance(arcsine_cdf), endpoints)
                }
                Err(_) => (c1, f64::INFINITY, false),
            }
        })
        .collect();
    let sane = sanity
        .iter()
        .all(|&(c1, d, endpoints)| endpoints && d <= 0.5 + (c1 - 0.5).abs() + 1e-12);
    let med = median(&sanity.iter().map(|s| s.1).collect::<Vec<_>>());
    report.push_row(vec![1u64.into(), med.into(), f64::NAN.into(), 0usize.into(), params.trials.into()]);
    report.check(
        "endpoint_atoms_n1",
        sane,
        "σ₁⁺ is supported on {0,1} with distance ≤ ½ + |c₁ − ½|".into(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn small_run_is_reproducible() {
        let params = SigmaPlusConfig { n_grid: vec![10, 40], trials: 40, max_failure_rate: 0.01 };
        let config = ExperimentConfig::new(Experiment::SigmaPlus(params.clone()), 11);
        let a = run(&config, &params).unwrap();
        let b = run(&config, &params).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert!(a.check_named("endpoint_atoms_n1").unwrap().passed);
        assert!(a.check_named("construction_failures").unwrap().passed);
    }
}
