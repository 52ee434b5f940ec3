//! Linearization of the canonical-to-moment map at the arcsine point:
//! `c_m − c̄_m = 2 Σ_j a_mj (p_j − ½) + O(‖p − ½‖²)`.

use rand::Rng;
use rayon::prelude::*;

use momentspace::moments::{canonical_to_moments, CanonicalVector};
use momentspace::numeric::special::arcsine_moments;
use momentspace::rates::md_coefficients;
use momentspace::Result;

use super::stream;
use crate::config::{ExperimentConfig, TaylorConfig};
use crate::report::ExperimentReport;

/// `max_m |c_m − c̄_m − 2 Σ_j a_mj δ_j|` at `p = ½ + δ`.
pub fn linearization_residual(delta: &[f64], a: &[Vec<f64>], center: &[f64]) -> Result<f64> {
    let p: Vec<f64> = delta.iter().map(|d| 0.5 + d).collect();
    let c = canonical_to_moments(&CanonicalVector::new(p)?);
    Ok(c.entries()
        .iter()
        .enumerate()
        .map(|(m, cm)| {
            let linear: f64 = (0..delta.len()).map(|j| 2.0 * a[m][j] * delta[j]).sum();
            (cm - center[m] - linear).abs()
        })
        .fold(0.0, f64::max))
}

pub fn run(config: &ExperimentConfig, params: &TaylorConfig) -> Result<ExperimentReport> {
    let k = params.k;
    let a = md_coefficients::<f64>(k)?.a;
    let center: Vec<f64> = arcsine_moments(k);
    let mut report =
        ExperimentReport::new(config, &["radius", "max_ratio", "mean_ratio", "max_residual", "trials"]);

    report.summarize("residual_at_center", linearization_residual(&vec![0.0; k], &a, &center)?);
    let eps = 1e-3;
    let mut single = vec![0.0; k];
    single[0] = eps;
    let p = CanonicalVector::new(single.iter().map(|d| 0.5 + d).collect())?;
    let first = canonical_to_moments(&p).entries()[0] - 0.5;
    report.summarize("single_coordinate_first_moment_error", (first - eps).abs());

    let mut max_ratios = Vec::new();
    for h in 0..=params.halvings {
        let radius = params.radius / 2f64.powi(h as i32);
        let ratios = (0..params.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream(config.seed, h as usize, t).rng();
                let delta: Vec<f64> = (0..k).map(|_| radius * (2.0 * rng.random::<f64>() - 1.0)).collect();
                let norm2: f64 = delta.iter().map(|d| d * d).sum();
                let residual = linearization_residual(&delta, &a, &center)?;
                Ok((residual / norm2, residual))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let max_ratio = ratios.iter().map(|r| r.0).fold(0.0, f64::max);
        let mean_ratio = ratios.iter().map(|r| r.0).sum::<f64>() / ratios.len() as f64;
        let max_residual = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
        max_ratios.push(max_ratio);
        report.push_row(vec![
            radius.into(),
            max_ratio.into(),
            mean_ratio.into(),
            max_residual.into(),
            params.trials.into(),
        ]);
    }
    let hi = max_ratios.iter().copied().fold(0.0, f64::max);
    let lo = max_ratios.iter().copied().fold(f64::INFINITY, f64::min);
    report.summarize("ratio_spread", hi / lo);
    report.check(
        "quadratic_remainder",
        hi / lo <= params.ratio_spread,
        format!("max residual/‖δ‖² ranges over [{lo:.4}, {hi:.4}] across radii (allowed spread {}×)", params.ratio_spread),
    );
    report.check(
        "center",
        report.summary["residual_at_center"] == 0.0,
        "residual vanishes at the arcsine point".into(),
    );
    report.check(
        "first_moment_identity",
        report.summary["single_coordinate_first_moment_error"] < 1e-15,
        "c₁ − ½ = ε when p₁ = ½ + ε".into(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remainder_is_quadratic() {
        let a = md_coefficients::<f64>(3).unwrap().a;
        let center: Vec<f64> = arcsine_moments(3);
        let d = [0.01, -0.007, 0.004];
        let r1 = linearization_residual(&d, &a, &center).unwrap();
        let half: Vec<f64> = d.iter().map(|x| x / 2.0).collect();
        let r2 = linearization_residual(&half, &a, &center).unwrap();
        assert!(r1 > 0.0 && (r1 / r2 - 4.0).abs() < 0.2, "{r1} {r2}");
    }
}
