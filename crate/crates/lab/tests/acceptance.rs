//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are
//! always printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigInt, One};
use rand::Rng;

use momentspace::moments::{
    canonical_to_moments, moment_range, moment_range_canonical, moment_range_hankel, moments_to_canonical,
    range_width_hankel, range_width_product, CanonicalVector, MomentVector,
};
use momentspace::numeric::special::{ln_beta, regularized_incomplete_beta};
use momentspace::numeric::{Rational, Scalar};
use momentspace::principal::{measure_moments, principal_representation, Side};
use momentspace::rates::{
    dual_hk_maximize, md_coefficients, polynomial_case_range, rate_ik, rate_jk, reversed_kullback, tilt_limit,
    MeasureSpec, Polynomial, TiltCase,
};
use momentspace::sampling::{sample_batch, sample_batch_canonical, SeededStream};
use momentspace_lab::config::{CltConfig, LdpConfig, SzegoConfig, SzegoMeasure};
use momentspace_lab::{run, Experiment, ExperimentConfig};

const SEED: u64 = 20_240_601;
/// Seed of the pinned marginal test.
const SAMPLER_SEED: u64 = 1;
const GOLDEN: f64 = 1.618_033_988_749_895;

type Verdict = Result<String, String>;

fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational in `(0,1)` with denominator below 200.
fn random_unit_rational(rng: &mut impl Rng) -> Rational {
    let den = rng.random_range(2..200i64);
    q(rng.random_range(1..den), den)
}

fn random_canonical(rng: &mut impl Rng, n: usize) -> CanonicalVector<Rational> {
    CanonicalVector::new((0..n).map(|_| random_unit_rational(rng)).collect()).unwrap()
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_round_trip() -> Verdict {
    let mut rng = SeededStream::new(SEED, 1).rng();
    for trial in 0..500 {
        let n = rng.random_range(1..=20);
        let p = random_canonical(&mut rng, n);
        let back = moments_to_canonical(&canonical_to_moments(&p)).map_err(|e| e.to_string())?;
        if back != p {
            return Err(format!("trial {trial} (n = {n}) does not round-trip"));
        }
    }
    Ok("500 rational canonical vectors, n ≤ 20, bit-exact".into())
}

fn width_identity() -> Verdict {
    let mut rng = SeededStream::new(SEED, 2).rng();
    for trial in 0..200 {
        let n = rng.random_range(1..=12);
        let p = random_canonical(&mut rng, n);
        let c = canonical_to_moments(&p);
        let product = range_width_product(&p);
        let hankel = range_width_hankel(&c).map_err(|e| e.to_string())?;
        let by_hankel = moment_range_hankel(&c).map_err(|e| e.to_string())?;
        let by_canonical = moment_range_canonical(&c).map_err(|e| e.to_string())?;
        let endpoints = by_hankel.c_plus.clone() - by_hankel.c_minus.clone();
        if product != hankel || hankel != endpoints || by_hankel != by_canonical {
            return Err(format!("trial {trial} (n = {n}): widths disagree"));
        }
    }
    Ok("200 rational interior points, n ≤ 12: product form = Hankel ratio = c⁺ − c⁻ exactly".into())
}

fn arcsine_closed_forms() -> Verdict {
    let half = CanonicalVector::new(vec![q(1, 2); 20]).unwrap();
    let c = canonical_to_moments(&half);
    // C(2k,k)/4^k via the running product (2k−1)/(2k)
    let mut expected = Rational::one();
    for k in 1..=20i64 {
        expected = expected * q(2 * k - 1, 2 * k);
        if c.moment(k as usize) != expected {
            return Err(format!("c_{k} = {} is not C(2k,k)/4^k", c.moment(k as usize)));
        }
        let width = range_width_hankel(&c.prefix(k as usize)).map_err(|e| e.to_string())?;
        if width != Rational::new(BigInt::one(), BigInt::from(4).pow(k as u32)) {
            return Err(format!("r_{} is not 4^-{k}", k + 1));
        }
    }
    let worst = (1..=20)
        .map(|k| rate_ik(&c.to_float().prefix(k)).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= 1e-12,
        format!("c_k and r_(n+1) exact for k, n ≤ 20; max |I_k(c̄)| = {worst:.1e}"),
    )
}

fn moderate_deviation_constants() -> Verdict {
    let m1 = md_coefficients::<Rational>(1).map_err(|e| e.to_string())?;
    let m2 = md_coefficients::<Rational>(2).map_err(|e| e.to_string())?;
    let sigma2 = vec![vec![q(1, 8), q(1, 8)], vec![q(1, 8), q(17, 128)]];
    let mut ok = m1.sigma == vec![vec![q(1, 8)]] && m2.sigma == sigma2;
    for (a, b) in [(0, 1), (1, 1), (-3, 7), (5, 2), (1, 1000)] {
        let x = q(a, b);
        ok &= rate_jk(&[x.clone()]).map_err(|e| e.to_string())? == q(4, 1) * x.clone() * x;
    }
    ensure(ok, "Σ₁ = 1/8, J₁(x) = 4x², Σ₂ = [[1/8,1/8],[1/8,17/128]] exactly".into())
}

fn duality() -> Verdict {
    let start = Instant::now();
    let mut rng = SeededStream::new(SEED, 5).rng();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.random_range(1..=6);
        let p: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
        let c = canonical_to_moments(&CanonicalVector::new(p).unwrap());
        let dual = dual_hk_maximize(&c, 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max((dual.value - rate_ik(&c)).abs());
    }
    let elapsed = start.elapsed();
    ensure(
        worst <= 1e-6 && elapsed <= Duration::from_secs(120),
        format!("50 interior points, k ≤ 6: max |H − I_k| = {worst:.1e} in {:.1}s", elapsed.as_secs_f64()),
    )
}

fn polynomial_range_exactness() -> Verdict {
    let p = Polynomial::new(vec![GOLDEN, -1.0]);
    let mut worst: f64 = 0.0;
    for j in 1..=10 {
        let r = polynomial_case_range(&p, j).map_err(|e| e.to_string())?;
        let exact = 4f64.powi(-(j as i32)) * 4.0 / (2.0 + 5f64.sqrt());
        worst = worst.max((r.computed - exact).abs() / exact);
    }
    let mu = MeasureSpec::reciprocal_polynomial(&p).map_err(|e| e.to_string())?;
    let info = reversed_kullback(&mu, 1e-13).map_err(|e| e.to_string())?;
    let info_err = (info - ((2.0 + 5f64.sqrt()).ln() - 4f64.ln())).abs();
    ensure(
        worst <= 1e-8 && info_err <= 1e-8,
        format!("golden-ratio P, j = 1..10: max relative width error {worst:.1e}; |I − closed form| = {info_err:.1e}"),
    )
}

fn szego() -> Verdict {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for measure in [SzegoMeasure::Arcsine, SzegoMeasure::Linear] {
        let params = SzegoConfig { measure, ..SzegoConfig::default() };
        let report = run(&ExperimentConfig::new(Experiment::Szego(params), SEED)).map_err(|e| e.to_string())?;
        ok &= report.passed() && report.summary["final_relative_deficit"] <= 0.1;
        details.push(format!(
            "{measure:?}: limit {:.10}, deficit {:.3e} at 2n = 40",
            report.summary["limit"], report.summary["final_relative_deficit"]
        ));
    }
    let elapsed = start.elapsed();
    ensure(
        ok && elapsed <= Duration::from_secs(300),
        format!("{} ({:.1}s)", details.join("; "), elapsed.as_secs_f64()),
    )
}

fn clt() -> Verdict {
    let params = CltConfig { k: 2, n_grid: vec![200], trials: 100_000, ..CltConfig::default() };
    let report = run(&ExperimentConfig::new(Experiment::Clt(params), SEED)).map_err(|e| e.to_string())?;
    let check = report.check_named("covariance_n200").ok_or("missing covariance check")?;
    ensure(check.passed, check.detail.clone())
}

fn ldp_slope() -> Verdict {
    let params = LdpConfig { threshold: 0.6, log_regressor: true, ..LdpConfig::default() };
    let report = run(&ExperimentConfig::new(Experiment::Ldp(params), SEED)).map_err(|e| e.to_string())?;
    let check = report.check_named("slope").ok_or("missing slope check")?;
    ensure(check.passed, check.detail.clone())
}

/// `sup |F_N − F|` of the sample against a continuous CDF.
fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov distances of the `p₁` and `p₂` marginals of `count` uniform
/// draws from `M_n` to their Beta laws.
fn marginal_distances(n: usize, count: usize, seed: u64) -> [f64; 2] {
    let draws = sample_batch_canonical(n, count, seed, 2);
    [0, 1].map(|i| {
        let shape = (n - i) as f64;
        let mut marginal: Vec<f64> = draws.iter().map(|p| p.entries()[i]).collect();
        ks_statistic(&mut marginal, |x| regularized_incomplete_beta(shape, shape, x))
    })
}

fn sampler() -> Verdict {
    let (n, count) = (10usize, 10_000usize);
    let critical = 1.358 / (count as f64).sqrt();
    let stats = marginal_distances(n, count, SAMPLER_SEED);
    // the pinned seed is one draw of a 5% test; the rejection rate over many
    // seeds shows the test is calibrated rather than lucky
    let seeds = 200;
    let mut rejections = [0usize; 2];
    for seed in 0..seeds {
        for (i, d) in marginal_distances(n, count, 1_000 + seed).iter().enumerate() {
            rejections[i] += usize::from(*d >= critical);
        }
    }
    let calibrated = rejections.iter().all(|&r| r as f64 <= 0.1 * seeds as f64);
    let batch_on = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_batch(12, 2_000, SEED, 6))
    };
    let one = batch_on(1);
    let reproducible = [2, 4, 7].iter().all(|&t| {
        let other = batch_on(t);
        one.iter().zip(&other).all(|(a, b)| {
            a.entries().iter().zip(b.entries()).all(|(x, y)| x.to_bits() == y.to_bits())
        })
    });
    ensure(
        stats.iter().all(|&d| d < critical) && calibrated && reproducible,
        format!(
            "KS p₁ {:.4}, p₂ {:.4} (5% critical {critical:.4}); rejections over {seeds} seeds {}/{}; batches bit-identical on 1/2/4/7 threads: {reproducible}",
            stats[0], stats[1], rejections[0], rejections[1]
        ),
    )
}

fn principal_contract() -> Verdict {
    let mut rng = SeededStream::new(SEED, 11).rng();
    let (mut worst_moment, mut worst_extreme): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let n = rng.random_range(1..=15);
        // exact points: float moments of a point this deep inside M_15 can
        // round outside the moment space
        let p = CanonicalVector::new((0..n).map(|_| q(rng.random_range(20..=980), 1000)).collect()).unwrap();
        let c = canonical_to_moments(&p);
        let mu = principal_representation(&c, Side::Upper).map_err(|e| e.to_string())?;
        let got = measure_moments(&mu, n + 1);
        let c_plus = moment_range(&c).map_err(|e| e.to_string())?.c_plus.to_float();
        for k in 1..=n {
            worst_moment = worst_moment.max((got.moment(k) - c.moment(k).to_float()).abs());
        }
        worst_extreme = worst_extreme.max((got.moment(n + 1) - c_plus).abs());
    }
    let half = MomentVector::new(vec![0.5, 0.375]);
    let mu = principal_representation(&half, Side::Upper).map_err(|e| e.to_string())?;
    let atoms = mu.atoms();
    let example = atoms.len() == 2
        && (atoms[0].x - 0.25).abs() <= 1e-10
        && (atoms[1].x - 1.0).abs() <= 1e-10
        && (atoms[0].w - 2.0 / 3.0).abs() <= 1e-10
        && (atoms[1].w - 1.0 / 3.0).abs() <= 1e-10;
    ensure(
        worst_moment <= 1e-8 && worst_extreme <= 1e-8 && example,
        format!(
            "1000 points, n ≤ 15: moment error {worst_moment:.1e}, c⁺ error {worst_extreme:.1e}; (1/2, 3/8) → {{1/4, 1}} with {{2/3, 1/3}}: {example}"
        ),
    )
}

fn tilt() -> Verdict {
    let linear = tilt_limit(std::sync::Arc::new(|x| x), 1e-12).map_err(|e| e.to_string())?;
    let golden_err = (linear.lambda_star - GOLDEN).abs();
    // ∫ |x − ½|^{-1/2} dν = √2 B(½, ¼) / π; twice that constant makes χ₀ = ½
    let c = 2.0 * 2f64.sqrt() * ln_beta(0.5, 0.25).exp() / PI;
    let cusp = tilt_limit(std::sync::Arc::new(move |x: f64| -c * (x - 0.5).abs().sqrt()), 1e-10)
        .map_err(|e| e.to_string())?;
    let atoms = cusp.limit.atoms();
    let atom_ok = cusp.case == TiltCase::AtomAtMaximizer
        && atoms.len() == 1
        && (atoms[0].x - 0.5).abs() < 1e-12
        && (atoms[0].w - (1.0 - cusp.chi0)).abs() <= 1e-9
        && (cusp.chi0 - 0.5).abs() <= 1e-6;
    let mass = cusp.limit.total_mass(1e-11).map_err(|e| e.to_string())?;
    ensure(
        golden_err <= 1e-8 && atom_ok && (mass - 1.0).abs() <= 1e-9,
        format!(
            "f₀ = x: |λ* − φ| = {golden_err:.1e}; cusp: χ₀ = {:.8}, atom {:.8} at ½, total mass − 1 = {:.1e}",
            cusp.chi0,
            atoms.first().map_or(0.0, |a| a.w),
            mass - 1.0
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("exact round-trip", exact_round_trip),
        ("width identity", width_identity),
        ("arcsine closed forms", arcsine_closed_forms),
        ("moderate-deviation constants", moderate_deviation_constants),
        ("duality", duality),
        ("reciprocal-polynomial range exactness", polynomial_range_exactness),
        ("Hankel-ratio limits", szego),
        ("central limit covariance", clt),
        ("large-deviation slope", ldp_slope),
        ("sampler marginals and reproducibility", sampler),
        ("principal representation contract", principal_contract),
        ("tilt identification", tilt),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
