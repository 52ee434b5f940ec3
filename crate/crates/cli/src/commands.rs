use std::fs;
use std::path::PathBuf;

use serde_json::json;

use momentspace::moments::{
    canonical_to_moments, classify, moment_range, moments_to_canonical, CanonicalVector, MomentVector,
};
use momentspace::numeric::{Mode, Rational, Scalar, Value};
use momentspace::principal::principal_representation;
use momentspace::rates::{
    dual_hk_maximize, polynomial_case_range, range_size, range_size_checked, rate_ik, rate_ik_canonical,
    rate_jk, reversed_kullback, tilt_limit, Expr, MeasureSpec, Polynomial,
};
use momentspace::sampling::{sample_batch, sample_batch_canonical};
use momentspace::{Error, Result};
use momentspace_lab::{ExperimentConfig, Experiment};

use crate::args::{Cli, Command, Format, PointArg, RateCommand};
use crate::output::{self, emit, Output};

/// Runs the command and returns the process exit code.
pub fn dispatch(cli: &Cli) -> Result<u8> {
    if let Command::Experiment { id, config } = &cli.command {
        return experiment(cli, id.as_deref(), config.as_ref());
    }
    let out = match &cli.command {
        Command::Convert(point) => match mode(cli, Mode::Exact) {
            Mode::Exact => convert::<Rational>(point)?,
            Mode::Float => convert::<f64>(point)?,
        },
        Command::Classify(m) => match mode(cli, Mode::Exact) {
            Mode::Exact => classify_cmd::<Rational>(&m.moments)?,
            Mode::Float => classify_cmd::<f64>(&m.moments)?,
        },
        Command::Range(m) => match mode(cli, Mode::Exact) {
            Mode::Exact => range::<Rational>(&m.moments)?,
            Mode::Float => range::<f64>(&m.moments)?,
        },
        Command::Principal { moments, side } => {
            float_only(cli, "principal representations need an eigensolve")?;
            let c = MomentVector::new(parse_list::<f64>(&moments.moments)?);
            let mu = principal_representation(&c, (*side).into())?;
            let csv = std::iter::once("x,w\n".to_string())
                .chain(mu.atoms().iter().map(|a| format!("{},{}\n", a.x, a.w)))
                .collect();
            Output { json: serde_json::to_value(&mu).map_err(io)?, csv, default: Format::Json }
        }
        Command::Sample { n, count, k, canonical } => {
            float_only(cli, "sampling draws floating-point Beta variables")?;
            sample(*n, *count, k.unwrap_or(*n), *canonical, cli.seed.unwrap_or(0))?
        }
        Command::Rate(rate) => rate_cmd(cli, rate)?,
        Command::Experiment { .. } => unreachable!("handled above"),
    };
    emit(&out.render(cli.format)?, cli.out.as_deref())?;
    Ok(0)
}

fn mode(cli: &Cli, default: Mode) -> Mode {
    cli.mode.map(Mode::from).unwrap_or(default)
}

fn float_only(cli: &Cli, why: &str) -> Result<()> {
    if mode(cli, Mode::Float) == Mode::Exact {
        return Err(Error::InvalidInput(format!("--mode exact is not available here: {why}")));
    }
    Ok(())
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn parse_list<S: Scalar>(src: &str) -> Result<Vec<S>> {
    src.split(',')
        .map(|s| Ok(S::from_value(&Value::parse(s.trim(), S::MODE)?)?))
        .collect()
}

fn vector_output<S: Scalar>(kind: &str, values: &[S]) -> Output {
    Output {
        json: json!({ kind: values.iter().map(output::json).collect::<Vec<_>>() }),
        csv: output::row(values),
        default: Format::Csv,
    }
}

fn convert<S: Scalar>(point: &PointArg) -> Result<Output> {
    if let Some(src) = &point.moments {
        let p = moments_to_canonical(&MomentVector::new(parse_list::<S>(src)?))?;
        Ok(vector_output("canonical", p.entries()))
    } else {
        let src = point.canonical.as_deref().expect("clap requires one of the two");
        let c = canonical_to_moments(&CanonicalVector::new(parse_list::<S>(src)?)?);
        Ok(vector_output("moments", c.entries()))
    }
}

fn classify_cmd<S: Scalar>(src: &str) -> Result<Output> {
    let class = classify(&MomentVector::new(parse_list::<S>(src)?));
    Ok(Output {
        json: serde_json::to_value(class).map_err(io)?,
        csv: format!("{class}\n"),
        default: Format::Csv,
    })
}

fn range<S: Scalar>(src: &str) -> Result<Output> {
    let r = moment_range(&MomentVector::new(parse_list::<S>(src)?))?;
    Ok(Output {
        json: json!({
            "c_minus": output::json(&r.c_minus),
            "c_plus": output::json(&r.c_plus),
            "width": output::json(&r.width),
        }),
        csv: format!("c_minus,c_plus,width\n{}", output::row(&[r.c_minus, r.c_plus, r.width])),
        default: Format::Json,
    })
}

fn sample(n: usize, count: usize, k: usize, canonical: bool, seed: u64) -> Result<Output> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 1 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    let rows: Vec<Vec<f64>> = if canonical {
        sample_batch_canonical(n, count, seed, k).into_iter().map(|p| p.into_entries()).collect()
    } else {
        sample_batch(n, count, seed, k).into_iter().map(|c| c.into_entries()).collect()
    };
    let prefix = if canonical { "p" } else { "c" };
    let header: Vec<String> = (1..=k).map(|i| format!("{prefix}{i}")).collect();
    let mut csv = header.join(",") + "\n";
    for r in &rows {
        csv += &output::row(r);
    }
    Ok(Output { json: json!(rows), csv, default: Format::Csv })
}

fn scalar_output(key: &str, v: f64) -> Output {
    Output { json: json!({ key: v }), csv: output::float(v), default: Format::Csv }
}

fn rate_cmd(cli: &Cli, rate: &RateCommand) -> Result<Output> {
    match rate {
        RateCommand::Ik(point) => {
            let value = match mode(cli, Mode::Exact) {
                Mode::Exact => rate_ik_point::<Rational>(point)?,
                Mode::Float => rate_ik_point::<f64>(point)?,
            };
            Ok(scalar_output("rate", value))
        }
        RateCommand::Jk { x } => match mode(cli, Mode::Exact) {
            Mode::Exact => rate_jk_output::<Rational>(x),
            Mode::Float => rate_jk_output::<f64>(x),
        },
        RateCommand::Kullback { polynomial, density, tol } => {
            float_only(cli, "the information is a quadrature")?;
            let mu = match (polynomial, density) {
                (Some(p), None) => MeasureSpec::reciprocal_polynomial(&Polynomial::parse(p)?)?,
                (None, Some(g)) => MeasureSpec::new(Some(Expr::parse(g)?.into_fn()), Vec::new(), Vec::new())?,
                _ => return Err(Error::InvalidInput("give exactly one of --polynomial and --density".into())),
            };
            Ok(scalar_output("information", reversed_kullback(&mu, *tol)?))
        }
        RateCommand::Dual { moments, tol } => {
            float_only(cli, "the dual objective is a quadrature")?;
            let s = dual_hk_maximize(&MomentVector::new(parse_list::<f64>(&moments.moments)?), *tol)?;
            let json = json!({
                "value": s.value,
                "lambda0": s.lambda0,
                "lambda": s.lambda,
                "gradient_norm": s.gradient_norm,
                "quadrature_order": s.quadrature_order,
                "iterations": s.iterations,
            });
            Ok(Output { csv: output::float(s.value), json, default: Format::Json })
        }
        RateCommand::Range { moments, check, polynomial, order } => {
            if let Some(p) = polynomial {
                float_only(cli, "moments of ν/P are quadratures")?;
                let j = order.expect("clap requires --order");
                let r = polynomial_case_range(&Polynomial::parse(p)?, j)?;
                return Ok(Output {
                    csv: output::float(r.computed),
                    json: serde_json::to_value(&r).map_err(io)?,
                    default: Format::Json,
                });
            }
            let src = moments
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("give --moments or --polynomial".into()))?;
            if *check {
                float_only(cli, "the dual prediction is a quadrature")?;
                let r = range_size_checked(&MomentVector::new(parse_list::<f64>(src)?), 1e-9)?;
                return Ok(Output {
                    csv: output::float(r.width),
                    json: serde_json::to_value(&r).map_err(io)?,
                    default: Format::Json,
                });
            }
            match mode(cli, Mode::Exact) {
                Mode::Exact => width_output::<Rational>(src),
                Mode::Float => width_output::<f64>(src),
            }
        }
        RateCommand::Tilt { f0, tol } => {
            float_only(cli, "the tilt limit needs quadrature")?;
            let s = tilt_limit(Expr::parse(f0)?.into_fn(), *tol)?;
            Ok(Output {
                csv: output::float(s.lambda_star),
                json: serde_json::to_value(&s).map_err(io)?,
                default: Format::Json,
            })
        }
    }
}

fn rate_ik_point<S: Scalar>(point: &PointArg) -> Result<f64> {
    if let Some(src) = &point.moments {
        Ok(rate_ik(&MomentVector::new(parse_list::<S>(src)?)))
    } else {
        let src = point.canonical.as_deref().expect("clap requires one of the two");
        Ok(rate_ik_canonical(&CanonicalVector::new(parse_list::<S>(src)?)?))
    }
}

fn rate_jk_output<S: Scalar>(src: &str) -> Result<Output> {
    let v = rate_jk(&parse_list::<S>(src)?)?;
    Ok(Output { json: json!({ "rate": output::json(&v) }), csv: output::row(&[v]), default: Format::Csv })
}

fn width_output<S: Scalar>(src: &str) -> Result<Output> {
    let w = range_size(&MomentVector::new(parse_list::<S>(src)?))?;
    Ok(Output { json: json!({ "width": output::json(&w) }), csv: output::row(&[w]), default: Format::Csv })
}

fn experiment(cli: &Cli, id: Option<&str>, path: Option<&PathBuf>) -> Result<u8> {
    let mut config = match (path, id) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        (None, Some(id)) => ExperimentConfig::new(Experiment::default_for(id)?, 0),
        (None, None) => return Err(Error::InvalidInput("give --id or --config".into())),
    };
    if let Some(id) = id {
        if id != config.experiment.id() {
            return Err(Error::Config(format!(
                "--id {id} does not match the config's experiment {}",
                config.experiment.id()
            )));
        }
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let report = momentspace_lab::run(&config)?;
    let dir = cli.out.clone().or_else(|| config.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let stem = config.experiment.id();
    emit(&report.to_csv()?, Some(&dir.join(format!("{stem}.csv"))))?;
    emit(&report.to_json()?, Some(&dir.join(format!("{stem}.json"))))?;
    for check in &report.checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        let kind = if check.hard { "" } else { " (observation)" };
        println!("{verdict} {}{kind}: {}", check.name, check.detail);
    }
    Ok(if report.passed() { 0 } else { 1 })
}
